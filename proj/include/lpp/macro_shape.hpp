#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "lpp/speed_field.hpp"

namespace lpp {

struct Point {
    double x = 0.0;
    double y = 0.0;
};

// Macroscopic candidate maximiser: ordered waypoints with coordinatewise
// nonnegative increments.
struct Polyline {
    std::vector<Point> pts;
};

struct ShapeEval {
    double value = 0.0;
    Polyline maximiser;
    // one of: straight, trapezoid, two-segment, crossing-C,
    // boundary-B-vertical, boundary-B-horizontal
    std::string branch = "straight";
    std::map<std::string, double> residuals;
    bool non_unique = false;
};

// gamma(x,y) = (sqrt x + sqrt y)^2: the homogeneous rate-1 shape constant.
double gamma_shape(double x, double y);

// Exact shape for a constant field: gamma(x,y)/r.
double gamma_homog(double r, double x, double y);

// Line integral of gamma(dx,dy)/c along the polyline: each segment is split
// at its (finitely many) crossings of the field's discontinuity, and each
// piece contributes gamma(piece)/rate(piece midpoint). Pieces running along
// the discontinuity get the on-curve (min) rate.
double functional_I(const SpeedField& field, const Polyline& p);

// Best value of functional_I over an enumerated candidate class (straight
// line, trapezoid/two-segment entries on a two-phase line, corner-curve
// crossings, axis routes, curve-window chords) plus free-waypoint
// Nelder-Mead multistart refinement. The result is a certified lower bound
// on the shape function.
ShapeEval optimize_polyline(const SpeedField& field, Point target, int free_waypoints = 0,
                            int multistart = 16, std::uint64_t rng_seed = 0,
                            Point start = {0.0, 0.0});

}  // namespace lpp
