#pragma once

#include <string>
#include <vector>

#include "lpp/macro_shape.hpp"
#include "lpp/speed_field.hpp"

namespace lpp {

// Constants of the shifted two-phase model (rate 1 above y = x - lambda,
// rate r in (0,1) on and below it).
struct TwoPhaseConstants {
    double K;        // K(r) = sqrt(1 + r^2/(4(1-r)))
    double A;        // (1 + sqrt(1-r))^2 / r
    double D;        // 4 lambda sqrt(1-r) / r
    double a1_star;  // optimal entry point abscissa, (lambda/2)(K+1)
    double b1_star(double x, double y) const;  // optimal exit abscissa for target (x,y)
    double lambda;
    double r;
};

TwoPhaseConstants two_phase_constants(double r, double lambda);

// L(x,y) = (Ax - y/A)^2 - 2D(Ax + y/A) + D^2; the zero set is the critical
// parabola separating straight-line from trapezoid maximisers.
double parabola_L(double r, double lambda, double x, double y);

// Exact shape function of the shifted two-phase model with explicit
// maximiser and branch.
ShapeEval two_phase_shape(double r, double lambda, double x, double y);

// Corner-model crossing machinery: D_a, the second-segment slope m2(a), and
// the first-order (crossing) equation residual.
double corner_D(const SpeedField& f, double r, double a);
double corner_m2(const SpeedField& f, double r, double a);
double crossing_residual(const SpeedField& f, double r, double a, double m2);

// Exact-ish shape for corner fields by enumerating all crossing roots and
// the two axis routes.
ShapeEval corner_shape(const SpeedField& f, double r, double x, double y);

struct CrossingSolution {
    double a;
    double m1;
    double m2;
    double D_a;
    double residual;
    double value;
};
// All type-C crossing roots of (y - f(a))/(x - a) = m2(a), sorted by a.
std::vector<CrossingSolution> corner_crossings(const SpeedField& f, double r, double x, double y);

// Equal-value locus of the two axis routes (r > 1): returns the implicit
// quartic-free form whose zero set is the (possibly degenerate) hyperbola.
double region_boundary_hyperbola(const SpeedField& f, double r, double x, double y);

// Predicted limit of m2 at a curve endpoint, from the order of growth of f'.
struct M2LimitPrediction {
    enum class Kind { finite, infinite, zero, indeterminate } kind;
    double value;  // meaningful for kind == finite
    std::string note;
};
enum class CurveEnd { origin, a0 };
M2LimitPrediction classify_m2_limit(const SpeedField& f, double r, CurveEnd end);

// Asymptotic-expansion probe for the phase-transition derivative form
// -f'(a) = c_half a^{-1/2} + c a^{gamma-1/2} with c_half = r sqrt(f0)/(r-1).
struct ExpansionParams {
    double f0;
    double c;
    double gamma_exp;
    double r;
};
struct ExpansionPoint {
    double lhs;        // 1/sqrt(m2(a)) evaluated exactly
    double leading;    // leading asymptotic term
    double remainder;  // |lhs - leading|
};
ExpansionPoint expansion_check(const ExpansionParams& p, double a);
// log-log slope of the remainder between two evaluation points
double expansion_remainder_slope(const ExpansionParams& p, double a1, double a2);

// Scaling probe around a type-C crossing: rescale the target about the
// crossing point by kappa and report whether the same crossing is selected.
struct UniquenessReport {
    double a_star;          // crossing of the original target
    double a_star_scaled;   // crossing selected for the scaled target
    double residual_at_a;   // crossing residual of the original a* for the scaled target
    bool same_crossing;
};
UniquenessReport uniqueness_probe(const SpeedField& f, double r, Point target, double kappa);

}  // namespace lpp
