#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

namespace lpp {

// Absolute tolerance for deciding that a point lies on a discontinuity curve.
inline constexpr double tol_region = 1e-9;

enum class Family { Constant, ShiftedTwoPhase, CornerPower, CornerSqrt, StepGrid };

struct BBox {
    double xmax = 0.0;
    double ymax = 0.0;
    bool contains(double x, double y) const {
        return x >= 0.0 && y >= 0.0 && x <= xmax && y <= ymax;
    }
};

// Piecewise-constant macroscopic speed function c(x,y).
//
// Constant:        c == r everywhere.
// ShiftedTwoPhase: c = 1 above the line y = x - lambda, r below it (0 < r < 1).
// CornerPower:     f(x) = (c - x^(b/k))^k on [0, c^(k/b)]; rate 1 below the
//                  graph of f, r above it.
// CornerSqrt:      f(x) = (1 - sqrt(x))^2 on [0,1]; rates as above.
// StepGrid:        rectangular cells [xs_i,xs_{i+1}) x [ys_j,ys_{j+1}) with
//                  per-cell rates.
//
// On a discontinuity the value is the minimum of the adjacent region values
// (lower semicontinuity).
struct SpeedField {
    Family family = Family::Constant;
    double r = 1.0;       // rate of the second region (or the constant rate)
    double lambda = 0.0;  // two-phase shift
    double cp_c = 0.0, cp_b = 0.0, cp_k = 0.0;  // corner-power parameters
    std::vector<double> grid_x, grid_y;         // step-grid cell boundaries
    std::vector<std::vector<double>> grid_r;    // grid_r[j][i], row-major cells
    BBox bbox;

    bool is_corner() const {
        return family == Family::CornerPower || family == Family::CornerSqrt;
    }
    // Right endpoint a0 of the corner curve domain (f(a0) = 0).
    double corner_a0() const;
    // Smallest / largest rate attained on the bbox.
    double rate_low() const;
    double rate_high() const;
};

SpeedField make_constant(double r, BBox bbox = {1e6, 1e6});
SpeedField make_two_phase(double r, double lambda, BBox bbox = {1e6, 1e6});
SpeedField make_corner_power(double c, double b, double k, double r, BBox bbox = {1e6, 1e6});
SpeedField make_corner_sqrt(double r, BBox bbox = {1e6, 1e6});
SpeedField make_step_grid(std::vector<double> xs, std::vector<double> ys,
                          std::vector<std::vector<double>> rates);

// "family:key=value,..." e.g. "two-phase:r=0.5,lambda=1". Unknown keys are
// errors. Step grids use ';'-separated lists and '|'-separated rate rows:
// "step-grid:xs=0;1;2,ys=0;1;2,rates=1;2|0.5;1".
SpeedField parse_field_spec(const std::string& spec);
std::string field_spec_string(const SpeedField& f);

double evaluate(const SpeedField& f, double x, double y);

// r^(n)_{ij} = 1 / c(i/n, j/n): the mean of the site weight at (i,j).
double discretised_mean(const SpeedField& f, std::int64_t n, std::int64_t i, std::int64_t j);

// Corner-curve evaluation; f_eval accepts the closed domain [0, a0],
// f_prime only the open interior.
double f_eval(const SpeedField& f, double a);
double f_prime(const SpeedField& f, double a);

// Growth orders of f' at the two curve endpoints:
//   alpha, c_alpha:  |f'(a)| ~ c_alpha * a^(-alpha)        as a -> 0
//   beta,  eta_beta: |f'(a)| ~ eta_beta * (a0 - a)^beta    as a -> a0
struct OrderExponents {
    double alpha;
    double beta;
    double c_alpha;   // may be +infinity
    double eta_beta;  // may be +infinity
};
OrderExponents order_exponents(const SpeedField& f);

}  // namespace lpp
