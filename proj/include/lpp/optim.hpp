#pragma once

#include <functional>
#include <vector>

namespace lpp {

// Derivative-free maximization. project (optional) maps a trial point back
// into the feasible set before evaluation.
struct NelderMeadOptions {
    double simplex_tol = 1e-10;  // terminate when the simplex diameter shrinks below
    double value_tol = 1e-12;    // ... or the value spread does
    int max_iters = 2000;
    double initial_step = 0.05;
};

struct NelderMeadResult {
    std::vector<double> x;
    double value;
};

NelderMeadResult nelder_mead_max(const std::function<double(const std::vector<double>&)>& f,
                                 std::vector<double> x0,
                                 const std::function<void(std::vector<double>&)>& project = {},
                                 const NelderMeadOptions& opt = {});

// Golden-section maximization of a unimodal function on [lo, hi].
double golden_section_max(const std::function<double(double)>& f, double lo, double hi,
                          double tol = 1e-12);

// Bisection root of a sign-changing continuous function on [lo, hi].
double bisect_root(const std::function<double(double)>& f, double lo, double hi,
                   double tol = 1e-12);

}  // namespace lpp
