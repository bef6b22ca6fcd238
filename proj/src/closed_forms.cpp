#include "lpp/closed_forms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "lpp/optim.hpp"

namespace lpp {

namespace {

double f_curve_ext(const SpeedField& f, double x) {
    return x >= f.corner_a0() ? 0.0 : f_eval(f, x);
}

double f_inverse(const SpeedField& f, double y) {
    double f0 = f_eval(f, 0.0);
    if (y >= f0) return 0.0;
    if (y <= 0.0) return f.corner_a0();
    return bisect_root([&](double a) { return f_eval(f, a) - y; }, 0.0, f.corner_a0(), 1e-14);
}

// Unique positive root s = sqrt(m2) of s^2 - B s + f' = 0 with
// B = (r-1) + r sqrt(m1) + f' (r-1 + r/sqrt(m1)). Algebraically equivalent
// to the closed half-sum form but free of cancellation.
double m2_impl(double m1, double fp, double r) {
    double sm1 = std::sqrt(m1);
    double B = (r - 1.0) + r * sm1 + fp * (r - 1.0 + r / sm1);
    double disc = std::sqrt(B * B - 4.0 * fp);
    double s = (B >= 0.0) ? 0.5 * (B + disc) : (2.0 * fp) / (B - disc);
    return s * s;
}

void require_two_phase_params(double r) {
    if (!(r > 0.0 && r < 1.0)) throw std::invalid_argument("two-phase closed form needs r in (0,1)");
}

}  // namespace

double TwoPhaseConstants::b1_star(double x, double y) const {
    return 0.5 * ((x + y + lambda) + (x - y - lambda) * K);
}

TwoPhaseConstants two_phase_constants(double r, double lambda) {
    require_two_phase_params(r);
    if (!(lambda >= 0.0)) throw std::invalid_argument("two-phase closed form needs lambda >= 0");
    TwoPhaseConstants tc;
    tc.r = r;
    tc.lambda = lambda;
    tc.K = std::sqrt(1.0 + r * r / (4.0 * (1.0 - r)));
    double s = std::sqrt(1.0 - r);
    tc.A = (1.0 + s) * (1.0 + s) / r;
    tc.D = 4.0 * lambda * s / r;
    tc.a1_star = 0.5 * lambda * (tc.K + 1.0);
    return tc;
}

double parabola_L(double r, double lambda, double x, double y) {
    auto tc = two_phase_constants(r, lambda);
    double u = tc.A * x - y / tc.A;
    return u * u - 2.0 * tc.D * (tc.A * x + y / tc.A) + tc.D * tc.D;
}

ShapeEval two_phase_shape(double r, double lambda, double x, double y) {
    require_two_phase_params(r);
    if (x < 0.0 || y < 0.0) throw std::invalid_argument("two_phase_shape: negative target");
    auto tc = two_phase_constants(r, lambda);
    double d = y - (x - lambda);
    ShapeEval out;

    if (d > tol_region) {
        // above the discontinuity line: straight vs trapezoid through the line
        double L = parabola_L(r, lambda, x, y);
        bool linecon = (tc.K > 1.0)
                           ? (y <= (tc.K + 1.0) / (tc.K - 1.0) * x - 2.0 * tc.K / (tc.K - 1.0) * lambda)
                           : false;
        if (x >= tc.a1_star && L > 0.0 && linecon) {
            out.value = (1.0 + tc.A) * x + (1.0 + 1.0 / tc.A) * y - tc.D;
            out.branch = "trapezoid";
            double b1 = tc.b1_star(x, y);
            out.maximiser.pts = {{0.0, 0.0},
                                 {tc.a1_star, tc.a1_star - lambda},
                                 {b1, b1 - lambda},
                                 {x, y}};
        } else {
            out.value = gamma_shape(x, y);
            out.branch = "straight";
            out.maximiser.pts = {{0.0, 0.0}, {x, y}};
        }
        out.residuals["parabola_L"] = L;
        if (std::abs(L) < 1e-8) out.non_unique = true;  // two maximisers on the parabola
        return out;
    }

    if (d >= -tol_region) {
        // target exactly on the line
        if (x >= tc.a1_star) {
            out.value = 4.0 / r * x +
                        lambda * (tc.K + std::sqrt(tc.K * tc.K - 1.0) - 2.0 / r * (1.0 + tc.K));
            out.branch = "two-segment";
            // entry point of the two-segment maximiser (second segment runs
            // along the line at the on-line rate r)
            auto h = [&](double a) {
                return gamma_shape(a, a - lambda) + 4.0 * (x - a) / r;
            };
            double a2 = lambda < x ? golden_section_max(h, lambda, x, 1e-12) : x;
            out.maximiser.pts = {{0.0, 0.0}, {a2, a2 - lambda}, {x, y}};
            out.residuals["case2_consistency"] = out.value - h(a2);
        } else {
            out.value = gamma_shape(x, y);
            out.branch = "straight";
            out.maximiser.pts = {{0.0, 0.0}, {x, y}};
        }
        return out;
    }

    // below the line: single crossing at (a3, a3 - lambda)
    double amax = std::min(x, y + lambda);
    auto h = [&](double a) {
        return gamma_shape(a, a - lambda) + gamma_shape(x - a, y - a + lambda) / r;
    };
    double a3 = amax > lambda ? golden_section_max(h, lambda, amax, 1e-12) : lambda;
    out.value = h(a3);
    out.branch = "two-segment";
    out.maximiser.pts = {{0.0, 0.0}, {a3, a3 - lambda}, {x, y}};
    return out;
}

double corner_D(const SpeedField& f, double r, double a) {
    double fa = f_eval(f, a);
    if (!(a > 0.0 && fa > 0.0)) throw std::domain_error("corner_D: a at/beyond curve endpoints");
    double m1 = fa / a;
    return r * (1.0 + std::sqrt(m1)) * (std::sqrt(a / fa) + 1.0 / f_prime(f, a));
}

double corner_m2(const SpeedField& f, double r, double a) {
    double fa = f_eval(f, a);
    if (!(a > 0.0 && fa > 0.0)) throw std::domain_error("corner_m2: a at/beyond curve endpoints");
    return m2_impl(fa / a, f_prime(f, a), r);
}

double crossing_residual(const SpeedField& f, double r, double a, double m2) {
    double m1 = f_eval(f, a) / a;
    double sm1 = std::sqrt(m1), sm2 = std::sqrt(m2);
    return (r - 1.0) / r + sm1 - sm2 / r +
           f_prime(f, a) / r * (r - 1.0 + r / sm1 - 1.0 / sm2);
}

std::vector<CrossingSolution> corner_crossings(const SpeedField& f, double r, double x, double y) {
    if (!f.is_corner()) throw std::invalid_argument("corner_crossings: not a corner field");
    double a0 = f.corner_a0();
    double f0 = f_eval(f, 0.0);
    double lo = std::max(y < f0 ? f_inverse(f, y) : 0.0, 1e-14 * a0);
    double hi = std::min(x, a0) * (1.0 - 1e-14);
    std::vector<CrossingSolution> roots;
    if (hi <= lo) return roots;

    // crossing-slope equation in product form, safe at a == x
    auto g = [&](double a) { return (y - f_eval(f, a)) - corner_m2(f, r, a) * (x - a); };

    // 4096-point scan, geometrically densified at both ends where m2 blows
    // up or vanishes
    std::vector<double> grid;
    const int N = 4096;
    for (int i = 0; i <= N; ++i) grid.push_back(lo + (hi - lo) * i / N);
    for (int i = 1; i <= 64; ++i) {
        double fr = std::pow(0.8, i) / N;
        grid.push_back(lo + (hi - lo) * fr);
        grid.push_back(hi - (hi - lo) * fr);
    }
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

    double prev = g(grid[0]);
    for (std::size_t i = 1; i < grid.size(); ++i) {
        double cur = g(grid[i]);
        if ((prev < 0.0 && cur > 0.0) || (prev > 0.0 && cur < 0.0) || prev == 0.0) {
            double a = prev == 0.0 ? grid[i - 1] : bisect_root(g, grid[i - 1], grid[i], 1e-12);
            CrossingSolution s;
            s.a = a;
            s.m1 = f_eval(f, a) / a;
            s.m2 = corner_m2(f, r, a);
            s.D_a = corner_D(f, r, a);
            s.residual = crossing_residual(f, r, a, s.m2);
            s.value = gamma_shape(a, f_eval(f, a)) +
                      gamma_shape(std::max(0.0, x - a), std::max(0.0, y - f_eval(f, a))) / r;
            roots.push_back(s);
        }
        prev = cur;
    }
    return roots;
}

ShapeEval corner_shape(const SpeedField& f, double r, double x, double y) {
    if (!f.is_corner()) throw std::invalid_argument("corner_shape: not a corner field");
    if (x < 0.0 || y < 0.0) throw std::invalid_argument("corner_shape: negative target");
    double a0 = f.corner_a0();
    double f0 = f_eval(f, 0.0);
    ShapeEval out;
    if (y <= f_curve_ext(f, x) + tol_region) {
        out.value = gamma_shape(x, y);
        out.branch = "straight";
        out.maximiser.pts = {{0.0, 0.0}, {x, y}};
        return out;
    }

    struct Cand {
        std::string branch;
        double value;
        double a;  // crossing abscissa, or the axis waypoint coordinate
    };
    std::vector<Cand> cands;
    for (const auto& c : corner_crossings(f, r, x, y))
        cands.push_back({"crossing-C", c.value, c.a});
    // direct value maximization over the crossing abscissa guards against
    // roots missed by the sign scan
    {
        double lo = std::max(y < f0 ? f_inverse(f, y) : 0.0, 1e-14 * a0);
        double hi = std::min(x, a0) * (1.0 - 1e-14);
        if (hi > lo) {
            auto val = [&](double a) {
                return gamma_shape(a, f_eval(f, a)) +
                       gamma_shape(std::max(0.0, x - a), std::max(0.0, y - f_eval(f, a))) / r;
            };
            const int N = 2048;
            double besta = lo, bestv = val(lo);
            for (int i = 1; i <= N; ++i) {
                double a = lo + (hi - lo) * i / N;
                double v = val(a);
                if (v > bestv) { bestv = v; besta = a; }
            }
            double w = (hi - lo) / N;
            double a = golden_section_max(val, std::max(lo, besta - w), std::min(hi, besta + w),
                                          1e-13);
            cands.push_back({"crossing-C", val(a), a});
        }
    }
    if (y >= f0)
        cands.push_back({"boundary-B-vertical", f0 + gamma_shape(x, y - f0) / r, 0.0});
    if (x >= a0)
        cands.push_back({"boundary-B-horizontal", a0 + gamma_shape(x - a0, y) / r, a0});
    if (cands.empty()) throw std::domain_error("corner_shape: no admissible candidate");

    std::size_t win = 0;
    for (std::size_t i = 1; i < cands.size(); ++i)
        if (cands[i].value > cands[win].value) win = i;
    out.value = cands[win].value;
    out.branch = cands[win].branch;
    if (out.branch == "crossing-C") {
        double a = cands[win].a;
        out.maximiser.pts = {{0.0, 0.0}, {a, f_eval(f, a)}, {x, y}};
        out.residuals["crossing_residual"] = crossing_residual(f, r, a, corner_m2(f, r, a));
        out.residuals["crossing_a"] = a;
    } else if (out.branch == "boundary-B-vertical") {
        out.maximiser.pts = {{0.0, 0.0}, {0.0, f0}, {x, y}};
    } else {
        out.maximiser.pts = {{0.0, 0.0}, {a0, 0.0}, {x, y}};
    }
    double runner = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < cands.size(); ++i) {
        if (i == win) continue;
        if (cands[i].branch == out.branch && std::abs(cands[i].a - cands[win].a) < 1e-7)
            continue;  // same root re-found by the guard scan
        runner = std::max(runner, cands[i].value);
    }
    if (std::isfinite(runner)) {
        out.residuals["runner_up_gap"] = out.value - runner;
        if (out.value - runner < 1e-9) out.non_unique = true;
    }
    return out;
}

double region_boundary_hyperbola(const SpeedField& f, double r, double x, double y) {
    if (!f.is_corner()) throw std::invalid_argument("region_boundary_hyperbola: not a corner field");
    if (!(r > 1.0)) throw std::invalid_argument("region_boundary_hyperbola: needs r > 1");
    double f0 = f_eval(f, 0.0);
    double a0 = f.corner_a0();
    double q = (a0 - f0) * (a0 - f0) * (r - 1.0) * (r - 1.0);  // (a0-f0)^2 (r-1)^2
    return f0 * f0 * x * x + a0 * a0 * y * y - 2.0 * x * y * (a0 * f0 + 0.5 * q) +
           0.5 * q * (f0 * x + a0 * y) + q * q / 16.0;
}

M2LimitPrediction classify_m2_limit(const SpeedField& f, double r, CurveEnd end) {
    auto oe = order_exponents(f);
    double f0 = f_eval(f, 0.0);
    double a0 = f.corner_a0();
    const double tol = 1e-12;
    if (end == CurveEnd::origin) {
        // f' -> -infinity at 0 for every supported family (alpha > 0)
        if (oe.alpha > 0.5 + tol) {
            if (r > 1.0)
                return {M2LimitPrediction::Kind::finite, 1.0 / ((r - 1.0) * (r - 1.0)), ""};
            return {M2LimitPrediction::Kind::infinite, 0.0, ""};
        }
        if (std::abs(oe.alpha - 0.5) <= tol) {
            double ch = oe.c_alpha;  // c_{1/2}^{(-)} = c_{1/2}^{(+)} for analytic f
            if (ch > std::sqrt(f0)) {
                double rc = ch / (ch - std::sqrt(f0));
                if (std::abs(r - rc) <= 1e-9 * rc)
                    return {M2LimitPrediction::Kind::indeterminate, 0.0,
                            "r on the excluded alpha = 1/2 boundary; the limit depends on the "
                            "crossing-point sequence and is not decided here"};
                if (r > rc) {
                    double s = r - 1.0 - r * std::sqrt(f0) / ch;
                    return {M2LimitPrediction::Kind::finite, 1.0 / (s * s), ""};
                }
            }
            return {M2LimitPrediction::Kind::infinite, 0.0, ""};
        }
        return {M2LimitPrediction::Kind::infinite, 0.0, ""};
    }
    // end == a0: f' -> 0 (beta > 0 for every supported family)
    if (oe.beta > 0.5 + tol) {
        if (r > 1.0) return {M2LimitPrediction::Kind::finite, (r - 1.0) * (r - 1.0), ""};
        return {M2LimitPrediction::Kind::zero, 0.0, ""};
    }
    if (std::abs(oe.beta - 0.5) <= tol) {
        double eta = oe.eta_beta;
        if (eta < 1.0 / std::sqrt(a0)) {
            double rc = 1.0 / (1.0 - eta * std::sqrt(a0));
            if (std::abs(r - rc) <= 1e-9 * rc)
                return {M2LimitPrediction::Kind::indeterminate, 0.0,
                        "r on the excluded beta = 1/2 boundary"};
            if (r > rc) {
                double s = r - 1.0 - r * eta * std::sqrt(a0);
                return {M2LimitPrediction::Kind::finite, s * s, ""};
            }
        }
        return {M2LimitPrediction::Kind::zero, 0.0, ""};
    }
    return {M2LimitPrediction::Kind::zero, 0.0, ""};
}

ExpansionPoint expansion_check(const ExpansionParams& p, double a) {
    if (!(p.gamma_exp > 0.0)) throw std::invalid_argument("expansion_check: gamma_exp must be > 0");
    if (!(p.r > 1.0)) throw std::invalid_argument("expansion_check: needs r > 1");
    if (!(p.f0 > 0.0)) throw std::invalid_argument("expansion_check: needs f0 > 0");
    double ch = p.r * std::sqrt(p.f0) / (p.r - 1.0);
    double g = p.gamma_exp;
    double fa = p.f0 - 2.0 * ch * std::sqrt(a) - p.c / (g + 0.5) * std::pow(a, g + 0.5);
    if (!(fa > 0.0)) throw std::domain_error("expansion_check: a too large, f(a) <= 0");
    double fp = -(ch * std::pow(a, -0.5) + p.c * std::pow(a, g - 0.5));
    double m2 = m2_impl(fa / a, fp, p.r);
    ExpansionPoint out;
    out.lhs = 1.0 / std::sqrt(m2);
    out.leading = (g < 0.5 && p.c != 0.0)
                      ? std::pow(a, 0.5 - g) / (std::abs(p.c) * (p.r - 1.0))
                      : std::pow(a, 0.25) / std::sqrt(ch);
    out.remainder = std::abs(out.lhs - out.leading);
    return out;
}

double expansion_remainder_slope(const ExpansionParams& p, double a1, double a2) {
    double r1 = expansion_check(p, a1).remainder;
    double r2 = expansion_check(p, a2).remainder;
    return std::log(r1 / r2) / std::log(a1 / a2);
}

UniquenessReport uniqueness_probe(const SpeedField& f, double r, Point target, double kappa) {
    auto base = corner_shape(f, r, target.x, target.y);
    if (base.branch == "straight")
        throw std::domain_error("uniqueness_probe: target in the 1-region");
    if (base.branch != "crossing-C")
        throw std::invalid_argument("uniqueness_probe: target has no type-C maximiser");
    double a = base.residuals.at("crossing_a");
    Point cross{a, f_eval(f, a)};
    Point scaled{cross.x + kappa * (target.x - cross.x), cross.y + kappa * (target.y - cross.y)};
    auto sc = corner_shape(f, r, scaled.x, scaled.y);
    UniquenessReport rep;
    rep.a_star = a;
    rep.a_star_scaled = sc.branch == "crossing-C" ? sc.residuals.at("crossing_a")
                                                  : std::numeric_limits<double>::quiet_NaN();
    rep.residual_at_a = crossing_residual(f, r, a, corner_m2(f, r, a));
    rep.same_crossing = std::isfinite(rep.a_star_scaled) && std::abs(rep.a_star_scaled - a) < 1e-8;
    return rep;
}

}  // namespace lpp
