#include "lpp/macro_shape.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "lpp/optim.hpp"

namespace lpp {

namespace {

constexpr std::size_t max_splits = 8;

double f_curve_ext(const SpeedField& f, double x) {
    return x >= f.corner_a0() ? 0.0 : f_eval(f, x);
}

// Inverse of the (strictly decreasing) corner curve on [0, a0].
double f_inverse(const SpeedField& f, double y) {
    double f0 = f_eval(f, 0.0);
    if (y >= f0) return 0.0;
    if (y <= 0.0) return f.corner_a0();
    return bisect_root([&](double a) { return f_eval(f, a) - y; }, 0.0, f.corner_a0(), 1e-14);
}

double segment_value(const SpeedField& field, Point p, Point q) {
    double dx = q.x - p.x, dy = q.y - p.y;
    if (dx < -1e-12 || dy < -1e-12)
        throw std::invalid_argument("functional_I: segment with negative increment");
    dx = std::max(dx, 0.0);
    dy = std::max(dy, 0.0);
    if (dx == 0.0 && dy == 0.0) return 0.0;

    std::vector<double> ts;  // interior crossing parameters
    switch (field.family) {
        case Family::Constant: break;
        case Family::ShiftedTwoPhase: {
            double g0 = p.y - (p.x - field.lambda);
            double g1 = q.y - (q.x - field.lambda);
            if ((g0 > tol_region && g1 < -tol_region) || (g0 < -tol_region && g1 > tol_region))
                ts.push_back(g0 / (g0 - g1));
            break;
        }
        case Family::CornerPower:
        case Family::CornerSqrt: {
            // g(t) = y(t) - f(x(t)) is nondecreasing along up-right segments.
            auto g = [&](double t) { return p.y + t * dy - f_curve_ext(field, p.x + t * dx); };
            double g0 = g(0.0), g1 = g(1.0);
            if (g0 < -tol_region && g1 > tol_region)
                ts.push_back(bisect_root(g, 0.0, 1.0, 1e-14));
            break;
        }
        case Family::StepGrid: {
            if (dx > 0.0)
                for (double gx : field.grid_x)
                    if (gx > p.x + tol_region && gx < q.x - tol_region) ts.push_back((gx - p.x) / dx);
            if (dy > 0.0)
                for (double gy : field.grid_y)
                    if (gy > p.y + tol_region && gy < q.y - tol_region) ts.push_back((gy - p.y) / dy);
            std::sort(ts.begin(), ts.end());
            break;
        }
    }
    if (ts.size() > max_splits)
        throw std::invalid_argument("functional_I: segment crosses discontinuities too often");

    ts.insert(ts.begin(), 0.0);
    ts.push_back(1.0);
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < ts.size(); ++i) {
        double t0 = ts[i], t1 = ts[i + 1];
        if (t1 <= t0) continue;
        double mx = p.x + 0.5 * (t0 + t1) * dx;
        double my = p.y + 0.5 * (t0 + t1) * dy;
        total += gamma_shape((t1 - t0) * dx, (t1 - t0) * dy) / evaluate(field, mx, my);
    }
    return total;
}

struct Candidate {
    std::string branch;
    Polyline poly;
    double value;
};

void add_candidate(std::vector<Candidate>& out, const SpeedField& field, std::string branch,
                   std::vector<Point> pts) {
    Polyline p{std::move(pts)};
    double v = functional_I(field, p);
    out.push_back({std::move(branch), std::move(p), v});
}

std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace

double gamma_shape(double x, double y) {
    if (x < 0.0 || y < 0.0) throw std::invalid_argument("gamma: negative argument");
    // x + y + 2 sqrt(xy) is exact on the axes, unlike (sqrt x + sqrt y)^2
    return x + y + 2.0 * std::sqrt(x * y);
}

double gamma_homog(double r, double x, double y) {
    if (!(r > 0.0)) throw std::invalid_argument("gamma_homog: r must be > 0");
    return gamma_shape(x, y) / r;
}

double functional_I(const SpeedField& field, const Polyline& p) {
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < p.pts.size(); ++i)
        total += segment_value(field, p.pts[i], p.pts[i + 1]);
    return total;
}

ShapeEval optimize_polyline(const SpeedField& field, Point target, int free_waypoints,
                            int multistart, std::uint64_t rng_seed, Point start) {
    if (target.x < start.x || target.y < start.y)
        throw std::invalid_argument("optimize_polyline: target must dominate start");
    double x = target.x, y = target.y, sx = start.x, sy = start.y;

    std::vector<Candidate> cands;
    // For a corner field, a straight segment that crosses the curve is the
    // degenerate member of the crossing-C family; enumerate it there so the
    // returned maximiser carries the crossing waypoint.
    bool straight_crosses_curve =
        field.is_corner() &&
        start.y < f_curve_ext(field, start.x) - tol_region &&
        target.y > f_curve_ext(field, target.x) + tol_region;
    if (!straight_crosses_curve)
        add_candidate(cands, field, "straight", {start, target});

    if (field.family == Family::ShiftedTwoPhase) {
        // Entry/exit points on the discontinuity line y = x - lambda.
        double lam = field.lambda;
        double amin = std::max({lam, sx, sy + lam});
        double amax = std::min(x, y + lam);
        if (amax > amin + 1e-12) {
            auto two_seg = [&](double a) {
                return functional_I(field, {{start, {a, a - lam}, target}});
            };
            // coarse scan, then golden refinement around the best point
            int N = 512;
            double besta = amin, bestv = -1.0;
            for (int i = 0; i <= N; ++i) {
                double a = amin + (amax - amin) * i / N;
                double v = two_seg(a);
                if (v > bestv) { bestv = v; besta = a; }
            }
            double w = (amax - amin) / N;
            double a2 = golden_section_max(two_seg, std::max(amin, besta - w),
                                           std::min(amax, besta + w), 1e-12);
            add_candidate(cands, field, "two-segment", {start, {a2, a2 - lam}, target});

            auto trap = [&](const std::vector<double>& ab) {
                return functional_I(
                    field, {{start, {ab[0], ab[0] - lam}, {ab[1], ab[1] - lam}, target}});
            };
            auto project = [&](std::vector<double>& ab) {
                ab[0] = std::clamp(ab[0], amin, amax);
                ab[1] = std::clamp(ab[1], amin, amax);
                if (ab[1] < ab[0]) std::swap(ab[0], ab[1]);
            };
            NelderMeadResult best{{}, -1.0};
            for (int s = 0; s < std::max(1, multistart); ++s) {
                double u = (mix64(rng_seed + 2 * s) >> 11) * 0x1p-53;
                double v = (mix64(rng_seed + 2 * s + 1) >> 11) * 0x1p-53;
                std::vector<double> x0 = {amin + u * (amax - amin), amin + v * (amax - amin)};
                auto res = nelder_mead_max(trap, x0, project);
                if (res.value > best.value) best = res;
            }
            if (best.x.empty()) best.x = {a2, a2};
            // polish by alternating golden-section sweeps; Nelder-Mead can
            // stall when the projection collapses its simplex
            double pa = std::min(best.x[0], best.x[1]);
            double pb = std::max(best.x[0], best.x[1]);
            auto trap_ab = [&](double a, double b) {
                return trap({std::min(a, b), std::max(a, b)});
            };
            for (int it = 0; it < 40; ++it) {
                double na = golden_section_max(
                    [&](double a) { return trap_ab(a, pb); }, amin, amax, 1e-13);
                double nb = golden_section_max(
                    [&](double b) { return trap_ab(na, b); }, amin, amax, 1e-13);
                if (std::abs(na - pa) < 1e-13 && std::abs(nb - pb) < 1e-13) {
                    pa = na; pb = nb;
                    break;
                }
                pa = na;
                pb = nb;
            }
            if (pb < pa) std::swap(pa, pb);
            add_candidate(cands, field, "trapezoid",
                          {start, {pa, pa - lam}, {pb, pb - lam}, target});
        }
    }

    double crossing_stationarity = 0.0;
    if (field.is_corner()) {
        double a0 = field.corner_a0();
        double f0 = f_eval(field, 0.0);
        // crossing waypoint (a, f(a)): must dominate start and be dominated
        // by target
        double alo = std::max(sx, y < f0 ? f_inverse(field, y) : 0.0);
        double ahi = std::min({x, a0, sy > 0.0 ? f_inverse(field, sy) : a0});
        if (ahi > alo + 1e-14) {
            auto obj = [&](double a) {
                return functional_I(field, {{start, {a, f_curve_ext(field, a)}, target}});
            };
            // uniform scan with geometrically densified ends (the objective
            // can peak sharply near the curve endpoints)
            std::vector<double> grid;
            int N = 1024;
            for (int i = 0; i <= N; ++i) grid.push_back(alo + (ahi - alo) * i / N);
            for (int i = 1; i <= 32; ++i) {
                double fr = std::pow(0.5, i + 1);
                grid.push_back(alo + (ahi - alo) * fr / N);
                grid.push_back(ahi - (ahi - alo) * fr / N);
            }
            std::sort(grid.begin(), grid.end());
            std::vector<double> vals(grid.size());
            for (std::size_t i = 0; i < grid.size(); ++i) vals[i] = obj(grid[i]);
            // refine every interior local maximum
            double besta = grid[0], bestv = vals[0];
            for (std::size_t i = 0; i < grid.size(); ++i) {
                bool locmax = (i == 0 || vals[i] >= vals[i - 1]) &&
                              (i + 1 == grid.size() || vals[i] >= vals[i + 1]);
                if (!locmax) continue;
                double lo = i == 0 ? grid[0] : grid[i - 1];
                double hi = i + 1 == grid.size() ? grid.back() : grid[i + 1];
                double a = golden_section_max(obj, lo, hi, 1e-13);
                double v = obj(a);
                if (v > bestv) { bestv = v; besta = a; }
            }
            add_candidate(cands, field, "crossing-C",
                          {start, {besta, f_curve_ext(field, besta)}, target});
            double h = 1e-7 * std::max(1.0, ahi - alo);
            if (besta - h > alo && besta + h < ahi)
                crossing_stationarity = (obj(besta + h) - obj(besta - h)) / (2 * h);
        }
        if (sx <= tol_region && y >= f0 && sy <= f0)
            add_candidate(cands, field, "boundary-B-vertical", {start, {0.0, f0}, target});
        if (sy <= tol_region && x >= a0 && sx <= a0)
            add_candidate(cands, field, "boundary-B-horizontal", {start, {a0, 0.0}, target});
    }

    if (free_waypoints > 0) {
        // generic refinement: m free interior waypoints, coordinates
        // parametrized as fractions of the start->target box
        int m = free_waypoints;
        auto build = [&](const std::vector<double>& f) {
            std::vector<double> fx(f.begin(), f.begin() + m), fy(f.begin() + m, f.end());
            std::sort(fx.begin(), fx.end());
            std::sort(fy.begin(), fy.end());
            std::vector<Point> pts{start};
            for (int i = 0; i < m; ++i)
                pts.push_back({sx + fx[i] * (x - sx), sy + fy[i] * (y - sy)});
            pts.push_back(target);
            return pts;
        };
        auto obj = [&](const std::vector<double>& f) {
            return functional_I(field, {build(f)});
        };
        auto project = [&](std::vector<double>& f) {
            for (auto& v : f) v = std::clamp(v, 0.0, 1.0);
        };
        NelderMeadResult best{{}, -1.0};
        for (int s = 0; s < std::max(1, multistart); ++s) {
            std::vector<double> x0(2 * m);
            for (int i = 0; i < 2 * m; ++i)
                x0[i] = (mix64(rng_seed + 1000 + s * 64 + i) >> 11) * 0x1p-53;
            auto res = nelder_mead_max(obj, x0, project);
            if (res.value > best.value) best = res;
        }
        if (!best.x.empty())
            add_candidate(cands, field, m == 1 ? "two-segment" : "trapezoid", build(best.x));
    }

    // fixed enumeration order; strict improvement required to displace
    std::size_t win = 0;
    for (std::size_t i = 1; i < cands.size(); ++i)
        if (cands[i].value > cands[win].value) win = i;
    ShapeEval out;
    out.value = cands[win].value;
    out.maximiser = cands[win].poly;
    out.branch = cands[win].branch;
    double runner = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < cands.size(); ++i) {
        if (i == win || cands[i].branch == cands[win].branch) continue;
        runner = std::max(runner, cands[i].value);
    }
    if (std::isfinite(runner)) {
        out.residuals["runner_up_gap"] = out.value - runner;
        if (out.value - runner < 1e-9) out.non_unique = true;
    }
    if (cands[win].branch == "crossing-C")
        out.residuals["crossing_stationarity"] = crossing_stationarity;
    return out;
}

}  // namespace lpp
