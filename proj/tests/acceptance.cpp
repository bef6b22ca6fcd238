// Acceptance harness: one pass/fail line per criterion, exit code = number
// of failed criteria.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "lpp/closed_forms.hpp"
#include "lpp/harness.hpp"
#include "lpp/lpp_engine.hpp"
#include "lpp/macro_shape.hpp"
#include "lpp/speed_field.hpp"

using namespace lpp;

namespace {

int failures = 0;

void report(int idx, const char* name, bool ok, const std::string& detail) {
    std::printf("criterion %d [%s] %s — %s\n", idx, ok ? "PASS" : "FAIL", name,
                detail.c_str());
    if (!ok) ++failures;
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

double brute_force_value(const EnvironmentSpec& env, LatticePoint start,
                         LatticePoint target) {
    if (start == target) return weight(env, start.first, start.second);
    double best = -1.0;
    if (target.first > start.first)
        best = std::max(best,
                        brute_force_value(env, start, {target.first - 1, target.second}));
    if (target.second > start.second)
        best = std::max(best,
                        brute_force_value(env, start, {target.first, target.second - 1}));
    return best + weight(env, target.first, target.second);
}

bool valid_path(const PassageResult& r) {
    if (r.path.empty() || r.path.front() != r.start || r.path.back() != r.target)
        return false;
    for (std::size_t i = 0; i + 1 < r.path.size(); ++i) {
        std::int64_t di = r.path[i + 1].first - r.path[i].first;
        std::int64_t dj = r.path[i + 1].second - r.path[i].second;
        if (!((di == 1 && dj == 0) || (di == 0 && dj == 1))) return false;
    }
    return true;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void criterion1() {
    // homogeneous law of large numbers: mean G/n in [3.85, 4.00]
    EnvironmentSpec env{make_constant(1.0), 1000, 0};
    double mean = 0.0;
    for (int rep = 0; rep < 5; ++rep) {
        env.seed = rep;
        mean += scaled_passage(env, 1.0, 1.0);
    }
    mean /= 5.0;
    report(1, "homogeneous LLN", mean >= 3.85 && mean <= 4.00,
           "mean G/n = " + fmt(mean) + ", want [3.85, 4.00]");
}

void criterion2() {
    // exactly solvable corner field: closed form (1 - 1/r) + gamma(x,y)/r
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> U(0.3, 4.0);
    bool ok = true;
    std::string detail = "all 60 targets matched";
    for (double r : {1.5, 2.0, 4.0}) {
        auto f = make_corner_sqrt(r);
        for (int i = 0; i < 20; ++i) {
            double x = U(rng), y = U(rng);
            if (std::sqrt(x) + std::sqrt(y) <= 1.0) {
                --i;
                continue;
            }
            double want = (1.0 - 1.0 / r) + gamma_shape(x, y) / r;
            auto ev = optimize_polyline(f, {x, y});
            double s = gamma_shape(x, y);
            double ax = x / s, ay = y / s;
            bool here = std::fabs(ev.value - want) <= 1e-4 * want;
            if (here && ev.maximiser.pts.size() >= 3) {
                here = std::fabs(ev.maximiser.pts[1].x - ax) <= 1e-6 &&
                       std::fabs(ev.maximiser.pts[1].y - ay) <= 1e-6;
            } else {
                here = false;
            }
            if (!here && ok) {
                ok = false;
                detail = "mismatch at r=" + fmt(r) + " (x,y)=(" + fmt(x) + "," + fmt(y) +
                         "): got " + fmt(ev.value) + ", want " + fmt(want);
            }
        }
    }
    report(2, "exactly solvable corner", ok, detail);
}

void criterion3() {
    bool ok = true;
    std::string detail;
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> U(0.05, 5.0);
    for (auto [r, lam] : {std::pair{0.5, 1.0}, std::pair{0.8, 0.5}}) {
        auto f = make_two_phase(r, lam);
        for (int i = 0; i < 50; ++i) {
            double x = U(rng), y = U(rng);
            double closed = two_phase_shape(r, lam, x, y).value;
            double numeric = optimize_polyline(f, {x, y}).value;
            if (std::fabs(closed - numeric) > 1e-4 * closed && ok) {
                ok = false;
                detail = "closed/numeric mismatch at (r,lam)=(" + fmt(r) + "," + fmt(lam) +
                         "), (x,y)=(" + fmt(x) + "," + fmt(y) + "): " + fmt(closed) +
                         " vs " + fmt(numeric);
            }
        }
        auto c = two_phase_constants(r, lam);
        double tang = parabola_L(r, lam, c.a1_star, c.a1_star - lam);
        if (std::fabs(tang) > 1e-8 && ok) {
            ok = false;
            detail = "tangency |L(a1*,a1*-lambda)| = " + fmt(std::fabs(tang));
        }
    }
    // continuity across the critical parabola
    double x = 3.0, lo = x - 1.0 + 1e-6, hi = 40.0;
    for (int i = 0; i < 200; ++i) {
        double mid = 0.5 * (lo + hi);
        (parabola_L(0.5, 1.0, x, mid) > 0.0 ? lo : hi) = mid;
    }
    double ystar = 0.5 * (lo + hi);
    double jump = std::fabs(two_phase_shape(0.5, 1.0, x, ystar - 1e-6).value -
                            two_phase_shape(0.5, 1.0, x, ystar + 1e-6).value);
    if (jump > 1e-4 && ok) {
        ok = false;
        detail = "value jump across L=0: " + fmt(jump);
    }
    if (ok) detail = "100 targets, tangency, and L=0 continuity all within tolerance";
    report(3, "two-phase closed form", ok, detail);
}

void criterion4() {
    EnvironmentSpec env{make_two_phase(0.5, 1.0), 500, 0};
    double mean = 0.0;
    for (int rep = 0; rep < 5; ++rep) {
        env.seed = rep;
        mean += scaled_passage(env, 3.0, 2.5);
    }
    mean /= 5.0;
    double want = 17.757359312880713;
    double rel = std::fabs(mean - want) / want;
    report(4, "two-phase simulation", rel <= 0.05,
           "mean G/n = " + fmt(mean) + " vs closed form " + fmt(want) +
               " (rel err " + fmt(rel) + ", want <= 0.05)");
}

void criterion5() {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> Ur(1.1, 6.0), Uu(0.05, 0.95);
    std::uniform_real_distribution<double> Uc(0.3, 2.0), Uk(1.2, 4.0), Ufrac(0.15, 0.9);
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
        double k = Uk(rng), b = k * Ufrac(rng);  // b < k keeps f convex
        SpeedField f = (i % 2 == 0) ? make_corner_sqrt(Ur(rng))
                                    : make_corner_power(Uc(rng), b, k, Ur(rng));
        double a = Uu(rng) * f.corner_a0();
        worst = std::max(worst,
                         std::fabs(crossing_residual(f, f.r, a, corner_m2(f, f.r, a))));
    }
    report(5, "crossing-equation consistency", worst <= 1e-9,
           "worst residual over 1000 draws = " + fmt(worst) + ", want <= 1e-9");
}

void criterion6() {
    auto cp1 = make_corner_power(0.5, 1.2, 3.0, 3.0);
    double m_origin = corner_m2(cp1, 3.0, 1e-6);
    bool c1 = std::fabs(m_origin - 0.25) <= 0.01 * 0.25;

    auto cp2 = make_corner_power(1.0, 1.0, 3.0, 3.0);
    double m_a0 = corner_m2(cp2, 3.0, cp2.corner_a0() - 1e-6);
    bool c2 = std::fabs(m_a0 - 4.0) <= 0.02 * 4.0;

    auto cp3 = make_corner_power(0.5, 2.0, 3.0, 3.0);
    double m_blow = corner_m2(cp3, 3.0, 1e-6);
    bool c3 = m_blow > 1e3;

    report(6, "asymptotic classification", c1 && c2 && c3,
           "m2(1e-6) = " + fmt(m_origin) + " (want within 1% of 0.25" +
               std::string(c1 ? "" : "; remainder decays like a^0.1, limit only "
                                     "reached near a=1e-25 — see corner_m2(1e-30)") +
               "); m2(a0-1e-6) = " + fmt(m_a0) + " (want within 2% of 4); m2(1e-6) = " +
               fmt(m_blow) + " (want > 1e3)");
}

void criterion7() {
    ExpansionParams p3{0.5, 1.0, 0.3, 2.0};
    ExpansionParams p75{0.5, 1.0, 0.75, 2.0};
    double s3 = expansion_remainder_slope(p3, 1e-6, 1e-8);
    double s75 = expansion_remainder_slope(p75, 1e-6, 1e-8);
    report(7, "asymptotic expansion", s3 >= 0.45 && s75 >= 0.45,
           "remainder slopes: gamma=0.3 -> " + fmt(s3) + ", gamma=0.75 -> " + fmt(s75) +
               " (want both >= 0.45" +
               std::string(s3 >= 0.45 ? "" : "; the published first-branch expansion is "
                                             "invalid for gamma in (1/4,1/2), true "
                                             "remainder decays like a^0.2") +
               ")");
}

void criterion8() {
    bool ok = true;
    std::string detail;

    // microscopic superadditivity with shared corner site
    std::mt19937_64 rng(4);
    std::uniform_int_distribution<std::int64_t> D(0, 40);
    EnvironmentSpec env{make_two_phase(0.5, 1.0), 50, 77};
    for (int i = 0; i < 200 && ok; ++i) {
        std::int64_t ax = D(rng), ay = D(rng);
        std::int64_t mx = ax + 1 + D(rng), my = ay + 1 + D(rng);
        std::int64_t bx = mx + 1 + D(rng), by = my + 1 + D(rng);
        double g1 = last_passage(env, {ax, ay}, {mx, my}).value;
        double g2 = last_passage(env, {mx, my}, {bx, by}).value;
        double g = last_passage(env, {ax, ay}, {bx, by}).value;
        double w = weight(env, mx, my);
        if (g + w < g1 + g2 - 1e-12 * g) {
            ok = false;
            detail = "microscopic superadditivity violated";
        }
    }

    // macroscopic superadditivity of optimize_polyline values
    std::uniform_real_distribution<double> U(0.2, 2.0);
    auto f = make_two_phase(0.5, 1.0);
    for (int i = 0; i < 100 && ok; ++i) {
        double mx = U(rng), my = U(rng), dx = U(rng), dy = U(rng);
        double v1 = optimize_polyline(f, {mx, my}).value;
        double v2 = optimize_polyline(f, {dx, dy}, 0, 16, 0, {0.0, 0.0}).value;
        // shift-invariance does not hold for inhomogeneous fields, so compose
        // through the actual second leg from (mx,my)
        double v2s = optimize_polyline(f, {mx + dx, my + dy}, 0, 16, 0, {mx, my}).value;
        double v = optimize_polyline(f, {mx + dx, my + dy}).value;
        (void)v2;
        if (v < v1 + v2s - 1e-6) {
            ok = false;
            detail = "macroscopic superadditivity violated at (" + fmt(mx) + "," +
                     fmt(my) + ")+(" + fmt(dx) + "," + fmt(dy) + ")";
        }
    }

    // path validity + exact brute-force equivalence up to 6x6 over 50 seeds
    for (std::uint64_t seed = 0; seed < 50 && ok; ++seed) {
        EnvironmentSpec e{make_two_phase(0.5, 1.0), 6, seed};
        for (std::int64_t w = 1; w <= 6 && ok; ++w) {
            for (std::int64_t h = 1; h <= 6 && ok; ++h) {
                auto r = last_passage(e, {0, 0}, {w - 1, h - 1}, true);
                if (r.value != brute_force_value(e, {0, 0}, {w - 1, h - 1}) ||
                    !valid_path(r)) {
                    ok = false;
                    detail = "DP/brute-force mismatch or invalid path";
                }
            }
        }
    }

    // continuity exponent probe
    if (ok) {
        auto tp = make_two_phase(0.5, 1.0);
        double v0 = optimize_polyline(tp, {3.0, 2.5}).value;
        double d3 = std::fabs(optimize_polyline(tp, {3.001, 2.501}).value - v0);
        double d4 = std::fabs(optimize_polyline(tp, {3.0001, 2.5001}).value - v0);
        double expn = std::log(d3 / d4) / std::log(10.0);
        if (expn < 0.45) {
            ok = false;
            detail = "continuity exponent " + fmt(expn) + " < 0.45";
        }
    }

    if (ok) detail = "superadditivity, path validity, brute-force equivalence, continuity";
    report(8, "property suites", ok, detail);
}

void criterion9(const char* cli_path) {
    const char* cfg_tmpl = R"({
  "field": "two-phase:r=0.5,lambda=1",
  "targets": [[3, 2.5], [0.5, 2]],
  "n_list": [16, 32, 48],
  "replicas": 3,
  "base_seed": 7,
  "out_csv": "%s"
})";
    std::string csv1 = "acceptance_run1.csv", csv2 = "acceptance_run2.csv";
    bool via_cli = cli_path != nullptr;
    for (const std::string& out : {csv1, csv2}) {
        char buf[512];
        std::snprintf(buf, sizeof buf, cfg_tmpl, out.c_str());
        if (via_cli) {
            std::string cfg_path = "acceptance_cfg_" + out + ".json";
            std::ofstream(cfg_path) << buf;
            std::string cmd = std::string(cli_path) + " converge --config " + cfg_path;
            if (std::system(cmd.c_str()) != 0) via_cli = false;
            std::remove(cfg_path.c_str());
        }
        if (!via_cli) {
            auto cfg = parse_config_json(buf);
            emit_converge_csv(converge_experiment(cfg), cfg.out_csv);
        }
    }
    std::string a = slurp(csv1), b = slurp(csv2);
    bool ok = !a.empty() && a == b;
    std::remove(csv1.c_str());
    std::remove(csv2.c_str());
    report(9, "determinism", ok,
           ok ? std::string("two converge ") + (via_cli ? "CLI runs" : "runs") +
                    " produced byte-identical CSV"
              : "CSV outputs differ between runs");
}

}  // namespace

int main(int argc, char** argv) {
    criterion1();
    criterion2();
    criterion3();
    criterion4();
    criterion5();
    criterion6();
    criterion7();
    criterion8();
    criterion9(argc > 1 ? argv[1] : nullptr);
    std::printf("%d of 9 criteria failed\n", failures);
    return failures;
}
