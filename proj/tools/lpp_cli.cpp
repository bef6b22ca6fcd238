#include <cstdio>
#include <iostream>
#include <stdexcept>
#include <string>

#include <CLI11.hpp>

#include "lpp/closed_forms.hpp"
#include "lpp/harness.hpp"
#include "lpp/lpp_engine.hpp"

using namespace lpp;

namespace {

void print_shape(const ShapeEval& e) {
    std::printf("gamma = %.17g\n", e.value);
    std::printf("branch = %s%s\n", e.branch.c_str(), e.non_unique ? " (non-unique)" : "");
    std::printf("maximiser =");
    for (const auto& p : e.maximiser.pts) std::printf(" (%.12g, %.12g)", p.x, p.y);
    std::printf("\n");
    for (const auto& [k, v] : e.residuals) std::printf("residual %s = %.6g\n", k.c_str(), v);
}

int run(int argc, char** argv) {
    CLI::App app{"inhomogeneous last-passage percolation: shape functions and simulation"};
    app.require_subcommand(1);

    std::string field_spec, config_path, path_file, method = "closed";
    double x = 0, y = 0, amin = 0, amax = 0, f0 = 0, gamma_exp = 0, cc = 0, rr = 0;
    std::int64_t n = 100;
    std::uint64_t seed = 0;
    int points = 0;
    bool log_grid = false;

    auto* solve = app.add_subcommand("solve", "evaluate the shape function at a target");
    solve->add_option("--field", field_spec)->required();
    solve->add_option("--x", x)->required();
    solve->add_option("--y", y)->required();
    solve->add_option("--method", method)->check(CLI::IsMember({"closed", "numeric"}));

    auto* simulate = app.add_subcommand("simulate", "one last-passage DP run");
    simulate->add_option("--field", field_spec)->required();
    simulate->add_option("--n", n)->required();
    simulate->add_option("--seed", seed)->required();
    simulate->add_option("--x", x)->required();
    simulate->add_option("--y", y)->required();
    simulate->add_option("--path", path_file);

    auto* converge = app.add_subcommand("converge", "convergence study from a JSON config");
    converge->add_option("--config", config_path)->required();

    auto* paths = app.add_subcommand("paths", "micro/macro path overlay from a JSON config");
    paths->add_option("--config", config_path)->required();

    auto* crossing = app.add_subcommand("crossing", "corner-model crossing candidates");
    crossing->add_option("--field", field_spec)->required();
    crossing->add_option("--x", x)->required();
    crossing->add_option("--y", y)->required();

    auto* m2sweep = app.add_subcommand("m2sweep", "tabulate m2 along the corner curve");
    m2sweep->add_option("--field", field_spec)->required();
    m2sweep->add_option("--amin", amin)->required();
    m2sweep->add_option("--amax", amax)->required();
    m2sweep->add_option("--points", points)->required();
    m2sweep->add_flag("--log", log_grid);
    std::string out_csv;
    m2sweep->add_option("--out", out_csv);

    auto* expand = app.add_subcommand("expand", "appendix expansion table for m2 near 0");
    expand->add_option("--f0", f0)->required();
    expand->add_option("--gamma", gamma_exp)->required();
    expand->add_option("--c", cc)->required();
    expand->add_option("--r", rr)->required();

    CLI11_PARSE(app, argc, argv);

    if (solve->parsed()) {
        SpeedField field = parse_field_spec(field_spec);
        ShapeEval e;
        if (method == "numeric") {
            e = optimize_polyline(field, {x, y}, field.family == Family::StepGrid ? 2 : 0);
        } else {
            ExperimentConfig cfg;
            e = [&] {
                switch (field.family) {
                    case Family::Constant: {
                        ShapeEval s;
                        s.value = gamma_homog(field.r, x, y);
                        s.branch = "straight";
                        s.maximiser.pts = {{0, 0}, {x, y}};
                        return s;
                    }
                    case Family::ShiftedTwoPhase: return two_phase_shape(field.r, field.lambda, x, y);
                    case Family::CornerPower:
                    case Family::CornerSqrt: return corner_shape(field, field.r, x, y);
                    case Family::StepGrid: return optimize_polyline(field, {x, y}, 2);
                }
                throw std::logic_error("bad family");
            }();
        }
        print_shape(e);
        return 0;
    }
    if (simulate->parsed()) {
        SpeedField field = parse_field_spec(field_spec);
        EnvironmentSpec env{field, n, seed};
        LatticePoint target{static_cast<std::int64_t>(n * x), static_cast<std::int64_t>(n * y)};
        auto res = last_passage(env, {0, 0}, target, !path_file.empty());
        std::printf("G = %.17g\n", res.value);
        std::printf("G/n = %.17g\n", res.value / static_cast<double>(n));
        if (!path_file.empty()) {
            std::vector<std::vector<std::string>> rows;
            for (const auto& p : res.path)
                rows.push_back({std::to_string(p.first), std::to_string(p.second)});
            emit_csv({"i", "j"}, rows, path_file);
        }
        return 0;
    }
    if (converge->parsed()) {
        auto cfg = load_config(config_path);
        auto rows = converge_experiment(cfg);
        if (cfg.out_csv.empty()) throw std::invalid_argument("config: out_csv is required");
        emit_converge_csv(rows, cfg.out_csv);
        if (!cfg.out_svg.empty()) {
            // abs_err vs n, one series per target, replica-averaged
            std::vector<SvgSeries> series;
            for (const auto& t : cfg.targets) {
                SvgSeries s;
                s.label = "target (" + std::to_string(t.x) + ", " + std::to_string(t.y) + ")";
                for (auto nn : cfg.n_list) {
                    double sum = 0;
                    int cnt = 0;
                    for (const auto& r : rows)
                        if (r.n == nn && r.target_x == t.x && r.target_y == t.y) {
                            sum += r.abs_err;
                            ++cnt;
                        }
                    if (cnt) s.points.push_back({static_cast<double>(nn), sum / cnt});
                }
                series.push_back(std::move(s));
            }
            emit_svg(series, cfg.out_svg, "n", "mean |G/n - gamma|");
        }
        std::printf("wrote %zu rows to %s\n", rows.size(), cfg.out_csv.c_str());
        return 0;
    }
    if (paths->parsed()) {
        auto cfg = load_config(config_path);
        auto rows = path_overlay(cfg);
        if (cfg.out_csv.empty()) throw std::invalid_argument("config: out_csv is required");
        emit_overlay_csv(rows, cfg.out_csv);
        std::printf("wrote %zu rows to %s\n", rows.size(), cfg.out_csv.c_str());
        return 0;
    }
    if (crossing->parsed()) {
        SpeedField field = parse_field_spec(field_spec);
        auto roots = corner_crossings(field, field.r, x, y);
        for (const auto& c : roots)
            std::printf("type-C a=%.12g f(a)=%.12g m1=%.12g m2=%.12g D=%.12g residual=%.3g "
                        "value=%.12g\n",
                        c.a, f_eval(field, c.a), c.m1, c.m2, c.D_a, c.residual, c.value);
        double f0v = f_eval(field, 0.0), a0 = field.corner_a0();
        if (y >= f0v)
            std::printf("type-B vertical value=%.12g\n",
                        f0v + gamma_shape(x, y - f0v) / field.r);
        if (x >= a0)
            std::printf("type-B horizontal value=%.12g\n",
                        a0 + gamma_shape(x - a0, y) / field.r);
        auto e = corner_shape(field, field.r, x, y);
        std::printf("winner: %s value=%.12g%s\n", e.branch.c_str(), e.value,
                    e.non_unique ? " (non-unique)" : "");
        return 0;
    }
    if (m2sweep->parsed()) {
        SpeedField field = parse_field_spec(field_spec);
        auto rows = m2_sweep(field, field.r, amin, amax, points, log_grid);
        auto pred = classify_m2_limit(field, field.r, CurveEnd::origin);
        std::string note;
        switch (pred.kind) {
            case M2LimitPrediction::Kind::finite:
                note = "predicted limsup m2 (a->0) = " + csv_number(pred.value);
                break;
            case M2LimitPrediction::Kind::infinite: note = "predicted limsup m2 (a->0) = inf"; break;
            case M2LimitPrediction::Kind::zero: note = "predicted limsup m2 (a->0) = 0"; break;
            case M2LimitPrediction::Kind::indeterminate:
                note = "prediction indeterminate: " + pred.note;
                break;
        }
        if (!out_csv.empty()) {
            emit_m2_csv(rows, out_csv, note);
            std::printf("wrote %zu rows to %s\n", rows.size(), out_csv.c_str());
        } else {
            std::printf("# %s\n", note.c_str());
            std::printf("a,m1,m2,D_a,residual\n");
            for (const auto& r : rows)
                std::printf("%.17g,%.17g,%.17g,%.17g,%.17g\n", r.a, r.m1, r.m2, r.D_a, r.residual);
        }
        return 0;
    }
    if (expand->parsed()) {
        ExpansionParams p{f0, cc, gamma_exp, rr};
        std::printf("a,lhs,leading,remainder\n");
        for (double a = 1e-2; a >= 1e-9; a /= 10.0) {
            auto e = expansion_check(p, a);
            std::printf("%.3g,%.17g,%.17g,%.17g\n", a, e.lhs, e.leading, e.remainder);
        }
        std::printf("# remainder log-log slope over a = 1e-6, 1e-8: %.6g\n",
                    expansion_remainder_slope(p, 1e-6, 1e-8));
        return 0;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::domain_error& e) {
        std::cerr << "domain error: " << e.what() << "\n";
        return 3;
    } catch (const std::ios_base::failure& e) {
        std::cerr << "i/o error: " << e.what() << "\n";
        return 4;
    }
}
