#include "lpp/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "lpp/closed_forms.hpp"
#include "lpp/lpp_engine.hpp"

namespace lpp {

ExperimentConfig parse_config_json(const std::string& json_text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("config parse error: ") + e.what());
    }
    ExperimentConfig cfg;
    try {
        cfg.field_spec = j.at("field").get<std::string>();
        for (const auto& t : j.at("targets"))
            cfg.targets.push_back({t.at(0).get<double>(), t.at(1).get<double>()});
        for (const auto& n : j.at("n_list")) cfg.n_list.push_back(n.get<std::int64_t>());
        cfg.replicas = j.at("replicas").get<int>();
        cfg.base_seed = j.at("base_seed").get<std::uint64_t>();
        cfg.out_csv = j.value("out_csv", std::string{});
        cfg.out_svg = j.value("out_svg", std::string{});
        cfg.free_waypoints = j.value("free_waypoints", 0);
        cfg.multistart = j.value("multistart", 16);
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("config field error: ") + e.what());
    }
    if (cfg.targets.empty()) throw std::invalid_argument("config: targets must be non-empty");
    if (cfg.n_list.empty()) throw std::invalid_argument("config: n_list must be non-empty");
    for (std::size_t i = 1; i < cfg.n_list.size(); ++i)
        if (cfg.n_list[i] <= cfg.n_list[i - 1])
            throw std::invalid_argument("config: n_list must be strictly increasing");
    if (cfg.replicas < 1) throw std::invalid_argument("config: replicas must be >= 1");
    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::ios_base::failure("cannot open config file " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config_json(ss.str());
}

namespace {

ShapeEval shape_eval_for(const SpeedField& field, Point target, int free_waypoints,
                         int multistart) {
    switch (field.family) {
        case Family::Constant: {
            ShapeEval e;
            e.value = gamma_homog(field.r, target.x, target.y);
            e.branch = "straight";
            e.maximiser.pts = {{0.0, 0.0}, target};
            return e;
        }
        case Family::ShiftedTwoPhase:
            return two_phase_shape(field.r, field.lambda, target.x, target.y);
        case Family::CornerPower:
        case Family::CornerSqrt:
            return corner_shape(field, field.r, target.x, target.y);
        case Family::StepGrid:
            return optimize_polyline(field, target, std::max(free_waypoints, 2), multistart);
    }
    throw std::logic_error("shape_eval_for: bad family");
}

}  // namespace

double shape_value(const SpeedField& field, Point target, const ExperimentConfig& cfg) {
    return shape_eval_for(field, target, cfg.free_waypoints, cfg.multistart).value;
}

std::vector<ResultRow> converge_experiment(const ExperimentConfig& cfg) {
    SpeedField field = parse_field_spec(cfg.field_spec);
    std::vector<ResultRow> rows;
    for (std::size_t ti = 0; ti < cfg.targets.size(); ++ti) {
        Point t = cfg.targets[ti];
        double gamma_hat = shape_value(field, t, cfg);
        for (std::int64_t n : cfg.n_list) {
            for (int rep = 0; rep < cfg.replicas; ++rep) {
                EnvironmentSpec env{field, n, cfg.base_seed + static_cast<std::uint64_t>(rep)};
                auto t0 = std::chrono::steady_clock::now();
                double gn = scaled_passage(env, t.x, t.y);
                auto t1 = std::chrono::steady_clock::now();
                ResultRow row;
                row.model = cfg.field_spec;
                row.target_x = t.x;
                row.target_y = t.y;
                row.n = n;
                row.replica = rep;
                row.g_over_n = gn;
                row.gamma_hat = gamma_hat;
                row.abs_err = std::abs(gn - gamma_hat);
                row.wall_ms =
                    std::chrono::duration_cast<std::chrono::milliseconds>(t1 - t0).count();
                rows.push_back(row);
            }
        }
    }
    // deterministic emission order regardless of any execution schedule
    std::stable_sort(rows.begin(), rows.end(), [](const ResultRow& a, const ResultRow& b) {
        if (a.target_x != b.target_x) return a.target_x < b.target_x;
        if (a.target_y != b.target_y) return a.target_y < b.target_y;
        if (a.n != b.n) return a.n < b.n;
        return a.replica < b.replica;
    });
    return rows;
}

std::vector<OverlayRow> path_overlay(const ExperimentConfig& cfg) {
    SpeedField field = parse_field_spec(cfg.field_spec);
    std::int64_t n = cfg.n_list.front();
    std::vector<OverlayRow> rows;
    for (Point t : cfg.targets) {
        auto macro = shape_eval_for(field, t, cfg.free_waypoints, cfg.multistart);
        std::string branch = macro.non_unique ? "non-unique" : macro.branch;
        EnvironmentSpec env{field, n, cfg.base_seed};
        LatticePoint target{static_cast<std::int64_t>(std::floor(n * t.x)),
                            static_cast<std::int64_t>(std::floor(n * t.y))};
        auto pr = last_passage(env, {0, 0}, target, true);
        int step = 0;
        for (const auto& p : pr.path)
            rows.push_back({"micro", t.x, t.y, step++,
                            static_cast<double>(p.first) / static_cast<double>(n),
                            static_cast<double>(p.second) / static_cast<double>(n), branch});
        step = 0;
        for (const auto& p : macro.maximiser.pts)
            rows.push_back({"macro", t.x, t.y, step++, p.x, p.y, branch});
    }
    return rows;
}

std::vector<M2Row> m2_sweep(const SpeedField& field, double r, double amin, double amax,
                            int points, bool log_grid) {
    if (!field.is_corner()) throw std::invalid_argument("m2_sweep: not a corner field");
    if (points < 2) throw std::invalid_argument("m2_sweep: need at least 2 points");
    if (!(amax > amin)) throw std::invalid_argument("m2_sweep: amin must be < amax");
    if (!(amin > 0.0 && amax < field.corner_a0()))
        throw std::domain_error("m2_sweep: grid outside (0, a0)");
    std::vector<M2Row> rows;
    for (int i = 0; i < points; ++i) {
        double f = static_cast<double>(i) / (points - 1);
        double a = log_grid ? amin * std::pow(amax / amin, f) : amin + f * (amax - amin);
        M2Row row;
        row.a = a;
        row.m1 = f_eval(field, a) / a;
        row.m2 = corner_m2(field, r, a);
        row.D_a = corner_D(field, r, a);
        row.residual = crossing_residual(field, r, a, row.m2);
        rows.push_back(row);
    }
    return rows;
}

std::string csv_number(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void emit_csv(const std::vector<std::string>& header,
              const std::vector<std::vector<std::string>>& rows, const std::string& path,
              const std::vector<std::string>& comment_lines) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::ios_base::failure("cannot open output file " + path);
    for (const auto& c : comment_lines) out << "# " << c << "\n";
    for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
    out << "\n";
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i];
        out << "\n";
    }
    if (!out) throw std::ios_base::failure("write failed for " + path);
}

std::string converge_csv_text(const std::vector<ResultRow>& rows) {
    std::ostringstream out;
    out << "model,target_x,target_y,n,replica,g_over_n,gamma_hat,abs_err,wall_ms\n";
    for (const auto& r : rows) {
        out << r.model << ',' << csv_number(r.target_x) << ',' << csv_number(r.target_y) << ','
            << r.n << ',' << r.replica << ',' << csv_number(r.g_over_n) << ','
            << csv_number(r.gamma_hat) << ',' << csv_number(r.abs_err) << ',' << r.wall_ms
            << "\n";
    }
    return out.str();
}

void emit_converge_csv(const std::vector<ResultRow>& rows, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::ios_base::failure("cannot open output file " + path);
    out << converge_csv_text(rows);
    if (!out) throw std::ios_base::failure("write failed for " + path);
}

void emit_overlay_csv(const std::vector<OverlayRow>& rows, const std::string& path) {
    std::vector<std::vector<std::string>> cells;
    for (const auto& r : rows)
        cells.push_back({r.kind, csv_number(r.target_x), csv_number(r.target_y),
                         std::to_string(r.step_index), csv_number(r.px), csv_number(r.py),
                         r.branch});
    emit_csv({"kind", "target_x", "target_y", "step_index", "px", "py", "branch"}, cells, path);
}

void emit_m2_csv(const std::vector<M2Row>& rows, const std::string& path,
                 const std::string& prediction_comment) {
    std::vector<std::vector<std::string>> cells;
    for (const auto& r : rows)
        cells.push_back({csv_number(r.a), csv_number(r.m1), csv_number(r.m2), csv_number(r.D_a),
                         csv_number(r.residual)});
    emit_csv({"a", "m1", "m2", "D_a", "residual"}, cells, path, {prediction_comment});
}

void emit_svg(const std::vector<SvgSeries>& series, const std::string& path,
              const std::string& x_label, const std::string& y_label) {
    double xmin = 0, xmax = 1, ymin = 0, ymax = 1;
    bool first = true;
    for (const auto& s : series) {
        for (const auto& p : s.points) {
            if (first) { xmin = xmax = p.x; ymin = ymax = p.y; first = false; }
            xmin = std::min(xmin, p.x); xmax = std::max(xmax, p.x);
            ymin = std::min(ymin, p.y); ymax = std::max(ymax, p.y);
        }
    }
    if (xmax == xmin) xmax = xmin + 1;
    if (ymax == ymin) ymax = ymin + 1;
    const double W = 720, H = 480, m = 60;
    auto X = [&](double x) { return m + (x - xmin) / (xmax - xmin) * (W - 2 * m); };
    auto Y = [&](double y) { return H - m - (y - ymin) / (ymax - ymin) * (H - 2 * m); };
    static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                   "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};

    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::ios_base::failure("cannot open output file " + path);
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
        << "\" viewBox=\"0 0 " << W << " " << H << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<line x1=\"" << m << "\" y1=\"" << H - m << "\" x2=\"" << W - m << "\" y2=\"" << H - m
        << "\" stroke=\"black\"/>\n";
    out << "<line x1=\"" << m << "\" y1=\"" << m << "\" x2=\"" << m << "\" y2=\"" << H - m
        << "\" stroke=\"black\"/>\n";
    out << "<text x=\"" << W / 2 << "\" y=\"" << H - 15 << "\" text-anchor=\"middle\">" << x_label
        << "</text>\n";
    out << "<text x=\"15\" y=\"" << H / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 15 "
        << H / 2 << ")\">" << y_label << "</text>\n";
    out << "<text x=\"" << m << "\" y=\"" << H - m + 18 << "\" font-size=\"11\">"
        << csv_number(xmin) << "</text>\n";
    out << "<text x=\"" << W - m << "\" y=\"" << H - m + 18
        << "\" text-anchor=\"end\" font-size=\"11\">" << csv_number(xmax) << "</text>\n";
    out << "<text x=\"" << m - 4 << "\" y=\"" << H - m << "\" text-anchor=\"end\" font-size=\"11\">"
        << csv_number(ymin) << "</text>\n";
    out << "<text x=\"" << m - 4 << "\" y=\"" << m << "\" text-anchor=\"end\" font-size=\"11\">"
        << csv_number(ymax) << "</text>\n";
    for (std::size_t si = 0; si < series.size(); ++si) {
        const char* col = colors[si % 8];
        const auto& pts = series[si].points;
        if (pts.size() > 1) {
            out << "<polyline fill=\"none\" stroke=\"" << col << "\" points=\"";
            for (const auto& p : pts) out << X(p.x) << "," << Y(p.y) << " ";
            out << "\"/>\n";
        }
        for (const auto& p : pts)
            out << "<circle cx=\"" << X(p.x) << "\" cy=\"" << Y(p.y) << "\" r=\"2.5\" fill=\""
                << col << "\"/>\n";
        out << "<text x=\"" << W - m - 150 << "\" y=\"" << m + 16 * static_cast<double>(si)
            << "\" font-size=\"12\" fill=\"" << col << "\">" << series[si].label << "</text>\n";
    }
    out << "</svg>\n";
    if (!out) throw std::ios_base::failure("write failed for " + path);
}

}  // namespace lpp
