#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lpp/macro_shape.hpp"
#include "lpp/speed_field.hpp"

namespace lpp {

struct ExperimentConfig {
    std::string field_spec;
    std::vector<Point> targets;
    std::vector<std::int64_t> n_list;  // strictly increasing
    int replicas = 5;
    std::uint64_t base_seed = 0;
    std::string out_csv;
    std::string out_svg;  // optional
    int free_waypoints = 0;
    int multistart = 16;
};

ExperimentConfig parse_config_json(const std::string& json_text);
ExperimentConfig load_config(const std::string& path);

struct ResultRow {
    std::string model;
    double target_x, target_y;
    std::int64_t n;
    int replica;
    double g_over_n;
    double gamma_hat;
    double abs_err;
    std::int64_t wall_ms;
};

// Shape value for the field: closed form when one exists, otherwise the
// numeric polyline optimizer.
double shape_value(const SpeedField& field, Point target, const ExperimentConfig& cfg);

// One scaled_passage per (target, n, replica); replica seeds are
// base_seed + replica. Rows come back sorted by (target, n, replica).
std::vector<ResultRow> converge_experiment(const ExperimentConfig& cfg);

struct OverlayRow {
    std::string kind;  // micro | macro
    double target_x, target_y;
    int step_index;
    double px, py;
    std::string branch;
};

// Microscopic maximal path (rescaled by 1/n) and the macroscopic maximiser
// polyline for every target, at n = n_list.front().
std::vector<OverlayRow> path_overlay(const ExperimentConfig& cfg);

struct M2Row {
    double a, m1, m2, D_a, residual;
};

std::vector<M2Row> m2_sweep(const SpeedField& field, double r, double amin, double amax,
                            int points, bool log_grid);

// CSV with 17-significant-digit floats, '\n' line endings, '.' decimals.
void emit_csv(const std::vector<std::string>& header,
              const std::vector<std::vector<std::string>>& rows, const std::string& path,
              const std::vector<std::string>& comment_lines = {});
std::string csv_number(double v);

std::string converge_csv_text(const std::vector<ResultRow>& rows);
void emit_converge_csv(const std::vector<ResultRow>& rows, const std::string& path);
void emit_overlay_csv(const std::vector<OverlayRow>& rows, const std::string& path);
void emit_m2_csv(const std::vector<M2Row>& rows, const std::string& path,
                 const std::string& prediction_comment);

struct SvgSeries {
    std::string label;
    std::vector<Point> points;
};
// Self-contained SVG line/scatter chart with axes and a legend.
void emit_svg(const std::vector<SvgSeries>& series, const std::string& path,
              const std::string& x_label = "x", const std::string& y_label = "y");

}  // namespace lpp
