#include "lpp/speed_field.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <stdexcept>

namespace lpp {

namespace {

double inf() { return std::numeric_limits<double>::infinity(); }

void check_bbox(const SpeedField& f, double x, double y) {
    if (!f.bbox.contains(x, y))
        throw std::domain_error("point (" + std::to_string(x) + ", " + std::to_string(y) +
                                ") outside field bbox");
}

// f extended by 0 to the right of a0 so that the curve splits the whole
// quadrant into two regions.
double f_ext(const SpeedField& f, double x) {
    double a0 = f.corner_a0();
    if (x >= a0) return 0.0;
    return f_eval(f, x);
}

double step_cell_rate(const SpeedField& f, std::size_t ci, std::size_t cj) {
    return f.grid_r[cj][ci];
}

// Index of the half-open cell containing v, or the cell to the left/below if
// v sits on a boundary (caller handles the on-boundary min rule).
std::size_t step_cell_index(const std::vector<double>& lines, double v) {
    auto it = std::upper_bound(lines.begin(), lines.end(), v);
    if (it == lines.begin()) throw std::domain_error("step-grid point outside grid");
    std::size_t idx = static_cast<std::size_t>(it - lines.begin()) - 1;
    if (idx >= lines.size() - 1) {
        if (v <= lines.back() + tol_region) idx = lines.size() - 2;
        else throw std::domain_error("step-grid point outside grid");
    }
    return idx;
}

}  // namespace

double SpeedField::corner_a0() const {
    if (family == Family::CornerSqrt) return 1.0;
    if (family == Family::CornerPower) return std::pow(cp_c, cp_k / cp_b);
    throw std::invalid_argument("corner_a0: not a corner family");
}

double SpeedField::rate_low() const {
    switch (family) {
        case Family::Constant: return r;
        case Family::ShiftedTwoPhase: return std::min(1.0, r);
        case Family::CornerPower:
        case Family::CornerSqrt: return std::min(1.0, r);
        case Family::StepGrid: {
            double lo = inf();
            for (const auto& row : grid_r)
                for (double v : row) lo = std::min(lo, v);
            return lo;
        }
    }
    throw std::logic_error("rate_low: bad family");
}

double SpeedField::rate_high() const {
    switch (family) {
        case Family::Constant: return r;
        case Family::ShiftedTwoPhase: return std::max(1.0, r);
        case Family::CornerPower:
        case Family::CornerSqrt: return std::max(1.0, r);
        case Family::StepGrid: {
            double hi = 0.0;
            for (const auto& row : grid_r)
                for (double v : row) hi = std::max(hi, v);
            return hi;
        }
    }
    throw std::logic_error("rate_high: bad family");
}

SpeedField make_constant(double r, BBox bbox) {
    if (!(r > 0.0)) throw std::invalid_argument("constant field needs r > 0");
    SpeedField f;
    f.family = Family::Constant;
    f.r = r;
    f.bbox = bbox;
    return f;
}

SpeedField make_two_phase(double r, double lambda, BBox bbox) {
    if (!(r > 0.0 && r < 1.0)) throw std::invalid_argument("two-phase field needs r in (0,1)");
    if (!(lambda >= 0.0)) throw std::invalid_argument("two-phase field needs lambda >= 0");
    SpeedField f;
    f.family = Family::ShiftedTwoPhase;
    f.r = r;
    f.lambda = lambda;
    f.bbox = bbox;
    return f;
}

SpeedField make_corner_power(double c, double b, double k, double r, BBox bbox) {
    if (!(c > 0.0 && b > 0.0 && k > 0.0 && b < k))
        throw std::invalid_argument("corner-power field needs c,b,k > 0 and b < k");
    if (!(r > 0.0)) throw std::invalid_argument("corner-power field needs r > 0");
    SpeedField f;
    f.family = Family::CornerPower;
    f.cp_c = c;
    f.cp_b = b;
    f.cp_k = k;
    f.r = r;
    f.bbox = bbox;
    return f;
}

SpeedField make_corner_sqrt(double r, BBox bbox) {
    if (!(r > 0.0)) throw std::invalid_argument("corner-sqrt field needs r > 0");
    SpeedField f;
    f.family = Family::CornerSqrt;
    f.r = r;
    f.bbox = bbox;
    return f;
}

SpeedField make_step_grid(std::vector<double> xs, std::vector<double> ys,
                          std::vector<std::vector<double>> rates) {
    if (xs.size() < 2 || ys.size() < 2)
        throw std::invalid_argument("step-grid needs at least two boundaries per axis");
    if (!std::is_sorted(xs.begin(), xs.end()) || !std::is_sorted(ys.begin(), ys.end()))
        throw std::invalid_argument("step-grid boundaries must be sorted");
    if (xs.front() != 0.0 || ys.front() != 0.0)
        throw std::invalid_argument("step-grid must start at 0");
    if (rates.size() != ys.size() - 1)
        throw std::invalid_argument("step-grid rate rows must match y cells");
    for (const auto& row : rates) {
        if (row.size() != xs.size() - 1)
            throw std::invalid_argument("step-grid rate row must match x cells");
        for (double v : row)
            if (!(v > 0.0)) throw std::invalid_argument("step-grid rates must be > 0");
    }
    SpeedField f;
    f.family = Family::StepGrid;
    f.grid_x = std::move(xs);
    f.grid_y = std::move(ys);
    f.grid_r = std::move(rates);
    f.bbox = {f.grid_x.back(), f.grid_y.back()};
    return f;
}

namespace {

std::vector<double> parse_num_list(const std::string& s) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ';')) {
        if (tok.empty()) throw std::invalid_argument("empty entry in numeric list");
        std::size_t pos = 0;
        double v = std::stod(tok, &pos);
        if (pos != tok.size()) throw std::invalid_argument("bad number '" + tok + "'");
        out.push_back(v);
    }
    return out;
}

}  // namespace

SpeedField parse_field_spec(const std::string& spec) {
    auto colon = spec.find(':');
    std::string name = spec.substr(0, colon);
    std::map<std::string, std::string> kv;
    if (colon != std::string::npos) {
        std::stringstream ss(spec.substr(colon + 1));
        std::string pair;
        while (std::getline(ss, pair, ',')) {
            auto eq = pair.find('=');
            if (eq == std::string::npos)
                throw std::invalid_argument("field spec entry '" + pair + "' is not key=value");
            kv[pair.substr(0, eq)] = pair.substr(eq + 1);
        }
    }
    auto take = [&kv](const std::string& key) {
        auto it = kv.find(key);
        if (it == kv.end()) throw std::invalid_argument("field spec missing key '" + key + "'");
        std::string v = it->second;
        kv.erase(it);
        return v;
    };
    auto take_num = [&take](const std::string& key) { return std::stod(take(key)); };
    auto done = [&kv]() {
        if (!kv.empty())
            throw std::invalid_argument("unknown field spec key '" + kv.begin()->first + "'");
    };

    if (name == "constant") {
        double r = take_num("r");
        done();
        return make_constant(r);
    }
    if (name == "two-phase") {
        double r = take_num("r");
        double lambda = take_num("lambda");
        done();
        return make_two_phase(r, lambda);
    }
    if (name == "corner-power") {
        double c = take_num("c"), b = take_num("b"), k = take_num("k"), r = take_num("r");
        done();
        return make_corner_power(c, b, k, r);
    }
    if (name == "corner-sqrt") {
        double r = take_num("r");
        done();
        return make_corner_sqrt(r);
    }
    if (name == "step-grid") {
        auto xs = parse_num_list(take("xs"));
        auto ys = parse_num_list(take("ys"));
        std::string rspec = take("rates");
        done();
        std::vector<std::vector<double>> rates;
        std::stringstream ss(rspec);
        std::string row;
        while (std::getline(ss, row, '|')) rates.push_back(parse_num_list(row));
        return make_step_grid(std::move(xs), std::move(ys), std::move(rates));
    }
    throw std::invalid_argument("unknown field family '" + name + "'");
}

std::string field_spec_string(const SpeedField& f) {
    std::ostringstream os;
    os.precision(17);
    switch (f.family) {
        case Family::Constant: os << "constant:r=" << f.r; break;
        case Family::ShiftedTwoPhase: os << "two-phase:r=" << f.r << ",lambda=" << f.lambda; break;
        case Family::CornerPower:
            os << "corner-power:c=" << f.cp_c << ",b=" << f.cp_b << ",k=" << f.cp_k
               << ",r=" << f.r;
            break;
        case Family::CornerSqrt: os << "corner-sqrt:r=" << f.r; break;
        case Family::StepGrid: {
            os << "step-grid:xs=";
            for (std::size_t i = 0; i < f.grid_x.size(); ++i)
                os << (i ? ";" : "") << f.grid_x[i];
            os << ",ys=";
            for (std::size_t i = 0; i < f.grid_y.size(); ++i)
                os << (i ? ";" : "") << f.grid_y[i];
            os << ",rates=";
            for (std::size_t j = 0; j < f.grid_r.size(); ++j) {
                if (j) os << "|";
                for (std::size_t i = 0; i < f.grid_r[j].size(); ++i)
                    os << (i ? ";" : "") << f.grid_r[j][i];
            }
            break;
        }
    }
    return os.str();
}

double evaluate(const SpeedField& f, double x, double y) {
    check_bbox(f, x, y);
    switch (f.family) {
        case Family::Constant: return f.r;
        case Family::ShiftedTwoPhase: {
            double d = y - (x - f.lambda);
            if (d > tol_region) return 1.0;
            if (d < -tol_region) return f.r;
            return std::min(1.0, f.r);
        }
        case Family::CornerPower:
        case Family::CornerSqrt: {
            double d = y - f_ext(f, x);
            if (d < -tol_region) return 1.0;       // below the curve
            if (d > tol_region) return f.r;        // above the curve
            return std::min(1.0, f.r);
        }
        case Family::StepGrid: {
            // Collect every cell adjacent to (x,y) within the boundary band
            // and take the minimum rate (covers edges and 4-cell corners).
            std::size_t ci = step_cell_index(f.grid_x, x);
            std::size_t cj = step_cell_index(f.grid_y, y);
            double best = inf();
            for (int di = -1; di <= 1; ++di) {
                for (int dj = -1; dj <= 1; ++dj) {
                    std::int64_t ii = static_cast<std::int64_t>(ci) + di;
                    std::int64_t jj = static_cast<std::int64_t>(cj) + dj;
                    if (ii < 0 || jj < 0) continue;
                    std::size_t ui = static_cast<std::size_t>(ii), uj = static_cast<std::size_t>(jj);
                    if (ui >= f.grid_x.size() - 1 || uj >= f.grid_y.size() - 1) continue;
                    // cell [grid_x[ui], grid_x[ui+1]) is adjacent iff the
                    // point lies within tol of its closure
                    if (x < f.grid_x[ui] - tol_region || x > f.grid_x[ui + 1] + tol_region) continue;
                    if (y < f.grid_y[uj] - tol_region || y > f.grid_y[uj + 1] + tol_region) continue;
                    best = std::min(best, step_cell_rate(f, ui, uj));
                }
            }
            return best;
        }
    }
    throw std::logic_error("evaluate: bad family");
}

double discretised_mean(const SpeedField& f, std::int64_t n, std::int64_t i, std::int64_t j) {
    if (n <= 0) throw std::invalid_argument("discretised_mean: n must be positive");
    if (i < 0 || j < 0) throw std::domain_error("discretised_mean: negative lattice index");
    double x = static_cast<double>(i) / static_cast<double>(n);
    double y = static_cast<double>(j) / static_cast<double>(n);
    return 1.0 / evaluate(f, x, y);
}

double f_eval(const SpeedField& f, double a) {
    if (!f.is_corner()) throw std::invalid_argument("f_eval: field has no corner curve");
    double a0 = f.corner_a0();
    if (a < 0.0 || a > a0) throw std::domain_error("f_eval: a outside [0, a0]");
    if (a == 0.0) {
        if (f.family == Family::CornerSqrt) return 1.0;
        return std::pow(f.cp_c, f.cp_k);
    }
    if (a == a0) return 0.0;
    if (f.family == Family::CornerSqrt) {
        double t = 1.0 - std::sqrt(a);
        return t * t;
    }
    double t = f.cp_c - std::pow(a, f.cp_b / f.cp_k);
    return std::pow(t, f.cp_k);
}

double f_prime(const SpeedField& f, double a) {
    if (!f.is_corner()) throw std::invalid_argument("f_prime: field has no corner curve");
    double a0 = f.corner_a0();
    if (!(a > 0.0 && a < a0)) throw std::domain_error("f_prime: a outside (0, a0)");
    if (f.family == Family::CornerSqrt) return -(1.0 - std::sqrt(a)) / std::sqrt(a);
    double bk = f.cp_b / f.cp_k;
    return -f.cp_b * std::pow(a, bk - 1.0) * std::pow(f.cp_c - std::pow(a, bk), f.cp_k - 1.0);
}

OrderExponents order_exponents(const SpeedField& f) {
    if (!f.is_corner()) throw std::invalid_argument("order_exponents: field has no corner curve");
    if (f.family == Family::CornerSqrt) {
        // f'(a) = -(1-sqrt a)/sqrt a: a^{1/2}|f'| -> 1; |f'|/(1-a) -> 1/2.
        return {0.5, 1.0, 1.0, 0.5};
    }
    double c = f.cp_c, b = f.cp_b, k = f.cp_k;
    double a0 = f.corner_a0();
    double alpha = 1.0 - b / k;
    double c_alpha = b * std::pow(c, k - 1.0);
    double beta = k - 1.0;
    // near a0: c - a^{b/k} ~ (b/k) a0^{b/k-1} (a0-a)
    double eta = b * std::pow(b / k, k - 1.0) * std::pow(a0, (b / k - 1.0) * k);
    return {alpha, beta, c_alpha, eta};
}

}  // namespace lpp
