#include "lpp/optim.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace lpp {

NelderMeadResult nelder_mead_max(const std::function<double(const std::vector<double>&)>& f,
                                 std::vector<double> x0,
                                 const std::function<void(std::vector<double>&)>& project,
                                 const NelderMeadOptions& opt) {
    const std::size_t d = x0.size();
    auto eval = [&](std::vector<double> p) {
        if (project) project(p);
        return std::make_pair(f(p), std::move(p));
    };

    std::vector<std::vector<double>> xs;
    std::vector<double> fs;
    if (project) project(x0);
    xs.push_back(x0);
    fs.push_back(f(x0));
    for (std::size_t i = 0; i < d; ++i) {
        auto p = x0;
        p[i] += (p[i] != 0.0 ? std::abs(p[i]) : 1.0) * opt.initial_step;
        auto [fv, pp] = eval(std::move(p));
        xs.push_back(std::move(pp));
        fs.push_back(fv);
    }

    auto order = [&]() {
        std::vector<std::size_t> idx(xs.size());
        for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
        std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return fs[a] > fs[b]; });
        std::vector<std::vector<double>> nx;
        std::vector<double> nf;
        for (auto i : idx) {
            nx.push_back(xs[i]);
            nf.push_back(fs[i]);
        }
        xs = std::move(nx);
        fs = std::move(nf);
    };

    for (int it = 0; it < opt.max_iters; ++it) {
        order();
        double dia = 0.0;
        for (std::size_t i = 1; i < xs.size(); ++i)
            for (std::size_t c = 0; c < d; ++c) dia = std::max(dia, std::abs(xs[i][c] - xs[0][c]));
        if (dia < opt.simplex_tol || std::abs(fs.front() - fs.back()) < opt.value_tol) break;

        std::vector<double> centroid(d, 0.0);
        for (std::size_t i = 0; i + 1 < xs.size(); ++i)
            for (std::size_t c = 0; c < d; ++c) centroid[c] += xs[i][c] / static_cast<double>(d);
        auto mix = [&](double t) {
            std::vector<double> p(d);
            for (std::size_t c = 0; c < d; ++c) p[c] = centroid[c] + t * (centroid[c] - xs.back()[c]);
            return p;
        };

        auto [fr, xr] = eval(mix(1.0));  // reflect
        if (fr > fs[0]) {
            auto [fe, xe] = eval(mix(2.0));  // expand
            if (fe > fr) { xs.back() = std::move(xe); fs.back() = fe; }
            else { xs.back() = std::move(xr); fs.back() = fr; }
        } else if (fr > fs[fs.size() - 2]) {
            xs.back() = std::move(xr);
            fs.back() = fr;
        } else {
            auto [fc, xc] = eval(mix(fr > fs.back() ? 0.5 : -0.5));  // contract
            if (fc > std::max(fr, fs.back())) {
                xs.back() = std::move(xc);
                fs.back() = fc;
            } else {  // shrink toward best
                for (std::size_t i = 1; i < xs.size(); ++i) {
                    for (std::size_t c = 0; c < d; ++c)
                        xs[i][c] = xs[0][c] + 0.5 * (xs[i][c] - xs[0][c]);
                    if (project) project(xs[i]);
                    fs[i] = f(xs[i]);
                }
            }
        }
    }
    order();
    return {xs.front(), fs.front()};
}

double golden_section_max(const std::function<double(double)>& f, double lo, double hi,
                          double tol) {
    if (hi < lo) throw std::invalid_argument("golden_section_max: empty interval");
    const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo, b = hi;
    double x1 = b - phi * (b - a), x2 = a + phi * (b - a);
    double f1 = f(x1), f2 = f(x2);
    while (b - a > tol) {
        if (f1 >= f2) {
            b = x2; x2 = x1; f2 = f1;
            x1 = b - phi * (b - a);
            f1 = f(x1);
        } else {
            a = x1; x1 = x2; f1 = f2;
            x2 = a + phi * (b - a);
            f2 = f(x2);
        }
    }
    return 0.5 * (a + b);
}

double bisect_root(const std::function<double(double)>& f, double lo, double hi, double tol) {
    double flo = f(lo), fhi = f(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if ((flo > 0) == (fhi > 0))
        throw std::invalid_argument("bisect_root: no sign change on interval");
    while (hi - lo > tol) {
        double mid = 0.5 * (lo + hi);
        double fm = f(mid);
        if (fm == 0.0) return mid;
        if ((fm > 0) == (flo > 0)) { lo = mid; flo = fm; }
        else hi = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace lpp
