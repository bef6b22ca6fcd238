#include "lpp/lpp_engine.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace lpp {

namespace {

// Cell budget for the full-grid engines (~1.2 GB of doubles).
constexpr std::int64_t kMaxCells = 150'000'000;

std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

void check_rect(const EnvironmentSpec& env, LatticePoint start, LatticePoint target) {
    if (start.first > target.first || start.second > target.second)
        throw std::invalid_argument("last_passage: start must be <= target coordinatewise");
    if (start.first < 0 || start.second < 0)
        throw std::domain_error("last_passage: negative lattice point");
    double n = static_cast<double>(env.n);
    if (!env.field.bbox.contains(static_cast<double>(target.first) / n,
                                 static_cast<double>(target.second) / n))
        throw std::domain_error("last_passage: target outside field bbox");
}

// Backtrack an argmax path on a fully stored grid. Ties prefer the
// horizontal predecessor (i-1, j).
std::vector<LatticePoint> backtrack(const std::vector<double>& g, std::int64_t w, std::int64_t h,
                                    LatticePoint start) {
    std::vector<LatticePoint> path;
    std::int64_t u = w - 1, v = h - 1;
    while (true) {
        path.push_back({start.first + u, start.second + v});
        if (u == 0 && v == 0) break;
        if (v == 0) { --u; continue; }
        if (u == 0) { --v; continue; }
        if (g[(v)*w + (u - 1)] >= g[(v - 1) * w + u]) --u;
        else --v;
    }
    std::reverse(path.begin(), path.end());
    return path;
}

void fill_block(const EnvironmentSpec& env, LatticePoint start, std::vector<double>& g,
                std::int64_t w, std::int64_t u0, std::int64_t u1, std::int64_t v0,
                std::int64_t v1) {
    for (std::int64_t v = v0; v < v1; ++v) {
        for (std::int64_t u = u0; u < u1; ++u) {
            double tau = weight(env, start.first + u, start.second + v);
            double best = 0.0;
            if (u > 0 && v > 0) best = std::max(g[v * w + u - 1], g[(v - 1) * w + u]);
            else if (u > 0) best = g[v * w + u - 1];
            else if (v > 0) best = g[(v - 1) * w + u];
            g[v * w + u] = tau + best;
        }
    }
}

}  // namespace

double exp1_draw(std::uint64_t seed, std::int64_t i, std::int64_t j) {
    std::uint64_t h = mix64(seed);
    h = mix64(h ^ static_cast<std::uint64_t>(i));
    h = mix64(h ^ static_cast<std::uint64_t>(j));
    double u = (static_cast<double>(h >> 11) + 1.0) * 0x1p-53;  // in (0,1]
    return -std::log(u);
}

double weight(const EnvironmentSpec& env, std::int64_t i, std::int64_t j) {
    return exp1_draw(env.seed, i, j) * discretised_mean(env.field, env.n, i, j);
}

PassageResult last_passage_serial(const EnvironmentSpec& env, LatticePoint start,
                                  LatticePoint target, bool want_path) {
    check_rect(env, start, target);
    std::int64_t w = target.first - start.first + 1;
    std::int64_t h = target.second - start.second + 1;
    if (w * h > kMaxCells)
        throw std::invalid_argument("last_passage: memory budget exceeded, use "
                                    "last_passage_checkpointed");
    std::vector<double> g(static_cast<std::size_t>(w * h));
    fill_block(env, start, g, w, 0, w, 0, h);
    PassageResult res;
    res.value = g.back();
    res.start = start;
    res.target = target;
    if (want_path) res.path = backtrack(g, w, h, start);
    return res;
}

PassageResult last_passage(const EnvironmentSpec& env, LatticePoint start, LatticePoint target,
                           bool want_path) {
    check_rect(env, start, target);
    std::int64_t w = target.first - start.first + 1;
    std::int64_t h = target.second - start.second + 1;
    if (w * h > kMaxCells)
        throw std::invalid_argument("last_passage: memory budget exceeded, use "
                                    "last_passage_checkpointed");
    std::vector<double> g(static_cast<std::size_t>(w * h));

    // Blocked anti-diagonal wavefront: every block on one diagonal depends
    // only on blocks of earlier diagonals. Each cell performs the same
    // one-add/one-max as the serial reference, so the result is bit-exact.
    constexpr std::int64_t B = 256;
    std::int64_t nbx = (w + B - 1) / B;
    std::int64_t nby = (h + B - 1) / B;
    for (std::int64_t d = 0; d < nbx + nby - 1; ++d) {
        std::int64_t blo = std::max<std::int64_t>(0, d - nbx + 1);
        std::int64_t bhi = std::min(d, nby - 1);
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
        for (std::int64_t by = blo; by <= bhi; ++by) {
            std::int64_t bx = d - by;
            fill_block(env, start, g, w, bx * B, std::min((bx + 1) * B, w), by * B,
                       std::min((by + 1) * B, h));
        }
    }

    PassageResult res;
    res.value = g.back();
    res.start = start;
    res.target = target;
    if (want_path) res.path = backtrack(g, w, h, start);
    return res;
}

PassageResult last_passage_checkpointed(const EnvironmentSpec& env, LatticePoint start,
                                        LatticePoint target, std::int64_t block_rows) {
    check_rect(env, start, target);
    if (block_rows < 1) throw std::invalid_argument("block_rows must be >= 1");
    std::int64_t w = target.first - start.first + 1;
    std::int64_t h = target.second - start.second + 1;

    // Forward pass with a rolling row; store every block_rows-th row.
    std::int64_t nckpt = (h + block_rows - 1) / block_rows;
    std::vector<std::vector<double>> ckpt(static_cast<std::size_t>(nckpt));
    std::vector<double> row(static_cast<std::size_t>(w));
    for (std::int64_t v = 0; v < h; ++v) {
        for (std::int64_t u = 0; u < w; ++u) {
            double tau = weight(env, start.first + u, start.second + v);
            double best = 0.0;
            if (u > 0 && v > 0) best = std::max(row[u - 1], row[u]);
            else if (u > 0) best = row[u - 1];
            else if (v > 0) best = row[u];
            row[u] = tau + best;
        }
        if (v % block_rows == 0) ckpt[v / block_rows] = row;
    }

    PassageResult res;
    res.value = row.back();
    res.start = start;
    res.target = target;

    // Backtrack band by band, recomputing each row band from its checkpoint.
    // A band always has its walk position strictly above its base row, so
    // every left-vs-down decision can be made inside the stored band.
    std::int64_t u = w - 1, v = h - 1;
    std::vector<LatticePoint> rpath;
    rpath.reserve(static_cast<std::size_t>(w + h));
    rpath.push_back({start.first + u, start.second + v});
    while (!(u == 0 && v == 0)) {
        std::int64_t v0 = (v / block_rows) * block_rows;
        if (v0 == v && v > 0) v0 -= block_rows;  // v checkpoint-aligned: extend down
        std::int64_t rows = v - v0 + 1;
        std::vector<double> g(static_cast<std::size_t>(w * rows));
        std::copy(ckpt[v0 / block_rows].begin(), ckpt[v0 / block_rows].end(), g.begin());
        for (std::int64_t vv = 1; vv < rows; ++vv) {
            for (std::int64_t uu = 0; uu < w; ++uu) {
                double tau = weight(env, start.first + uu, start.second + v0 + vv);
                double best = (uu > 0) ? std::max(g[vv * w + uu - 1], g[(vv - 1) * w + uu])
                                       : g[(vv - 1) * w + uu];
                g[vv * w + uu] = tau + best;
            }
        }
        while (!(u == 0 && v == 0)) {
            std::int64_t vv = v - v0;
            if (v == 0) --u;
            else if (u == 0) {
                if (vv == 0) break;
                --v;
            } else if (vv == 0) break;  // decision needs the band below
            else if (g[vv * w + u - 1] >= g[(vv - 1) * w + u]) --u;
            else --v;
            rpath.push_back({start.first + u, start.second + v});
        }
    }
    std::reverse(rpath.begin(), rpath.end());
    res.path = std::move(rpath);
    return res;
}

double scaled_passage(const EnvironmentSpec& env, double x, double y) {
    if (x < 0 || y < 0) throw std::domain_error("scaled_passage: negative coordinates");
    LatticePoint target = {static_cast<std::int64_t>(std::floor(env.n * x)),
                           static_cast<std::int64_t>(std::floor(env.n * y))};
    return last_passage(env, {0, 0}, target, false).value / static_cast<double>(env.n);
}

}  // namespace lpp
