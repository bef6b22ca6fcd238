#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "lpp/speed_field.hpp"

namespace lpp {

using LatticePoint = std::pair<std::int64_t, std::int64_t>;

// Deterministic random environment: every site weight is a pure function of
// (field, n, seed, i, j). The underlying Exp(1) draw depends on (seed, i, j)
// only, so environments at different scales n and different fields share a
// common realization.
struct EnvironmentSpec {
    SpeedField field;
    std::int64_t n = 1;
    std::uint64_t seed = 0;
};

struct PassageResult {
    double value = 0.0;
    LatticePoint start;
    LatticePoint target;
    std::vector<LatticePoint> path;  // empty unless a path was requested
};

// The Exp(1) draw at lattice site (i,j): -ln(U), U in (0,1], from a
// counter-based keyed hash. Never 0, never depends on n or the field.
double exp1_draw(std::uint64_t seed, std::int64_t i, std::int64_t j);

// Site weight tau^(n)_{ij} = exp1_draw / c(i/n, j/n).
double weight(const EnvironmentSpec& env, std::int64_t i, std::int64_t j);

// Last passage time over up-right paths from start to target, endpoints
// included. Backtracking ties prefer the horizontal predecessor (i-1, j).
// The default engine is the blocked anti-diagonal wavefront kernel
// (OpenMP-parallel when available); last_passage_serial is the plain
// row-major reference. Both produce bit-identical results.
PassageResult last_passage(const EnvironmentSpec& env, LatticePoint start, LatticePoint target,
                           bool want_path = false);
PassageResult last_passage_serial(const EnvironmentSpec& env, LatticePoint start,
                                  LatticePoint target, bool want_path = false);

// Memory-light variant: keeps one row checkpoint every block_rows rows and
// recomputes blocks during backtracking. Bit-identical value and path.
PassageResult last_passage_checkpointed(const EnvironmentSpec& env, LatticePoint start,
                                        LatticePoint target, std::int64_t block_rows);

// n^{-1} * last_passage(env, (0,0), (floor(n x), floor(n y))).
double scaled_passage(const EnvironmentSpec& env, double x, double y);

}  // namespace lpp
