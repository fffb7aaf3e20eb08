#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

#include "cmaccm/errors.hpp"
#include "cmaccm/rng.hpp"

namespace cmaccm {

// Number of lattice points on the k-grid d-simplex: C(k+d-1, d-1).
// Saturates at a large sentinel instead of overflowing.
inline std::uint64_t simplex_grid_count(std::size_t dim, std::size_t k) {
    if (dim == 0) throw UsageError("simplex_grid_count: zero dimension");
    long double acc = 1.0L;
    for (std::size_t i = 1; i < dim; ++i) acc = acc * static_cast<long double>(k + i) / i;
    const long double cap = 1e18L;
    return acc > cap ? static_cast<std::uint64_t>(cap) : static_cast<std::uint64_t>(acc + 0.5L);
}

// Visits every probability vector over `dim` atoms whose entries are
// non-negative multiples of 1/k summing to 1. Deterministic
// (lexicographic in the integer compositions, first coordinate outermost).
inline void for_each_simplex_grid_point(std::size_t dim, std::size_t k,
                                        const std::function<void(const std::vector<double>&)>& fn) {
    if (dim == 0 || k == 0) throw UsageError("simplex grid: dim and k must be >= 1");
    std::vector<std::size_t> counts(dim, 0);
    std::vector<double> point(dim, 0.0);
    std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t pos, std::size_t left) {
        if (pos + 1 == dim) {
            counts[pos] = left;
            for (std::size_t i = 0; i < dim; ++i)
                point[i] = static_cast<double>(counts[i]) / static_cast<double>(k);
            fn(point);
            return;
        }
        for (std::size_t c = 0; c <= left; ++c) {
            counts[pos] = c;
            rec(pos + 1, left - c);
        }
    };
    rec(0, k);
}

inline std::vector<std::vector<double>> simplex_grid_points(std::size_t dim, std::size_t k) {
    std::vector<std::vector<double>> out;
    out.reserve(static_cast<std::size_t>(simplex_grid_count(dim, k)));
    for_each_simplex_grid_point(dim, k, [&](const std::vector<double>& p) { out.push_back(p); });
    return out;
}

}  // namespace cmaccm
