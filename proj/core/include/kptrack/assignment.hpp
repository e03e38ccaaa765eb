// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "kptrack/matrix.hpp"
#include "kptrack/similarity.hpp"

namespace kptrack {

struct Assignment {
    /// (row, col) pairs sorted by row; every row and column used at most once.
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    double total_cost = 0.0;
};

/// Minimum-cost assignment of min(rows, cols) pairs (shortest augmenting
/// path with dual potentials, O(n^2 m)). Entries must be finite.
Assignment hungarian_assign(const Matrix& cost);
inline Assignment hungarian_assign(const CostMatrix& m) { return hungarian_assign(m.cost); }

/// Repeatedly takes the cheapest remaining edge, ties broken by (row, col).
Assignment greedy_assign(const Matrix& cost);
inline Assignment greedy_assign(const CostMatrix& m) { return greedy_assign(m.cost); }

} // namespace kptrack
