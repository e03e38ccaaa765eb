// SPDX-License-Identifier: Apache-2.0
#include "kptrack/assignment.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "kptrack/core_model.hpp"

namespace kptrack {
namespace {

void require_finite(const Matrix& cost)
{
    for (double v : cost.data())
        if (!std::isfinite(v))
            throw ValidationError("assignment cost matrix has a non-finite entry");
}

double sum_cost(const Matrix& cost, const std::vector<std::pair<std::size_t, std::size_t>>& pairs)
{
    double total = 0.0;
    for (auto [r, c] : pairs)
        total += cost(r, c);
    return total;
}

// Rows <= cols. Returns, for each row, its assigned column.
std::vector<std::size_t> solve_wide(const Matrix& a)
{
    const std::size_t n = a.rows();
    const std::size_t m = a.cols();
    constexpr double inf = std::numeric_limits<double>::infinity();
    constexpr std::size_t none = 0;

    // 1-based arrays; index 0 is the virtual source column.
    std::vector<double> u(n + 1, 0.0), v(m + 1, 0.0);
    std::vector<std::size_t> row_of(m + 1, none), way(m + 1, none);

    for (std::size_t i = 1; i <= n; ++i) {
        row_of[0] = i;
        std::size_t col = 0;
        std::vector<double> minv(m + 1, inf);
        std::vector<char> used(m + 1, 0);
        do {
            used[col] = 1;
            const std::size_t row = row_of[col];
            double delta = inf;
            std::size_t next = 0;
            for (std::size_t j = 1; j <= m; ++j) {
                if (used[j])
                    continue;
                const double reduced = a(row - 1, j - 1) - u[row] - v[j];
                if (reduced < minv[j]) {
                    minv[j] = reduced;
                    way[j] = col;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    next = j;
                }
            }
            for (std::size_t j = 0; j <= m; ++j) {
                if (used[j]) {
                    u[row_of[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            col = next;
        } while (row_of[col] != none);
        do {
            const std::size_t prev = way[col];
            row_of[col] = row_of[prev];
            col = prev;
        } while (col != 0);
    }

    std::vector<std::size_t> col_of_row(n, 0);
    for (std::size_t j = 1; j <= m; ++j)
        if (row_of[j] != none)
            col_of_row[row_of[j] - 1] = j - 1;
    return col_of_row;
}

} // namespace

Assignment hungarian_assign(const Matrix& cost)
{
    Assignment out;
    if (cost.empty())
        return out;
    require_finite(cost);

    if (cost.rows() <= cost.cols()) {
        const auto col_of_row = solve_wide(cost);
        for (std::size_t r = 0; r < col_of_row.size(); ++r)
            out.pairs.emplace_back(r, col_of_row[r]);
    } else {
        const auto row_of_col = solve_wide(cost.transposed());
        for (std::size_t c = 0; c < row_of_col.size(); ++c)
            out.pairs.emplace_back(row_of_col[c], c);
        std::sort(out.pairs.begin(), out.pairs.end());
    }
    out.total_cost = sum_cost(cost, out.pairs);
    return out;
}

Assignment greedy_assign(const Matrix& cost)
{
    Assignment out;
    if (cost.empty())
        return out;
    require_finite(cost);

    std::vector<std::size_t> order(cost.rows() * cost.cols());
    std::iota(order.begin(), order.end(), std::size_t{0});
    const auto flat = cost.data();
    // Flat row-major index order is exactly the (row, col) tie rule.
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return flat[a] < flat[b]; });

    std::vector<char> row_used(cost.rows(), 0), col_used(cost.cols(), 0);
    const std::size_t target = std::min(cost.rows(), cost.cols());
    for (std::size_t k : order) {
        const std::size_t r = k / cost.cols();
        const std::size_t c = k % cost.cols();
        if (row_used[r] || col_used[c])
            continue;
        row_used[r] = col_used[c] = 1;
        out.pairs.emplace_back(r, c);
        if (out.pairs.size() == target)
            break;
    }
    std::sort(out.pairs.begin(), out.pairs.end());
    out.total_cost = sum_cost(cost, out.pairs);
    return out;
}

} // namespace kptrack
