// Licensed under the Apache License, Version 2.0. See LICENSE in the project root.
//
// Levenshtein distance over Unicode scalar values, unit costs, no
// transposition. The capped form computes inside a diagonal band of width
// O(cap) and reports "exceeds cap" instead of ever returning a wrong
// number.

#ifndef TWT_EDIT_DISTANCE_HPP
#define TWT_EDIT_DISTANCE_HPP

#include <algorithm>
#include <cstdint>
#include <limits>
#include <optional>
#include <string_view>
#include <vector>

namespace twt {

inline std::size_t edit_distance(std::u32string_view a, std::u32string_view b) {
    if (a.size() < b.size()) std::swap(a, b);  // keep the row short
    const std::size_t m = a.size();
    const std::size_t n = b.size();
    if (n == 0) return m;

    std::vector<std::size_t> row(n + 1);
    for (std::size_t j = 0; j <= n; ++j) row[j] = j;
    for (std::size_t i = 1; i <= m; ++i) {
        std::size_t diag = row[0];
        row[0] = i;
        for (std::size_t j = 1; j <= n; ++j) {
            const std::size_t subst = diag + (a[i - 1] == b[j - 1] ? 0 : 1);
            diag = row[j];
            row[j] = std::min({row[j] + 1, row[j - 1] + 1, subst});
        }
    }
    return row[n];
}

/// Exact distance if it is <= cap, std::nullopt otherwise.
inline std::optional<std::size_t> edit_distance_capped(std::u32string_view a, std::u32string_view b,
                                                       std::size_t cap) {
    if (a.size() < b.size()) std::swap(a, b);
    const std::size_t m = a.size();
    const std::size_t n = b.size();
    if (m - n > cap) return std::nullopt;
    if (cap >= m) return edit_distance(a, b);  // band would cover the whole table
    if (n == 0) return m;  // m <= cap here

    constexpr std::size_t kInf = std::numeric_limits<std::size_t>::max() / 2;
    // Cell (i, j) lives at band position j - i + cap, 0..2*cap.
    const std::size_t width = 2 * cap + 1;
    std::vector<std::size_t> row(width, kInf);
    std::vector<std::size_t> prev(width, kInf);
    for (std::size_t j = 0; j <= std::min(cap, n); ++j) prev[j + cap] = j;

    for (std::size_t i = 1; i <= m; ++i) {
        std::fill(row.begin(), row.end(), kInf);
        const std::size_t lo = i > cap ? i - cap : 0;
        const std::size_t hi = std::min(n, i + cap);
        std::size_t row_min = kInf;
        for (std::size_t j = lo; j <= hi; ++j) {
            const std::size_t k = j - i + cap;
            std::size_t best;
            if (j == 0) {
                best = i;
            } else {
                best = prev[k] + (a[i - 1] == b[j - 1] ? 0 : 1);  // diagonal
                if (k > 0 && row[k - 1] + 1 < best) best = row[k - 1] + 1;      // insert
                if (k + 1 < width && prev[k + 1] + 1 < best) best = prev[k + 1] + 1;  // delete
            }
            row[k] = best;
            row_min = std::min(row_min, best);
        }
        if (row_min > cap) return std::nullopt;
        std::swap(row, prev);
    }
    const std::size_t result = prev[n + cap - m];
    return result <= cap ? std::optional<std::size_t>(result) : std::nullopt;
}

}  // namespace twt

#endif  // TWT_EDIT_DISTANCE_HPP
