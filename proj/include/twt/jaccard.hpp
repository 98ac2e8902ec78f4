// Licensed under the Apache License, Version 2.0. See LICENSE in the project root.

#ifndef TWT_JACCARD_HPP
#define TWT_JACCARD_HPP

#include <cstddef>
#include <set>
#include <vector>

namespace twt {

/// Jaccard similarity |A∩B| / (|A| + |B| − |A∩B|) over sorted, duplicate-free
/// ranges. Two empty sets agree totally: J(∅, ∅) = 1.
template <typename Range>
double jaccard_sorted(const Range& a, const Range& b) {
    std::size_t inter = 0;
    auto ia = std::begin(a);
    auto ib = std::begin(b);
    const auto ea = std::end(a);
    const auto eb = std::end(b);
    std::size_t size_a = 0;
    std::size_t size_b = 0;
    while (ia != ea && ib != eb) {
        if (*ia < *ib) {
            ++ia;
            ++size_a;
        } else if (*ib < *ia) {
            ++ib;
            ++size_b;
        } else {
            ++inter;
            ++ia;
            ++ib;
            ++size_a;
            ++size_b;
        }
    }
    for (; ia != ea; ++ia) ++size_a;
    for (; ib != eb; ++ib) ++size_b;
    const std::size_t uni = size_a + size_b - inter;
    if (uni == 0) return 1.0;
    return static_cast<double>(inter) / static_cast<double>(uni);
}

template <typename T>
double jaccard(const std::set<T>& a, const std::set<T>& b) {
    return jaccard_sorted(a, b);
}

template <typename T>
double jaccard(const std::vector<T>& sorted_a, const std::vector<T>& sorted_b) {
    return jaccard_sorted(sorted_a, sorted_b);
}

}  // namespace twt

#endif  // TWT_JACCARD_HPP
