// Licensed under the Apache License, Version 2.0. See LICENSE in the project root.

#ifndef TWT_COUNTS_HPP
#define TWT_COUNTS_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "twt/model.hpp"

namespace twt {

/// Median reported as the two middle values: (m, m) for odd samples,
/// (lower, upper) for even ones — the presentation the count table uses.
struct MedianPair {
    std::size_t lower = 0;
    std::size_t upper = 0;

    bool operator==(const MedianPair&) const = default;

    double midpoint() const { return (static_cast<double>(lower) + static_cast<double>(upper)) / 2.0; }
};

inline MedianPair median_pair(std::vector<std::size_t> values) {
    if (values.empty()) throw std::invalid_argument("median of empty sample");
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    if (n % 2 == 1) return {values[n / 2], values[n / 2]};
    return {values[n / 2 - 1], values[n / 2]};
}

/// Per-annotator tag counts with per-kind medians. The text-world count is
/// the number of stretches (T spans), not distinct world ids.
struct CountSummary {
    std::vector<std::string> annotator_ids;
    std::vector<std::array<std::size_t, kNumTagKinds>> counts;  // [annotator][kind]
    std::array<MedianPair, kNumTagKinds> medians{};

    std::size_t count(std::size_t annotator, TagKind kind) const {
        return counts[annotator][kind_index(kind)];
    }
};

inline CountSummary count_summary(const std::vector<AnnotatedDocument>& docs) {
    if (docs.empty()) throw std::invalid_argument("count_summary requires at least 1 document");
    CountSummary summary;
    for (const auto& doc : docs) {
        summary.annotator_ids.push_back(doc.annotator_id);
        std::array<std::size_t, kNumTagKinds> row{};
        for (const Span& s : doc.spans) ++row[kind_index(s.kind)];
        summary.counts.push_back(row);
    }
    for (TagKind kind : kAllTagKinds) {
        std::vector<std::size_t> column;
        column.reserve(docs.size());
        for (const auto& row : summary.counts) column.push_back(row[kind_index(kind)]);
        summary.medians[kind_index(kind)] = median_pair(std::move(column));
    }
    return summary;
}

/// Annotators whose text-world stretch count sits closest to the median
/// midpoint, k of them; ties go to the annotator listed first.
inline std::vector<std::string> select_median_annotations(const std::vector<AnnotatedDocument>& docs,
                                                          std::size_t k) {
    if (k == 0 || k > docs.size())
        throw std::invalid_argument("select_median_annotations: k out of range");
    const CountSummary summary = count_summary(docs);
    const double midpoint = summary.medians[kind_index(TagKind::TextWorld)].midpoint();

    std::vector<std::size_t> order(docs.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    auto distance = [&](std::size_t i) {
        return std::abs(static_cast<double>(summary.counts[i][kind_index(TagKind::TextWorld)]) - midpoint);
    };
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return distance(a) < distance(b); });

    std::vector<std::string> selected;
    selected.reserve(k);
    for (std::size_t i = 0; i < k; ++i) selected.push_back(docs[order[i]].annotator_id);
    return selected;
}

}  // namespace twt

#endif  // TWT_COUNTS_HPP
