// Licensed under the Apache License, Version 2.0. See LICENSE in the project root.
//
// Cross-annotator text-world matching. Every source stretch is paired
// with the target stretch at minimum edit distance (l_min); the mapping is
// per-source minimum, deliberately not a global assignment, so several
// sources may share one target.

#ifndef TWT_MATCHING_HPP
#define TWT_MATCHING_HPP

#include <algorithm>
#include <cstddef>
#include <stdexcept>
#include <string_view>
#include <utility>
#include <vector>

#include "twt/detail/parallel.hpp"
#include "twt/edit_distance.hpp"
#include "twt/model.hpp"

namespace twt {

/// One matched pair of stretches. Ordinals are the 1-based stretch numbers
/// from the two documents; distance is l_min.
struct WorldMatch {
    std::size_t source_ordinal = 0;
    std::size_t target_ordinal = 0;
    std::size_t distance = 0;
    std::size_t ordinal_divergence = 0;

    bool operator==(const WorldMatch&) const = default;
};

/// Text-world stretches of a document, in stretch-number order. The views
/// point into doc.plain_text.
inline std::vector<std::u32string_view> world_stretches(const AnnotatedDocument& doc) {
    std::vector<std::u32string_view> out;
    for (const Span& s : doc.spans)
        if (s.kind == TagKind::TextWorld)
            out.emplace_back(std::u32string_view(doc.plain_text).substr(s.start, s.end - s.start));
    return out;
}

/// Matches every stretch of doc_a against the stretches of doc_b.
/// Ties on distance are broken by smaller |i − j|, then by smaller target
/// stretch number. Sources are independent, so the computation may be
/// spread over `threads` workers; the result does not depend on the
/// schedule.
inline std::vector<WorldMatch> match_worlds(const AnnotatedDocument& doc_a,
                                            const AnnotatedDocument& doc_b, unsigned threads = 1) {
    const auto sources = world_stretches(doc_a);
    const auto targets = world_stretches(doc_b);
    if (sources.empty() || targets.empty())
        throw std::invalid_argument("match_worlds: both documents need at least one text-world stretch");

    std::vector<WorldMatch> matches(sources.size());
    detail::parallel_for(sources.size(), threads, [&](std::size_t si) {
        const std::size_t i = si + 1;  // stretch numbers are 1-based
        WorldMatch best;
        bool have_best = false;
        for (std::size_t tj = 0; tj < targets.size(); ++tj) {
            const std::size_t j = tj + 1;
            std::size_t d;
            if (!have_best) {
                d = edit_distance(sources[si], targets[tj]);
            } else {
                // Branch and bound: anything beyond the current best cannot win.
                const auto capped = edit_distance_capped(sources[si], targets[tj], best.distance);
                if (!capped) continue;
                d = *capped;
            }
            const std::size_t div = i > j ? i - j : j - i;
            const bool better =
                !have_best || d < best.distance ||
                (d == best.distance && div < best.ordinal_divergence);
            // Equal distance and divergence keeps the earlier target.
            if (better) {
                best = {i, j, d, div};
                have_best = true;
            }
        }
        matches[si] = best;
    });
    return matches;
}

/// The plot-ready series behind the divergence figure: matches ordered by
/// rising distance, each carrying |i − j|. Ordering is value-determined
/// (distance, then divergence), so any permutation of the input yields the
/// same series.
inline std::vector<std::pair<std::size_t, std::size_t>> ordinal_divergence_series(
    std::vector<WorldMatch> matches) {
    std::stable_sort(matches.begin(), matches.end(), [](const WorldMatch& a, const WorldMatch& b) {
        if (a.distance != b.distance) return a.distance < b.distance;
        return a.ordinal_divergence < b.ordinal_divergence;
    });
    std::vector<std::pair<std::size_t, std::size_t>> series;
    series.reserve(matches.size());
    for (const WorldMatch& m : matches) series.emplace_back(m.distance, m.ordinal_divergence);
    return series;
}

}  // namespace twt

#endif  // TWT_MATCHING_HPP
