// Licensed under the Apache License, Version 2.0. See LICENSE in the project root.
//
// Fuzzy aggregation of N annotations. Tag assignment is treated as a
// probabilistic judgement: the membership degree of a token in a tag kind
// is the fraction of annotators whose annotation covers it. Kinds are
// aggregated independently — a token may score high as both character and
// place. The count-ratio aggregation itself is this toolkit's
// construction; the source experiment only motivates the fuzzy reading.

#ifndef TWT_CONSENSUS_HPP
#define TWT_CONSENSUS_HPP

#include <algorithm>
#include <array>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "twt/jaccard.hpp"
#include "twt/model.hpp"
#include "twt/parser.hpp"

namespace twt {

/// Raised when documents that must annotate one shared text do not.
struct AlignmentError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Per-token membership degrees per tag kind. Degrees are stored as
/// annotator counts, so every degree is exactly k / num_annotators.
struct FuzzyAnnotation {
    std::size_t num_annotators = 0;
    std::size_t num_tokens = 0;
    std::array<std::vector<std::uint32_t>, kNumTagKinds> counts;  // [kind][token]

    double degree(TagKind kind, std::size_t token) const {
        return static_cast<double>(counts[kind_index(kind)][token]) /
               static_cast<double>(num_annotators);
    }
};

inline FuzzyAnnotation fuzzy_membership(const std::vector<AnnotatedDocument>& docs,
                                        const TokenizerOptions& options = {}) {
    if (docs.size() < 2) throw std::invalid_argument("fuzzy_membership requires at least 2 documents");
    if (!validate_alignment(docs).aligned)
        throw AlignmentError("fuzzy_membership: documents do not share one plain text");

    FuzzyAnnotation fuzzy;
    fuzzy.num_annotators = docs.size();
    fuzzy.num_tokens = tokenize(docs.front().plain_text, options).size();
    for (auto& column : fuzzy.counts) column.assign(fuzzy.num_tokens, 0);

    for (const auto& doc : docs) {
        const auto tokens = tokenize(doc.plain_text, options);
        // Collapse each annotator to a coverage bitmap first; several spans
        // of one kind over a token still count that annotator once.
        std::array<std::vector<bool>, kNumTagKinds> covered;
        for (auto& c : covered) c.assign(fuzzy.num_tokens, false);
        for (const Span& span : doc.spans)
            for (std::size_t ti : span_tokens(tokens, span)) covered[kind_index(span.kind)][ti] = true;
        for (std::size_t k = 0; k < kNumTagKinds; ++k)
            for (std::size_t t = 0; t < fuzzy.num_tokens; ++t)
                if (covered[k][t]) ++fuzzy.counts[k][t];
    }
    return fuzzy;
}

/// A maximal run of consecutive token indices, inclusive on both ends.
struct TokenRun {
    std::size_t first = 0;
    std::size_t last = 0;

    bool operator==(const TokenRun&) const = default;
};

using CrispRuns = std::array<std::vector<TokenRun>, kNumTagKinds>;

/// Thresholds a fuzzy annotation into maximal runs of tokens whose degree
/// is >= threshold, per kind. threshold must lie in (0, 1].
inline CrispRuns crisp_consensus(const FuzzyAnnotation& fuzzy, double threshold) {
    if (!(threshold > 0.0 && threshold <= 1.0))
        throw std::invalid_argument("crisp_consensus: threshold must be in (0, 1]");
    CrispRuns runs;
    for (std::size_t k = 0; k < kNumTagKinds; ++k) {
        const auto& counts = fuzzy.counts[k];
        std::size_t t = 0;
        while (t < counts.size()) {
            const double degree = static_cast<double>(counts[t]) /
                                  static_cast<double>(fuzzy.num_annotators);
            if (degree < threshold) {
                ++t;
                continue;
            }
            std::size_t end = t;
            while (end + 1 < counts.size() &&
                   static_cast<double>(counts[end + 1]) /
                           static_cast<double>(fuzzy.num_annotators) >=
                       threshold)
                ++end;
            runs[k].push_back({t, end});
            t = end + 1;
        }
    }
    return runs;
}

/// Scores one annotator against the crisp consensus: Jaccard between the
/// annotator's tokens of `kind` and the tokens the consensus runs cover.
inline double annotator_vs_consensus(const AnnotatedDocument& doc, const CrispRuns& consensus,
                                     TagKind kind, const TokenizerOptions& options = {}) {
    const auto tokens = tokenize(doc.plain_text, options);
    std::vector<std::size_t> tagged;
    for (const Span& span : doc.spans)
        if (span.kind == kind)
            for (std::size_t ti : span_tokens(tokens, span)) tagged.push_back(ti);
    std::sort(tagged.begin(), tagged.end());
    tagged.erase(std::unique(tagged.begin(), tagged.end()), tagged.end());

    std::vector<std::size_t> consensus_tokens;
    for (const TokenRun& run : consensus[kind_index(kind)])
        for (std::size_t t = run.first; t <= run.last; ++t) consensus_tokens.push_back(t);

    return jaccard_sorted(tagged, consensus_tokens);
}

}  // namespace twt

#endif  // TWT_CONSENSUS_HPP
