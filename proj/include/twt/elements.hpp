// Licensed under the Apache License, Version 2.0. See LICENSE in the project root.
//
// Cross-annotator identification of "the same" character or place.
// Element ids are not trusted across annotators (the same person may be c4
// for one annotator and c2 for another); elements are clustered greedily
// by maximum token-position overlap instead, and each cluster is scored
// with pairwise Jaccard values and their mean J̄.

#ifndef TWT_ELEMENTS_HPP
#define TWT_ELEMENTS_HPP

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "twt/jaccard.hpp"
#include "twt/model.hpp"
#include "twt/unicode.hpp"

namespace twt {

/// What goes into the element sets that Jaccard compares.
enum class MemberSetMode : std::uint8_t {
    TokenPositions,  // indices into the shared tokenization (default; robust to repeated pronouns)
    SurfaceForms,    // lowercased token surfaces
};

inline std::optional<MemberSetMode> member_set_mode_from_name(std::string_view name) {
    if (name == "positions") return MemberSetMode::TokenPositions;
    if (name == "forms") return MemberSetMode::SurfaceForms;
    return std::nullopt;
}

constexpr std::string_view to_string(MemberSetMode mode) {
    return mode == MemberSetMode::TokenPositions ? "positions" : "forms";
}

/// One annotator's contribution to an aligned element.
struct ElementMember {
    std::uint32_t element_id = 0;
    std::vector<std::size_t> token_indices;      // sorted, unique
    std::vector<std::u32string> surface_forms;   // lowercased, sorted, unique

    bool operator==(const ElementMember&) const = default;
};

struct PairwiseJaccard {
    std::size_t annotator_a = 0;  // positions into the docs list, a < b
    std::size_t annotator_b = 0;
    double value = 0.0;

    bool operator==(const PairwiseJaccard&) const = default;
};

/// One cluster of elements identified as the same entity, with its
/// pairwise agreement grid. members.size() == number of annotators;
/// absent annotators contribute 0 to every pair they appear in.
/// mean_j is the exact arithmetic mean of the pairwise values.
struct ElementAlignment {
    TagKind kind = TagKind::Character;
    std::vector<std::optional<ElementMember>> members;
    std::vector<PairwiseJaccard> pairwise;
    double mean_j = 0.0;
};

namespace detail {

struct ElementItem {
    std::size_t annotator = 0;
    ElementMember member;
};

inline std::vector<ElementItem> collect_elements(const std::vector<AnnotatedDocument>& docs,
                                                 TagKind kind, const TokenizerOptions& options) {
    std::vector<ElementItem> items;
    for (std::size_t d = 0; d < docs.size(); ++d) {
        const auto tokens = tokenize(docs[d].plain_text, options);
        std::map<std::uint32_t, ElementMember> by_id;
        for (const Span& span : docs[d].spans) {
            if (span.kind != kind) continue;
            if (!span.element_id)
                throw std::invalid_argument("align_elements: span without element id");
            auto& member = by_id[*span.element_id];
            member.element_id = *span.element_id;
            for (std::size_t ti : span_tokens(tokens, span)) {
                member.token_indices.push_back(ti);
                member.surface_forms.push_back(to_lower(tokens[ti].surface));
            }
        }
        for (auto& [id, member] : by_id) {
            auto dedupe = [](auto& v) {
                std::sort(v.begin(), v.end());
                v.erase(std::unique(v.begin(), v.end()), v.end());
            };
            dedupe(member.token_indices);
            dedupe(member.surface_forms);
            items.push_back({d, std::move(member)});
        }
    }
    return items;
}

}  // namespace detail

/// Aligns elements of `kind` (Character or Place) across annotators and
/// scores every cluster. Clustering: repeatedly take the cross-annotator
/// element pair with the highest positional Jaccard and merge, skipping
/// merges that would put two elements of one annotator in the same
/// cluster; zero-overlap pairs never merge. Output is ordered by falling
/// mean_j, then by first token position.
inline std::vector<ElementAlignment> align_elements(const std::vector<AnnotatedDocument>& docs,
                                                    TagKind kind,
                                                    MemberSetMode mode = MemberSetMode::TokenPositions,
                                                    const TokenizerOptions& options = {}) {
    if (kind != TagKind::Character && kind != TagKind::Place)
        throw std::invalid_argument("align_elements supports character and place kinds only");
    if (docs.size() < 2)
        throw std::invalid_argument("align_elements requires at least 2 documents");

    auto items = detail::collect_elements(docs, kind, options);

    // All cross-annotator pairs with positive positional overlap,
    // strongest first; ties resolved by annotator and element id.
    struct CandidatePair {
        double overlap;
        std::size_t x, y;  // indices into items
    };
    std::vector<CandidatePair> pairs;
    for (std::size_t x = 0; x < items.size(); ++x) {
        for (std::size_t y = x + 1; y < items.size(); ++y) {
            if (items[x].annotator == items[y].annotator) continue;
            const double overlap =
                jaccard_sorted(items[x].member.token_indices, items[y].member.token_indices);
            if (overlap > 0.0) pairs.push_back({overlap, x, y});
        }
    }
    std::sort(pairs.begin(), pairs.end(), [&](const CandidatePair& p, const CandidatePair& q) {
        if (p.overlap != q.overlap) return p.overlap > q.overlap;
        const auto key = [&](const CandidatePair& c) {
            return std::tuple(items[c.x].annotator, items[c.x].member.element_id,
                              items[c.y].annotator, items[c.y].member.element_id);
        };
        return key(p) < key(q);
    });

    // Greedy union with the one-element-per-annotator constraint.
    std::vector<std::size_t> parent(items.size());
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](std::size_t v) {
        while (parent[v] != v) v = parent[v] = parent[parent[v]];
        return v;
    };
    std::vector<std::vector<bool>> annotators_of(items.size(),
                                                 std::vector<bool>(docs.size(), false));
    for (std::size_t v = 0; v < items.size(); ++v) annotators_of[v][items[v].annotator] = true;

    for (const CandidatePair& p : pairs) {
        const std::size_t rx = find(p.x);
        const std::size_t ry = find(p.y);
        if (rx == ry) continue;
        bool conflict = false;
        for (std::size_t d = 0; d < docs.size() && !conflict; ++d)
            conflict = annotators_of[rx][d] && annotators_of[ry][d];
        if (conflict) continue;
        parent[ry] = rx;
        for (std::size_t d = 0; d < docs.size(); ++d)
            if (annotators_of[ry][d]) annotators_of[rx][d] = true;
    }

    std::map<std::size_t, std::vector<std::size_t>> clusters;  // root -> item indices
    for (std::size_t v = 0; v < items.size(); ++v) clusters[find(v)].push_back(v);

    std::vector<ElementAlignment> result;
    for (auto& [root, member_items] : clusters) {
        ElementAlignment alignment;
        alignment.kind = kind;
        alignment.members.resize(docs.size());
        for (std::size_t v : member_items) alignment.members[items[v].annotator] = items[v].member;

        double sum = 0.0;
        for (std::size_t a = 0; a < docs.size(); ++a) {
            for (std::size_t b = a + 1; b < docs.size(); ++b) {
                double value = 0.0;
                if (alignment.members[a] && alignment.members[b]) {
                    value = mode == MemberSetMode::TokenPositions
                                ? jaccard_sorted(alignment.members[a]->token_indices,
                                                 alignment.members[b]->token_indices)
                                : jaccard_sorted(alignment.members[a]->surface_forms,
                                                 alignment.members[b]->surface_forms);
                }
                alignment.pairwise.push_back({a, b, value});
                sum += value;
            }
        }
        alignment.mean_j = sum / static_cast<double>(alignment.pairwise.size());
        result.push_back(std::move(alignment));
    }

    auto first_token = [](const ElementAlignment& a) {
        std::size_t first = SIZE_MAX;
        for (const auto& m : a.members)
            if (m && !m->token_indices.empty()) first = std::min(first, m->token_indices.front());
        return first;
    };
    std::stable_sort(result.begin(), result.end(),
                     [&](const ElementAlignment& a, const ElementAlignment& b) {
                         if (a.mean_j != b.mean_j) return a.mean_j > b.mean_j;
                         return first_token(a) < first_token(b);
                     });
    return result;
}

/// Mean of a pairwise grid: J̄ = Σ J(t_i, t_j) / N. Exposed so fixture
/// grids can be fed through the same arithmetic align_elements uses.
inline double mean_pairwise(const std::vector<double>& values) {
    if (values.empty()) throw std::invalid_argument("mean_pairwise: empty grid");
    double sum = 0.0;
    for (double v : values) sum += v;
    return sum / static_cast<double>(values.size());
}

}  // namespace twt

#endif  // TWT_ELEMENTS_HPP
