// Licensed under the Apache License, Version 2.0. See LICENSE in the project root.
//
// Shared fixtures: the reference count table, the stretch-distance table
// and the element-similarity grid (used as arithmetic/formatting fixtures;
// the underlying corpus is not redistributable), plus a scripted synthetic
// corpus for end-to-end runs.

#ifndef TWT_TESTS_FIXTURES_HPP
#define TWT_TESTS_FIXTURES_HPP

#include <array>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include "twt/matching.hpp"
#include "twt/model.hpp"
#include "twt/parser.hpp"

namespace fixtures {

/// Count table: rows per annotator, columns text worlds / switches /
/// characters / places / times. Median row: (14,20) (18,22) (37,43)
/// (37,41) (56,61).
inline constexpr std::array<std::array<std::size_t, 5>, 6> kCountTable = {{
    {20, 17, 28, 21, 61},
    {12, 9, 45, 34, 41},
    {14, 18, 37, 41, 56},
    {56, 72, 48, 43, 41},
    {22, 22, 43, 37, 77},
    {8, 28, 23, 44, 92},
}};

/// Stretch-distance table for the first 30 stretches: source stretch
/// number, l_min, matched target stretch number.
struct DistanceRow {
    std::size_t source;
    std::size_t l_min;
    std::size_t target;
};

inline const std::vector<DistanceRow>& distance_table() {
    static const std::vector<DistanceRow> rows = {
        {1, 0, 1},    {2, 0, 2},    {3, 6, 3},    {4, 0, 4},    {5, 7, 5},
        {6, 327, 32}, {7, 6, 4},    {8, 172, 9},  {9, 437, 41}, {10, 0, 7},
        {11, 5, 8},   {12, 218, 11},{13, 0, 37},  {14, 27, 12}, {15, 4, 4},
        {16, 105, 14},{17, 4, 4},   {18, 329, 16},{19, 5, 45},  {20, 158, 8},
        {21, 29, 18}, {22, 5, 20},  {23, 21, 19}, {24, 0, 20},  {25, 6, 21},
        {26, 0, 22},  {27, 22, 23}, {28, 4, 37},  {29, 215, 25},{30, 264, 27},
    };
    return rows;
}

inline std::vector<twt::WorldMatch> distance_table_matches() {
    std::vector<twt::WorldMatch> matches;
    for (const DistanceRow& row : distance_table()) {
        const std::size_t div = row.source > row.target ? row.source - row.target
                                                        : row.target - row.source;
        matches.push_back({row.source, row.target, row.l_min, div});
    }
    return matches;
}

/// Element-similarity grid: 16 elements, 10 annotator pairs each, plus the
/// printed mean. `printed_decimals` is the precision the mean is printed
/// at (some rows print one decimal, e.g. 0.9).
struct SimilarityRow {
    std::array<double, 10> pairwise;
    double printed_mean;
    int printed_decimals;
};

inline const std::vector<SimilarityRow>& similarity_table() {
    static const std::vector<SimilarityRow> rows = {
        {{1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0}, 1.0, 1},
        {{0.89, 0.89, 0.89, 1.0, 1.0, 1.0, 0.89, 1.0, 0.89, 0.89}, 0.93, 2},
        {{0.93, 0.93, 0.91, 0.92, 0.93, 0.89, 0.9, 0.9, 0.92, 0.89}, 0.91, 2},
        {{0.75, 0.75, 0.75, 0.75, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0}, 0.9, 1},
        {{1.0, 0.75, 1.0, 1.0, 0.75, 1.0, 1.0, 0.75, 0.75, 1.0}, 0.9, 1},
        {{0.94, 0.96, 0.86, 0.9, 0.98, 0.81, 0.88, 0.83, 0.87, 0.8}, 0.88, 2},
        {{0.86, 0.91, 0.83, 0.89, 0.86, 0.85, 0.86, 0.81, 0.86, 0.84}, 0.86, 2},
        {{0.88, 0.89, 0.8, 1.0, 0.78, 0.83, 0.88, 0.77, 0.89, 0.8}, 0.85, 2},
        {{0.88, 0.85, 0.79, 0.89, 0.97, 0.9, 0.77, 0.87, 0.79, 0.74}, 0.84, 2},
        {{1.0, 0.5, 1.0, 1.0, 0.5, 1.0, 1.0, 0.5, 0.5, 1.0}, 0.8, 1},
        {{0.9, 0.7, 0.9, 0.64, 0.78, 1.0, 0.7, 0.78, 0.88, 0.7}, 0.8, 1},
        {{0.61, 0.95, 0.91, 0.95, 0.6, 0.61, 0.58, 0.87, 0.91, 0.87}, 0.79, 2},
        {{0.74, 0.81, 0.73, 0.77, 0.74, 0.79, 0.91, 0.66, 0.71, 0.83}, 0.77, 2},
        {{1.0, 0.33, 1.0, 1.0, 0.33, 1.0, 1.0, 0.33, 0.33, 1.0}, 0.73, 2},
        {{1.0, 0.33, 1.0, 1.0, 0.33, 1.0, 1.0, 0.33, 0.33, 1.0}, 0.73, 2},
        {{1.0, 0.56, 0.67, 1.0, 0.56, 0.67, 1.0, 0.38, 0.56, 0.67}, 0.7, 1},
    };
    return rows;
}

/// Builds six documents over one shared text whose per-kind span counts
/// reproduce kCountTable. Spans of different kinds may share a word
/// (equal ranges nest); spans of one kind sit on distinct words.
inline std::vector<twt::AnnotatedDocument> count_table_corpus() {
    constexpr std::size_t kWords = 300;
    std::u32string text;
    std::vector<std::pair<std::size_t, std::size_t>> word_ranges;
    for (std::size_t w = 0; w < kWords; ++w) {
        if (w > 0) text += U" ";
        const std::size_t start = text.size();
        text += U"w";
        word_ranges.emplace_back(start, text.size());
    }
    const std::array<twt::TagKind, 5> kinds = {twt::TagKind::TextWorld, twt::TagKind::Switch,
                                               twt::TagKind::Character, twt::TagKind::Place,
                                               twt::TagKind::Time};
    std::vector<twt::AnnotatedDocument> docs;
    for (std::size_t a = 0; a < kCountTable.size(); ++a) {
        std::vector<twt::Span> spans;
        for (std::size_t k = 0; k < kinds.size(); ++k) {
            for (std::size_t i = 0; i < kCountTable[a][k]; ++i) {
                spans.push_back({kinds[k], static_cast<std::uint32_t>(i + 1),
                                 word_ranges[i].first, word_ranges[i].second, 0});
            }
        }
        docs.push_back(twt::make_document(std::to_string(a + 1), text, std::move(spans)));
    }
    return docs;
}

/// A scripted synthetic corpus: one generated text and six annotator
/// variants with known perturbations (boundary shifts, merges, splits,
/// dropped elements, renumbered ids).
struct SyntheticCorpus {
    std::u32string text;
    std::vector<twt::Token> tokens;
    std::vector<twt::AnnotatedDocument> documents;
};

inline SyntheticCorpus synthetic_corpus(std::size_t words = 500, std::uint32_t seed = 20260810) {
    std::mt19937 rng(seed);
    static const std::vector<std::u32string> vocab = {
        U"quail",  U"awoke",  U"mars",   U"kirsten", U"agents", U"rekal",  U"valley",
        U"dream",  U"memory", U"office", U"door",    U"moon",   U"train",  U"window",
        U"он",     U"увидел", U"город",  U"дом",     U"сон",    U"утро",
    };
    std::uniform_int_distribution<std::size_t> pick(0, vocab.size() - 1);
    std::uniform_int_distribution<int> punct(0, 11);

    SyntheticCorpus corpus;
    for (std::size_t w = 0; w < words; ++w) {
        if (w > 0) corpus.text += U" ";
        corpus.text += vocab[pick(rng)];
        const int p = punct(rng);
        if (p == 0) corpus.text += U".";
        else if (p == 1) corpus.text += U" —";
    }
    corpus.tokens = twt::tokenize(corpus.text);

    // Word-level helpers over the token list.
    const auto& tokens = corpus.tokens;
    auto char_range = [&](std::size_t first_token, std::size_t last_token) {
        return std::pair(tokens[first_token].start, tokens[last_token].end);
    };

    const std::size_t n_tokens = tokens.size();
    const std::size_t world_len = n_tokens / 20;

    // Base annotation: 20 worlds over consecutive token blocks, a switch
    // on each world's first token, characters/places/times on fixed
    // vocabulary hits inside the blocks.
    struct Scripted {
        std::string id;
        int boundary_shift;       // tokens added (+) or removed (-) at world ends
        bool merge_first_worlds;  // worlds 1+2 become one stretch
        bool split_worlds;        // every world splits in half
        int drop_every;           // drop every n-th element span (0 = keep all)
        std::uint32_t id_offset;  // renumber character/place ids
    };
    const std::vector<Scripted> scripts = {
        {"anno1", 0, false, false, 0, 0}, {"anno2", 1, false, false, 0, 1},
        {"anno3", 0, true, false, 3, 0},  {"anno4", -1, false, true, 0, 2},
        {"anno5", 1, false, false, 4, 0}, {"anno6", 0, true, false, 2, 3},
    };

    for (const Scripted& script : scripts) {
        std::vector<twt::Span> spans;

        // Shifted block boundaries keep worlds disjoint by construction:
        // world k covers tokens [bounds[k], bounds[k+1] - 1].
        std::vector<std::size_t> bounds(21);
        bounds[0] = 0;
        bounds[20] = n_tokens;
        for (std::size_t k = 1; k < 20; ++k) {
            const auto base = static_cast<long long>(k * world_len);
            bounds[k] = static_cast<std::size_t>(base + script.boundary_shift);
        }

        std::uint32_t world_id = 1;
        std::size_t block = script.merge_first_worlds ? 2 : 0;
        if (script.merge_first_worlds) {
            auto [s, e] = char_range(bounds[0], bounds[2] - 1);
            spans.push_back({twt::TagKind::TextWorld, world_id++, s, e, 0});
            spans.push_back({twt::TagKind::Switch, std::nullopt, tokens[bounds[0]].start,
                             tokens[bounds[0]].end, 0});
        }
        for (; block < 20; ++block) {
            const std::size_t first = bounds[block];
            const std::size_t last = bounds[block + 1] - 1;
            if (script.split_worlds && last - first >= 3) {
                const std::size_t mid = first + (last - first) / 2;
                auto [s1, e1] = char_range(first, mid);
                spans.push_back({twt::TagKind::TextWorld, world_id++, s1, e1, 0});
                auto [s2, e2] = char_range(mid + 1, last);
                spans.push_back({twt::TagKind::TextWorld, world_id++, s2, e2, 0});
            } else {
                auto [s, e] = char_range(first, last);
                spans.push_back({twt::TagKind::TextWorld, world_id++, s, e, 0});
            }
            // A switch on the block's first token.
            spans.push_back({twt::TagKind::Switch, std::nullopt, tokens[first].start,
                             tokens[first].end, 0});
        }

        // Element spans on vocabulary hits.
        std::size_t element_counter = 0;
        for (std::size_t t = 0; t < n_tokens; ++t) {
            const std::u32string& s = tokens[t].surface;
            std::optional<std::pair<twt::TagKind, std::uint32_t>> tag;
            if (s == U"quail" || s == U"он") tag = {twt::TagKind::Character, 1};
            else if (s == U"kirsten") tag = {twt::TagKind::Character, 2};
            else if (s == U"agents") tag = {twt::TagKind::Character, 3};
            else if (s == U"mars") tag = {twt::TagKind::Place, 1};
            else if (s == U"valley" || s == U"город") tag = {twt::TagKind::Place, 2};
            else if (s == U"office" || s == U"дом") tag = {twt::TagKind::Place, 3};
            else if (s == U"утро" || s == U"dream") tag = {twt::TagKind::Time, 1};
            if (!tag) continue;
            ++element_counter;
            if (script.drop_every > 0 &&
                element_counter % static_cast<std::size_t>(script.drop_every) == 0)
                continue;
            std::uint32_t id = tag->second;
            if (tag->first != twt::TagKind::Time)
                id = 1 + (id - 1 + script.id_offset) % 4;
            spans.push_back({tag->first, id, tokens[t].start, tokens[t].end, 0});
        }

        corpus.documents.push_back(twt::make_document(script.id, corpus.text, std::move(spans)));
    }
    return corpus;
}

/// Writes a corpus to disk: one markup file per annotator, a POS sidecar
/// covering every token, and a manifest. Returns the manifest path.
inline std::filesystem::path write_corpus(const std::filesystem::path& dir,
                                          const SyntheticCorpus& corpus) {
    static const std::array<std::string, 5> kPosTags = {"VERB", "NOUN", "ADJ", "PUNCT", "OTHER"};
    std::string manifest = "{\n  \"annotators\": [\n";
    for (std::size_t i = 0; i < corpus.documents.size(); ++i) {
        const auto& doc = corpus.documents[i];
        const std::string filename = doc.annotator_id + ".twt";
        std::ofstream out(dir / filename, std::ios::binary);
        out << twt::serialize_utf8(doc);
        manifest += "    {\"id\": \"" + doc.annotator_id + "\", \"path\": \"" + filename + "\"}";
        manifest += i + 1 < corpus.documents.size() ? ",\n" : "\n";
    }
    manifest += "  ],\n  \"pos_sidecar\": \"pos.tsv\"\n}\n";

    std::ofstream pos(dir / "pos.tsv", std::ios::binary);
    for (const twt::Token& token : corpus.tokens) {
        const std::string tag = twt::is_punctuation(token.surface[0])
                                    ? "PUNCT"
                                    : kPosTags[token.index % kPosTags.size()];
        pos << token.index << "\t" << twt::utf8_encode(token.surface) << "\t" << tag << "\n";
    }

    const auto manifest_path = dir / "corpus.json";
    std::ofstream mf(manifest_path, std::ios::binary);
    mf << manifest;
    return manifest_path;
}

}  // namespace fixtures

#endif  // TWT_TESTS_FIXTURES_HPP
