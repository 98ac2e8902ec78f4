// Licensed under the Apache License, Version 2.0. See LICENSE in the project root.
//
// Corpus manifest: one JSON file naming the annotator copies plus
// tokenizer options and an optional POS sidecar. Relative paths resolve
// against the manifest's directory.
//
//   {
//     "annotators": [ {"id": "anno1", "path": "anno1.twt"}, ... ],
//     "tokenizer":  {"punctuation_separates": true, "punctuation_tokens": true},
//     "pos_sidecar": "pos.tsv"
//   }

#ifndef TWT_MANIFEST_HPP
#define TWT_MANIFEST_HPP

#include <filesystem>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "twt/detail/parallel.hpp"
#include "twt/model.hpp"
#include "twt/parser.hpp"

namespace twt {

struct ManifestError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ManifestEntry {
    std::string annotator_id;
    std::filesystem::path path;  // resolved against the manifest directory
};

struct CorpusManifest {
    std::vector<ManifestEntry> annotators;
    TokenizerOptions tokenizer;
    std::optional<std::filesystem::path> pos_sidecar;
    std::filesystem::path base_dir;
};

namespace detail {

inline std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open file: " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return std::move(buffer).str();
}

/// FNV-1a 64-bit over raw bytes, as a 16-digit hex string. Good enough to
/// detect a report paired with the wrong corpus.
inline std::string fnv1a_hex(std::string_view bytes) {
    std::uint64_t hash = 0xcbf29ce484222325ull;
    for (unsigned char b : bytes) {
        hash ^= b;
        hash *= 0x100000001b3ull;
    }
    static constexpr char digits[] = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[static_cast<std::size_t>(i)] = digits[hash & 0xF];
        hash >>= 4;
    }
    return out;
}

}  // namespace detail

inline CorpusManifest load_manifest(const std::filesystem::path& path) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(detail::read_file(path));
    } catch (const std::exception& e) {
        throw ManifestError("manifest " + path.string() + ": " + e.what());
    }
    if (!doc.is_object() || !doc.contains("annotators") || !doc["annotators"].is_array())
        throw ManifestError("manifest " + path.string() + ": missing \"annotators\" array");

    CorpusManifest manifest;
    manifest.base_dir = path.has_parent_path() ? path.parent_path() : std::filesystem::path(".");

    std::set<std::string> seen;
    for (const auto& entry : doc["annotators"]) {
        if (!entry.is_object() || !entry.contains("id") || !entry.contains("path"))
            throw ManifestError("manifest entry needs \"id\" and \"path\"");
        ManifestEntry e;
        e.annotator_id = entry["id"].get<std::string>();
        e.path = manifest.base_dir / entry["path"].get<std::string>();
        if (!seen.insert(e.annotator_id).second)
            throw ManifestError("duplicate annotator id: " + e.annotator_id);
        manifest.annotators.push_back(std::move(e));
    }
    if (manifest.annotators.empty()) throw ManifestError("manifest lists no annotators");

    if (doc.contains("tokenizer")) {
        const auto& tok = doc["tokenizer"];
        if (tok.contains("punctuation_separates"))
            manifest.tokenizer.punctuation_separates = tok["punctuation_separates"].get<bool>();
        if (tok.contains("punctuation_tokens"))
            manifest.tokenizer.punctuation_tokens = tok["punctuation_tokens"].get<bool>();
    }
    if (doc.contains("pos_sidecar"))
        manifest.pos_sidecar = manifest.base_dir / doc["pos_sidecar"].get<std::string>();
    return manifest;
}

/// A parsed corpus: per-file parse results in manifest order, plus the
/// digest of the manifest bytes that every report embeds.
struct LoadedCorpus {
    CorpusManifest manifest;
    std::string manifest_digest;
    std::vector<ParseResult> results;        // parallel to manifest.annotators
    std::vector<std::string> file_failures;  // files that could not be read

    bool ok() const {
        if (!file_failures.empty()) return false;
        for (const auto& r : results)
            if (!r.ok()) return false;
        return true;
    }

    std::vector<AnnotatedDocument> documents() const {
        std::vector<AnnotatedDocument> docs;
        docs.reserve(results.size());
        for (const auto& r : results)
            if (r.document) docs.push_back(*r.document);
        return docs;
    }
};

inline LoadedCorpus load_corpus(const std::filesystem::path& manifest_path, unsigned threads = 1) {
    LoadedCorpus corpus;
    corpus.manifest_digest = detail::fnv1a_hex(detail::read_file(manifest_path));
    corpus.manifest = load_manifest(manifest_path);
    const std::size_t n = corpus.manifest.annotators.size();
    corpus.results.resize(n);
    std::vector<char> failed(n, 0);
    detail::parallel_for(n, threads, [&](std::size_t i) {
        const auto& entry = corpus.manifest.annotators[i];
        std::string raw;
        try {
            raw = detail::read_file(entry.path);
        } catch (const std::exception&) {
            failed[i] = 1;
            return;
        }
        corpus.results[i] = parse_annotation_utf8(raw, entry.annotator_id);
    });
    for (std::size_t i = 0; i < n; ++i)
        if (failed[i]) corpus.file_failures.push_back(corpus.manifest.annotators[i].path.string());
    return corpus;
}

}  // namespace twt

#endif  // TWT_MANIFEST_HPP
