// Licensed under the Apache License, Version 2.0. See LICENSE in the project root.
//
// Switch-agreement statistics. Switch spans from different annotators that
// share at least one token belong to one "site" (transitive closure over
// shared tokens); the agreement level of a site is the number of distinct
// annotators that marked it.

#ifndef TWT_SWITCHES_HPP
#define TWT_SWITCHES_HPP

#include <algorithm>
#include <cstddef>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "twt/model.hpp"
#include "twt/unicode.hpp"

namespace twt {

/// Raised when the POS sidecar cannot be ingested; names the 1-based line.
struct SidecarError : std::runtime_error {
    SidecarError(std::size_t line_number, const std::string& what)
        : std::runtime_error("pos sidecar line " + std::to_string(line_number) + ": " + what),
          line(line_number) {}
    std::size_t line;
};

/// One row of the tab-separated sidecar: token_index, surface, POS tag.
/// token_index refers to the shared tokenization of the validated text.
struct PosEntry {
    std::size_t token_index = 0;
    std::u32string surface;
    std::string pos;
    std::size_t line = 0;
};

struct PosTable {
    std::vector<PosEntry> rows;

    const PosEntry* find(std::size_t token_index) const {
        for (const auto& row : rows)
            if (row.token_index == token_index) return &row;
        return nullptr;
    }
};

inline PosTable parse_pos_sidecar(std::string_view content) {
    PosTable table;
    std::size_t line_number = 0;
    std::size_t pos = 0;
    while (pos <= content.size()) {
        const std::size_t eol = std::min(content.find('\n', pos), content.size());
        std::string_view line = content.substr(pos, eol - pos);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        ++line_number;
        pos = eol + 1;
        if (line.empty()) {
            if (eol == content.size()) break;
            continue;
        }
        const std::size_t tab1 = line.find('\t');
        const std::size_t tab2 = tab1 == std::string_view::npos ? std::string_view::npos
                                                                : line.find('\t', tab1 + 1);
        if (tab1 == std::string_view::npos || tab2 == std::string_view::npos)
            throw SidecarError(line_number, "expected token_index<TAB>surface<TAB>pos");
        const std::string_view index_field = line.substr(0, tab1);
        if (index_field.empty() ||
            index_field.find_first_not_of("0123456789") != std::string_view::npos)
            throw SidecarError(line_number, "token index is not a non-negative integer");
        PosEntry entry;
        entry.token_index = std::stoull(std::string(index_field));
        entry.surface = utf8_decode(line.substr(tab1 + 1, tab2 - tab1 - 1));
        entry.pos = std::string(line.substr(tab2 + 1));
        if (entry.pos.empty()) throw SidecarError(line_number, "empty POS tag");
        entry.line = line_number;
        table.rows.push_back(std::move(entry));
        if (eol == content.size()) break;
    }
    return table;
}

/// One switch site: the union of overlapping switch-span token sets, with
/// the number of annotators that marked it.
struct SwitchSite {
    std::vector<std::size_t> token_indices;  // sorted, unique
    std::size_t agreement = 0;
};

struct SwitchAgreement {
    std::vector<SwitchSite> sites;                         // ordered by first token
    std::map<std::size_t, std::size_t> histogram;          // agreement level -> sites
    std::map<std::string, std::size_t> pos_distribution;   // empty unless a sidecar was given
    bool has_pos = false;
};

inline SwitchAgreement switch_agreement(const std::vector<AnnotatedDocument>& docs,
                                        const PosTable* pos = nullptr,
                                        const TokenizerOptions& options = {}) {
    if (docs.empty()) throw std::invalid_argument("switch_agreement requires documents");

    struct Instance {
        std::size_t annotator;
        std::vector<std::size_t> tokens;
    };
    std::vector<Instance> instances;
    for (std::size_t d = 0; d < docs.size(); ++d) {
        const auto tokens = tokenize(docs[d].plain_text, options);
        for (const Span& s : docs[d].spans) {
            if (s.kind != TagKind::Switch) continue;
            auto covered = span_tokens(tokens, s);
            if (!covered.empty()) instances.push_back({d, std::move(covered)});
        }
    }

    // Union-find over instances, joined through shared tokens.
    std::vector<std::size_t> parent(instances.size());
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](std::size_t v) {
        while (parent[v] != v) v = parent[v] = parent[parent[v]];
        return v;
    };
    std::map<std::size_t, std::size_t> token_owner;  // token -> first instance seen
    for (std::size_t v = 0; v < instances.size(); ++v) {
        for (std::size_t token : instances[v].tokens) {
            auto [it, inserted] = token_owner.emplace(token, v);
            if (!inserted) parent[find(v)] = find(it->second);
        }
    }

    std::map<std::size_t, std::pair<std::set<std::size_t>, std::set<std::size_t>>> groups;
    for (std::size_t v = 0; v < instances.size(); ++v) {
        auto& [tokens, annotators] = groups[find(v)];
        tokens.insert(instances[v].tokens.begin(), instances[v].tokens.end());
        annotators.insert(instances[v].annotator);
    }

    SwitchAgreement result;
    for (auto& [root, group] : groups) {
        SwitchSite site;
        site.token_indices.assign(group.first.begin(), group.first.end());
        site.agreement = group.second.size();
        result.sites.push_back(std::move(site));
    }
    std::sort(result.sites.begin(), result.sites.end(), [](const SwitchSite& a, const SwitchSite& b) {
        return a.token_indices.front() < b.token_indices.front();
    });
    for (const SwitchSite& site : result.sites) ++result.histogram[site.agreement];

    if (pos) {
        // Validate the whole sidecar against the shared tokenization before
        // tallying, so a bad row is reported with its line number.
        const auto tokens = tokenize(docs.front().plain_text, options);
        for (const PosEntry& row : pos->rows) {
            if (row.token_index >= tokens.size())
                throw SidecarError(row.line, "token index out of range");
            if (tokens[row.token_index].surface != row.surface)
                throw SidecarError(row.line, "surface does not match the shared tokenization");
        }
        result.has_pos = true;
        for (const SwitchSite& site : result.sites) {
            for (std::size_t token : site.token_indices) {
                const PosEntry* entry = pos->find(token);
                ++result.pos_distribution[entry ? entry->pos : "UNK"];
            }
        }
    }
    return result;
}

}  // namespace twt

#endif  // TWT_SWITCHES_HPP
