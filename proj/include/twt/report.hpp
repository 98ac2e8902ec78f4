// Licensed under the Apache License, Version 2.0. See LICENSE in the project root.
//
// Report assembly. Every report is one JSON document with a fixed
// envelope; field order is fixed and numbers use shortest round-trip
// serialization, so identical inputs and flags produce identical bytes.
// CSV emitters flatten the table-shaped payloads (stats, match, elements)
// and print numbers through the same serializer as the JSON path.

#ifndef TWT_REPORT_HPP
#define TWT_REPORT_HPP

#include <array>
#include <cmath>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "twt/consensus.hpp"
#include "twt/counts.hpp"
#include "twt/elements.hpp"
#include "twt/matching.hpp"
#include "twt/model.hpp"
#include "twt/parser.hpp"
#include "twt/switches.hpp"
#include "twt/unicode.hpp"

namespace twt {

inline constexpr std::string_view kToolName = "twt";
inline constexpr std::string_view kToolVersion = "0.1.0";

using Json = nlohmann::ordered_json;

/// Column order of the count table: text worlds, switches, characters,
/// places, times.
inline constexpr std::array<TagKind, kNumTagKinds> kTableKindOrder = {
    TagKind::TextWorld, TagKind::Switch, TagKind::Character, TagKind::Place, TagKind::Time};

namespace detail {

inline double round_to(double value, int decimals) {
    const double scale = std::pow(10.0, decimals);
    return std::round(value * scale) / scale;
}

/// Display rounding for floating-point leaves; presentation only.
inline void apply_rounding(Json& node, int decimals) {
    if (node.is_number_float()) {
        node = round_to(node.get<double>(), decimals);
    } else if (node.is_object() || node.is_array()) {
        for (auto& child : node) apply_rounding(child, decimals);
    }
}

inline std::string number_repr(const Json& value) { return value.dump(); }

inline std::string csv_escape(std::string_view field) {
    if (field.find_first_of(",\"\n") == std::string_view::npos) return std::string(field);
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += "\"\"";
        else out += c;
    }
    out += "\"";
    return out;
}

}  // namespace detail

inline Json make_report(std::string_view command, std::string_view manifest_digest, Json payload,
                        std::optional<int> round_decimals = std::nullopt) {
    if (round_decimals) detail::apply_rounding(payload, *round_decimals);
    Json report;
    report["tool"] = kToolName;
    report["version"] = kToolVersion;
    report["command"] = command;
    report["manifest_digest"] = manifest_digest;
    report["payload"] = std::move(payload);
    return report;
}

inline std::string dump_report(const Json& report) { return report.dump(2) + "\n"; }

/// One diagnostic as a structured record (for the stderr stream).
inline Json diagnostic_json(std::string_view annotator, std::string_view path,
                            const ParseDiagnostic& diag) {
    Json j;
    j["annotator"] = annotator;
    j["path"] = path;
    j["severity"] = to_string(diag.severity);
    j["offset"] = diag.offset;
    j["code"] = to_string(diag.code);
    j["excerpt"] = diag.excerpt;
    return j;
}

inline Json alignment_json(const AlignmentReport& report) {
    Json j;
    j["aligned"] = report.aligned;
    if (report.first_divergence) {
        j["first_divergence"] = {{"annotator_a", report.first_divergence->annotator_a},
                                 {"annotator_b", report.first_divergence->annotator_b},
                                 {"offset", report.first_divergence->offset}};
    } else {
        j["first_divergence"] = nullptr;
    }
    Json lengths = Json::array();
    for (const auto& [annotator, length] : report.plain_text_lengths)
        lengths.push_back({{"annotator", annotator}, {"length", length}});
    j["plain_text_lengths"] = std::move(lengths);
    return j;
}

inline Json counts_json(const CountSummary& summary) {
    Json rows = Json::array();
    for (std::size_t i = 0; i < summary.annotator_ids.size(); ++i) {
        Json row;
        row["annotator"] = summary.annotator_ids[i];
        for (TagKind kind : kTableKindOrder)
            row[std::string(kind_name(kind))] = summary.counts[i][kind_index(kind)];
        rows.push_back(std::move(row));
    }
    Json median;
    for (TagKind kind : kTableKindOrder) {
        const MedianPair& m = summary.medians[kind_index(kind)];
        median[std::string(kind_name(kind))] = Json::array({m.lower, m.upper});
    }
    Json j;
    j["rows"] = std::move(rows);
    j["median"] = std::move(median);
    return j;
}

inline Json matches_json(std::string_view annotator_a, std::string_view annotator_b,
                         const std::vector<WorldMatch>& matches,
                         const std::vector<std::pair<std::size_t, std::size_t>>& series) {
    Json j;
    j["pair"] = Json::array({annotator_a, annotator_b});
    Json rows = Json::array();
    for (const WorldMatch& m : matches) {
        rows.push_back({{"source", m.source_ordinal},
                        {"l_min", m.distance},
                        {"target", m.target_ordinal},
                        {"divergence", m.ordinal_divergence}});
    }
    j["matches"] = std::move(rows);
    Json series_rows = Json::array();
    for (const auto& [distance, divergence] : series)
        series_rows.push_back({{"l_min", distance}, {"divergence", divergence}});
    j["divergence_series"] = std::move(series_rows);
    return j;
}

inline Json elements_json(const std::vector<std::string>& annotator_ids,
                          const std::vector<ElementAlignment>& alignments, TagKind kind,
                          MemberSetMode mode) {
    Json j;
    j["kind"] = kind_name(kind);
    j["mode"] = to_string(mode);
    j["annotators"] = annotator_ids;
    Json rows = Json::array();
    for (std::size_t idx = 0; idx < alignments.size(); ++idx) {
        const ElementAlignment& a = alignments[idx];
        Json row;
        row["element"] = idx + 1;
        Json members;
        for (std::size_t d = 0; d < annotator_ids.size(); ++d) {
            if (a.members[d]) {
                Json surfaces = Json::array();
                for (const auto& s : a.members[d]->surface_forms) surfaces.push_back(utf8_encode(s));
                members[annotator_ids[d]] = {{"element_id", a.members[d]->element_id},
                                             {"tokens", a.members[d]->token_indices.size()},
                                             {"surface_forms", std::move(surfaces)}};
            } else {
                members[annotator_ids[d]] = nullptr;
            }
        }
        row["members"] = std::move(members);
        Json pairwise = Json::array();
        for (const PairwiseJaccard& p : a.pairwise) {
            pairwise.push_back({{"a", annotator_ids[p.annotator_a]},
                                {"b", annotator_ids[p.annotator_b]},
                                {"j", p.value}});
        }
        row["pairwise"] = std::move(pairwise);
        row["mean_j"] = a.mean_j;
        rows.push_back(std::move(row));
    }
    j["elements"] = std::move(rows);
    return j;
}

inline Json switches_json(const SwitchAgreement& agreement) {
    Json j;
    Json sites = Json::array();
    for (const SwitchSite& site : agreement.sites)
        sites.push_back({{"tokens", site.token_indices}, {"agreement", site.agreement}});
    j["sites"] = std::move(sites);
    Json histogram = Json::array();
    for (const auto& [level, count] : agreement.histogram)
        histogram.push_back({{"agreement", level}, {"sites", count}});
    j["histogram"] = std::move(histogram);
    if (agreement.has_pos) {
        Json pos = Json::array();
        for (const auto& [tag, count] : agreement.pos_distribution)
            pos.push_back({{"pos", tag}, {"count", count}});
        j["pos_distribution"] = std::move(pos);
    }
    return j;
}

inline Json consensus_json(const FuzzyAnnotation& fuzzy, const CrispRuns& runs, double threshold,
                           const std::vector<AnnotatedDocument>& docs,
                           const TokenizerOptions& options = {}) {
    Json j;
    j["threshold"] = threshold;
    j["num_annotators"] = fuzzy.num_annotators;
    j["num_tokens"] = fuzzy.num_tokens;
    Json degrees;
    for (TagKind kind : kAllTagKinds) {
        Json column = Json::array();
        for (std::size_t t = 0; t < fuzzy.num_tokens; ++t) column.push_back(fuzzy.degree(kind, t));
        degrees[std::string(kind_name(kind))] = std::move(column);
    }
    j["degrees"] = std::move(degrees);
    Json run_obj;
    for (TagKind kind : kAllTagKinds) {
        Json list = Json::array();
        for (const TokenRun& run : runs[kind_index(kind)])
            list.push_back({{"first", run.first}, {"last", run.last}});
        run_obj[std::string(kind_name(kind))] = std::move(list);
    }
    j["runs"] = std::move(run_obj);
    Json scores = Json::array();
    for (const auto& doc : docs) {
        Json row;
        row["annotator"] = doc.annotator_id;
        for (TagKind kind : kAllTagKinds)
            row[std::string(kind_name(kind))] = annotator_vs_consensus(doc, runs, kind, options);
        scores.push_back(std::move(row));
    }
    j["annotator_agreement"] = std::move(scores);
    return j;
}

inline Json select_json(std::size_t k, const std::vector<std::string>& selected) {
    Json j;
    j["k"] = k;
    j["selected"] = selected;
    return j;
}

// --- CSV emitters (flat tables for the count/match/element shapes) ---

inline std::string counts_csv(const Json& payload) {
    std::string out = "annotator";
    for (TagKind kind : kTableKindOrder) out += "," + std::string(kind_name(kind));
    out += "\n";
    for (const auto& row : payload.at("rows")) {
        out += detail::csv_escape(row.at("annotator").get<std::string>());
        for (TagKind kind : kTableKindOrder)
            out += "," + detail::number_repr(row.at(std::string(kind_name(kind))));
        out += "\n";
    }
    const auto& median = payload.at("median");
    out += "median_lower";
    for (TagKind kind : kTableKindOrder)
        out += "," + detail::number_repr(median.at(std::string(kind_name(kind)))[0]);
    out += "\nmedian_upper";
    for (TagKind kind : kTableKindOrder)
        out += "," + detail::number_repr(median.at(std::string(kind_name(kind)))[1]);
    out += "\n";
    return out;
}

inline std::string matches_csv(const Json& payload) {
    std::string out = "source,l_min,target,divergence\n";
    for (const auto& row : payload.at("matches")) {
        out += detail::number_repr(row.at("source")) + "," + detail::number_repr(row.at("l_min")) +
               "," + detail::number_repr(row.at("target")) + "," +
               detail::number_repr(row.at("divergence")) + "\n";
    }
    out += "\nsorted_l_min,divergence\n";
    for (const auto& row : payload.at("divergence_series"))
        out += detail::number_repr(row.at("l_min")) + "," + detail::number_repr(row.at("divergence")) +
               "\n";
    return out;
}

inline std::string elements_csv(const Json& payload) {
    const auto annotators = payload.at("annotators").get<std::vector<std::string>>();
    std::string out = "element";
    for (const auto& id : annotators) out += "," + detail::csv_escape("member_" + id);
    for (std::size_t a = 0; a < annotators.size(); ++a)
        for (std::size_t b = a + 1; b < annotators.size(); ++b)
            out += "," + detail::csv_escape("j_" + annotators[a] + "_" + annotators[b]);
    out += ",mean_j\n";
    for (const auto& row : payload.at("elements")) {
        out += detail::number_repr(row.at("element"));
        for (const auto& id : annotators) {
            const auto& member = row.at("members").at(id);
            out += ",";
            if (!member.is_null()) out += detail::number_repr(member.at("element_id"));
        }
        for (const auto& pair : row.at("pairwise")) out += "," + detail::number_repr(pair.at("j"));
        out += "," + detail::number_repr(row.at("mean_j")) + "\n";
    }
    return out;
}

}  // namespace twt

#endif  // TWT_REPORT_HPP
