// Licensed under the Apache License, Version 2.0. See LICENSE in the project root.
//
// twt — command-line reports over a corpus of text-world annotations.
//
//   twt validate  <manifest>
//   twt stats     <manifest> [--csv]
//   twt match     <manifest> --pair A,B [--csv]
//   twt elements  <manifest> --kind character|place [--mode positions|forms] [--csv]
//   twt switches  <manifest> [--pos sidecar.tsv]
//   twt consensus <manifest> [--threshold x]
//   twt select    <manifest> --k n
//
// Reports go to stdout; diagnostics go to stderr as one JSON record per
// line. Exit status: 0 clean, 1 parse/alignment/data failure, 2 usage.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "twt/consensus.hpp"
#include "twt/counts.hpp"
#include "twt/elements.hpp"
#include "twt/manifest.hpp"
#include "twt/matching.hpp"
#include "twt/model.hpp"
#include "twt/parser.hpp"
#include "twt/report.hpp"
#include "twt/switches.hpp"
#include "twt/unicode.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitDataError = 1;
constexpr int kExitUsage = 2;

struct Options {
    std::string manifest;
    bool csv = false;
    std::optional<int> round;
    unsigned threads = 1;
    std::string pair;
    std::string kind = "character";
    std::string mode = "positions";
    std::string pos_path;
    double threshold = 0.5;
    std::size_t k = 2;
};

void print_diagnostics(const twt::LoadedCorpus& corpus) {
    for (std::size_t i = 0; i < corpus.results.size(); ++i) {
        const auto& entry = corpus.manifest.annotators[i];
        for (const auto& diag : corpus.results[i].diagnostics)
            std::cerr << twt::diagnostic_json(entry.annotator_id, entry.path.string(), diag).dump()
                      << "\n";
    }
    for (const auto& path : corpus.file_failures) {
        twt::Json j;
        j["severity"] = "error";
        j["code"] = "FileNotReadable";
        j["path"] = path;
        std::cerr << j.dump() << "\n";
    }
}

void emit(const twt::Json& report) { std::cout << twt::dump_report(report); }

/// CSV reports carry the envelope as one comment line so report/corpus
/// mismatches stay detectable.
void emit_csv(std::string_view command, std::string_view digest, const std::string& table) {
    std::cout << "# tool=" << twt::kToolName << " version=" << twt::kToolVersion
              << " command=" << command << " manifest_digest=" << digest << "\n"
              << table;
}

std::optional<std::pair<std::size_t, std::size_t>> resolve_pair(const twt::LoadedCorpus& corpus,
                                                                const std::string& pair) {
    const auto comma = pair.find(',');
    if (comma == std::string::npos) return std::nullopt;
    const std::string a = pair.substr(0, comma);
    const std::string b = pair.substr(comma + 1);
    std::optional<std::size_t> ia;
    std::optional<std::size_t> ib;
    for (std::size_t i = 0; i < corpus.manifest.annotators.size(); ++i) {
        if (corpus.manifest.annotators[i].annotator_id == a) ia = i;
        if (corpus.manifest.annotators[i].annotator_id == b) ib = i;
    }
    if (!ia || !ib || *ia == *ib) return std::nullopt;
    return std::pair(*ia, *ib);
}

twt::AlignmentReport check_alignment(const std::vector<twt::AnnotatedDocument>& docs) {
    twt::AlignmentReport alignment = twt::validate_alignment(docs);
    if (!alignment.aligned) {
        twt::Json j;
        j["severity"] = "error";
        j["code"] = "UnalignedTexts";
        j["annotator_a"] = alignment.first_divergence->annotator_a;
        j["annotator_b"] = alignment.first_divergence->annotator_b;
        j["offset"] = alignment.first_divergence->offset;
        std::cerr << j.dump() << "\n";
    }
    return alignment;
}

int run_command(const std::string& command, const Options& opt) {
    twt::LoadedCorpus corpus;
    try {
        corpus = twt::load_corpus(opt.manifest, opt.threads);
    } catch (const twt::ManifestError& e) {
        std::cerr << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << e.what() << "\n";
        return kExitUsage;
    }
    print_diagnostics(corpus);
    const std::string& digest = corpus.manifest_digest;
    const twt::TokenizerOptions tokenizer = corpus.manifest.tokenizer;

    if (command == "validate") {
        twt::Json files = twt::Json::array();
        for (std::size_t i = 0; i < corpus.results.size(); ++i) {
            const auto& entry = corpus.manifest.annotators[i];
            const auto& result = corpus.results[i];
            twt::Json diags = twt::Json::array();
            for (const auto& d : result.diagnostics)
                diags.push_back(twt::diagnostic_json(entry.annotator_id, entry.path.string(), d));
            files.push_back({{"annotator", entry.annotator_id},
                             {"path", entry.path.string()},
                             {"errors", result.error_count()},
                             {"warnings", result.diagnostics.size() - result.error_count()},
                             {"diagnostics", std::move(diags)}});
        }
        twt::Json payload;
        payload["files"] = std::move(files);
        bool aligned = false;
        if (corpus.ok() && corpus.results.size() >= 2) {
            const auto docs = corpus.documents();
            const auto alignment = twt::validate_alignment(docs);
            aligned = alignment.aligned;
            payload["alignment"] = twt::alignment_json(alignment);
        } else {
            payload["alignment"] = nullptr;
        }
        emit(twt::make_report(command, digest, std::move(payload), opt.round));
        return corpus.ok() && aligned ? kExitOk : kExitDataError;
    }

    if (!corpus.ok()) return kExitDataError;
    const auto docs = corpus.documents();

    if (command == "stats") {
        const auto summary = twt::count_summary(docs);
        const auto payload = twt::counts_json(summary);
        if (opt.csv) {
            twt::Json rounded = payload;
            if (opt.round) twt::detail::apply_rounding(rounded, *opt.round);
            emit_csv(command, digest, twt::counts_csv(rounded));
        } else {
            emit(twt::make_report(command, digest, payload, opt.round));
        }
        return kExitOk;
    }

    if (command == "select") {
        if (opt.k == 0 || opt.k > docs.size()) {
            std::cerr << "select: --k must be between 1 and the number of annotators\n";
            return kExitUsage;
        }
        const auto selected = twt::select_median_annotations(docs, opt.k);
        emit(twt::make_report(command, digest, twt::select_json(opt.k, selected), opt.round));
        return kExitOk;
    }

    // Everything below compares annotations, which only makes sense over
    // one shared text.
    if (docs.size() < 2) {
        std::cerr << "command '" << command << "' needs at least 2 annotators\n";
        return kExitDataError;
    }
    if (!check_alignment(docs).aligned) return kExitDataError;

    if (command == "match") {
        const auto pair = resolve_pair(corpus, opt.pair);
        if (!pair) {
            std::cerr << "match: --pair must name two distinct annotator ids, e.g. --pair 1,3\n";
            return kExitUsage;
        }
        const auto& doc_a = docs[pair->first];
        const auto& doc_b = docs[pair->second];
        std::vector<twt::WorldMatch> matches;
        try {
            matches = twt::match_worlds(doc_a, doc_b, opt.threads);
        } catch (const std::invalid_argument& e) {
            std::cerr << e.what() << "\n";
            return kExitDataError;
        }
        const auto series = twt::ordinal_divergence_series(matches);
        const auto payload =
            twt::matches_json(doc_a.annotator_id, doc_b.annotator_id, matches, series);
        if (opt.csv) {
            twt::Json rounded = payload;
            if (opt.round) twt::detail::apply_rounding(rounded, *opt.round);
            emit_csv(command, digest, twt::matches_csv(rounded));
        } else {
            emit(twt::make_report(command, digest, payload, opt.round));
        }
        return kExitOk;
    }

    if (command == "elements") {
        const auto kind = twt::kind_from_name(opt.kind);
        const auto mode = twt::member_set_mode_from_name(opt.mode);
        if (!kind || (*kind != twt::TagKind::Character && *kind != twt::TagKind::Place) || !mode) {
            std::cerr << "elements: --kind must be character|place, --mode positions|forms\n";
            return kExitUsage;
        }
        const auto alignments = twt::align_elements(docs, *kind, *mode, tokenizer);
        std::vector<std::string> ids;
        for (const auto& doc : docs) ids.push_back(doc.annotator_id);
        const auto payload = twt::elements_json(ids, alignments, *kind, *mode);
        if (opt.csv) {
            twt::Json rounded = payload;
            if (opt.round) twt::detail::apply_rounding(rounded, *opt.round);
            emit_csv(command, digest, twt::elements_csv(rounded));
        } else {
            emit(twt::make_report(command, digest, payload, opt.round));
        }
        return kExitOk;
    }

    if (command == "switches") {
        std::optional<twt::PosTable> pos;
        std::filesystem::path sidecar_path;
        if (!opt.pos_path.empty()) sidecar_path = opt.pos_path;
        else if (corpus.manifest.pos_sidecar) sidecar_path = *corpus.manifest.pos_sidecar;
        if (!sidecar_path.empty()) {
            try {
                pos = twt::parse_pos_sidecar(twt::detail::read_file(sidecar_path));
            } catch (const std::exception& e) {
                std::cerr << e.what() << "\n";
                return kExitDataError;
            }
        }
        twt::SwitchAgreement agreement;
        try {
            agreement = twt::switch_agreement(docs, pos ? &*pos : nullptr, tokenizer);
        } catch (const twt::SidecarError& e) {
            std::cerr << e.what() << "\n";
            return kExitDataError;
        }
        emit(twt::make_report(command, digest, twt::switches_json(agreement), opt.round));
        return kExitOk;
    }

    if (command == "consensus") {
        if (!(opt.threshold > 0.0 && opt.threshold <= 1.0)) {
            std::cerr << "consensus: --threshold must be in (0, 1]\n";
            return kExitUsage;
        }
        const auto fuzzy = twt::fuzzy_membership(docs, tokenizer);
        const auto runs = twt::crisp_consensus(fuzzy, opt.threshold);
        emit(twt::make_report(command, digest,
                              twt::consensus_json(fuzzy, runs, opt.threshold, docs, tokenizer),
                              opt.round));
        return kExitOk;
    }

    std::cerr << "unknown command: " << command << "\n";
    return kExitUsage;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Text-world annotation agreement toolkit"};
    app.require_subcommand(1);
    Options opt;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("manifest", opt.manifest, "corpus manifest file")->required();
        cmd->add_option("--round", opt.round, "round displayed numbers to N decimals");
        cmd->add_option("--threads", opt.threads, "worker threads (default 1)");
    };

    CLI::App* validate = app.add_subcommand("validate", "parse all files and check alignment");
    add_common(validate);
    CLI::App* stats = app.add_subcommand("stats", "per-annotator tag counts with medians");
    add_common(stats);
    stats->add_flag("--csv", opt.csv, "emit a flat CSV table");
    CLI::App* match = app.add_subcommand("match", "match text worlds between two annotators");
    add_common(match);
    match->add_option("--pair", opt.pair, "two annotator ids, comma-separated")->required();
    match->add_flag("--csv", opt.csv, "emit a flat CSV table");
    CLI::App* elements = app.add_subcommand("elements", "align characters/places across annotators");
    add_common(elements);
    elements->add_option("--kind", opt.kind, "character|place")->required();
    elements->add_option("--mode", opt.mode, "positions|forms (default positions)");
    elements->add_flag("--csv", opt.csv, "emit a flat CSV table");
    CLI::App* switches = app.add_subcommand("switches", "switch sites and agreement histogram");
    add_common(switches);
    switches->add_option("--pos", opt.pos_path, "POS sidecar (token\\tsurface\\tpos)");
    CLI::App* consensus = app.add_subcommand("consensus", "fuzzy degrees and crisp consensus runs");
    add_common(consensus);
    consensus->add_option("--threshold", opt.threshold, "crisp threshold in (0,1], default 0.5");
    CLI::App* select = app.add_subcommand("select", "annotators closest to the text-world median");
    add_common(select);
    select->add_option("--k", opt.k, "how many annotators to pick")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        return run_command(app.get_subcommands().front()->get_name(), opt);
    } catch (const std::exception& e) {
        std::cerr << e.what() << "\n";
        return kExitDataError;
    }
}
