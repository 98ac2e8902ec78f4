// Licensed under the Apache License, Version 2.0. See LICENSE in the project root.
//
// Acceptance suite: eight end-product checks, one pass/fail line each.
// Exits nonzero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "support/fixtures.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"
#include "support/process.hpp"
#include "twt/consensus.hpp"
#include "twt/counts.hpp"
#include "twt/edit_distance.hpp"
#include "twt/elements.hpp"
#include "twt/matching.hpp"
#include "twt/parser.hpp"

namespace {

struct Checker {
    std::vector<std::string> failures;

    void require(bool condition, const std::string& what) {
        if (!condition) failures.push_back(what);
    }
};

struct Criterion {
    int number;
    std::string name;
    double time_limit_s;
    std::function<void(Checker&)> body;
};

void criterion_count_medians(Checker& check) {
    const auto docs = fixtures::count_table_corpus();
    const auto summary = twt::count_summary(docs);
    const std::array<twt::MedianPair, 5> expected = {
        twt::MedianPair{14, 20}, {18, 22}, {37, 43}, {37, 41}, {56, 61}};
    const std::array<twt::TagKind, 5> order = {twt::TagKind::TextWorld, twt::TagKind::Switch,
                                               twt::TagKind::Character, twt::TagKind::Place,
                                               twt::TagKind::Time};
    for (std::size_t i = 0; i < order.size(); ++i) {
        const auto got = summary.medians[twt::kind_index(order[i])];
        check.require(got == expected[i],
                      "median column " + std::to_string(i) + ": got (" +
                          std::to_string(got.lower) + "," + std::to_string(got.upper) + ")");
    }
}

void criterion_similarity_grid(Checker& check) {
    const auto& rows = fixtures::similarity_table();
    check.require(rows.size() == 16, "expected 16 element rows");
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const std::vector<double> values(rows[i].pairwise.begin(), rows[i].pairwise.end());
        const double mean = twt::mean_pairwise(values);
        // Tolerance at the printed precision: +-0.005 for two-decimal
        // means, +-0.05 for one-decimal means.
        const double tolerance = 0.5 * std::pow(10.0, -rows[i].printed_decimals) + 1e-9;
        check.require(std::abs(mean - rows[i].printed_mean) <= tolerance,
                      "element " + std::to_string(i + 1) + ": mean " + std::to_string(mean) +
                          " vs printed " + std::to_string(rows[i].printed_mean));
    }
    // Spot values.
    const std::vector<double> row3(rows[2].pairwise.begin(), rows[2].pairwise.end());
    check.require(std::abs(twt::mean_pairwise(row3) - 0.912) < 1e-9, "element 3 mean != 0.912");
    const std::vector<double> row16(rows[15].pairwise.begin(), rows[15].pairwise.end());
    check.require(std::abs(twt::mean_pairwise(row16) - 0.707) < 1e-9, "element 16 mean != 0.707");
}

void criterion_edit_distance_oracle(Checker& check) {
    std::mt19937 rng(987654);
    for (int round = 0; round < 1000; ++round) {
        const auto a = gen::random_string(rng, 12, 4);
        const auto b = gen::random_string(rng, 12, 4);
        const std::size_t expected = oracle::edit_distance(a, b);
        const std::size_t got = twt::edit_distance(a, b);
        if (got != expected) {
            check.require(false, "pair " + std::to_string(round) + ": dp " + std::to_string(got) +
                                     " oracle " + std::to_string(expected));
            return;
        }
    }
    check.require(twt::edit_distance(U"ab", U"ba") == 2, "(ab, ba) must cost 2 edits");
}

void criterion_metric_axioms(Checker& check) {
    std::mt19937 rng(192837);
    std::uniform_int_distribution<std::size_t> cap_pick(0, 32);
    for (int round = 0; round < 500; ++round) {
        const auto a = gen::random_string(rng, 30, 5);
        const auto b = gen::random_string(rng, 30, 5);
        const auto c = gen::random_string(rng, 30, 5);
        const std::size_t ab = twt::edit_distance(a, b);
        const std::size_t ac = twt::edit_distance(a, c);
        const std::size_t bc = twt::edit_distance(b, c);
        if (twt::edit_distance(a, a) != 0) {
            check.require(false, "identity failed");
            return;
        }
        if (ab != twt::edit_distance(b, a)) {
            check.require(false, "symmetry failed");
            return;
        }
        if (ac > ab + bc) {
            check.require(false, "triangle inequality failed");
            return;
        }
        const std::size_t cap = cap_pick(rng);
        const auto capped = twt::edit_distance_capped(a, b, cap);
        if (ab <= cap) {
            if (!capped || *capped != ab) {
                check.require(false, "capped mode returned a wrong value under the cap");
                return;
            }
        } else if (capped) {
            check.require(false, "capped mode returned a number above the cap");
            return;
        }
    }
}

void criterion_matching_sanity(Checker& check) {
    std::mt19937 rng(13579);
    const std::u32string text = gen::random_text(rng, 300);
    std::vector<twt::Span> spans;
    const std::size_t stretch = text.size() / 20;
    for (std::size_t i = 0; i < 20; ++i) {
        spans.push_back({twt::TagKind::TextWorld, static_cast<std::uint32_t>(i + 1), i * stretch,
                         std::min(text.size(), (i + 1) * stretch), 0});
    }
    const auto doc = twt::make_document("a", text, std::move(spans));
    const auto matches = twt::match_worlds(doc, doc);
    check.require(matches.size() == 20, "expected 20 matches");
    for (const auto& m : matches) {
        if (m.distance != 0 || m.source_ordinal != m.target_ordinal || m.ordinal_divergence != 0) {
            check.require(false, "self-match is not the identity at stretch " +
                                     std::to_string(m.source_ordinal));
            break;
        }
    }
    // Worked example: source stretch 5 matched to target 32 diverges by 27.
    const auto series = twt::ordinal_divergence_series({{5, 32, 327, 27}});
    check.require(series.size() == 1 && series[0].second == 27,
                  "divergence of (5 -> 32) must be 27");
}

void criterion_parser_round_trip(Checker& check) {
    std::mt19937 rng(246810);
    for (int round = 0; round < 200; ++round) {
        const auto doc = gen::random_document(rng, "anno", 25);
        const std::u32string raw = twt::serialize(doc);
        const auto reparsed = twt::parse_annotation(raw, "anno");
        if (!reparsed.ok()) {
            check.require(false, "round " + std::to_string(round) + ": canonical doc failed to parse");
            return;
        }
        if (!(*reparsed.document == doc)) {
            check.require(false, "round " + std::to_string(round) + ": parse(serialize) != id");
            return;
        }
        if (twt::serialize(*reparsed.document) != raw) {
            check.require(false, "round " + std::to_string(round) + ": serialize(parse) != id");
            return;
        }
    }

    auto has_error_at = [](const twt::ParseResult& result, twt::DiagnosticCode code,
                           std::size_t offset) {
        for (const auto& d : result.diagnostics)
            if (d.code == code && d.offset == offset && d.severity == twt::Severity::Error)
                return true;
        return false;
    };
    const auto crossing = twt::parse_annotation_utf8("<c1>a<p1>b</c1>c</p1>", "a");
    check.require(!crossing.ok() &&
                      has_error_at(crossing, twt::DiagnosticCode::CrossingTags, 10),
                  "CrossingTags at offset 10");
    const auto unexpected = twt::parse_annotation_utf8("a</c1>b", "a");
    check.require(!unexpected.ok() &&
                      has_error_at(unexpected, twt::DiagnosticCode::UnexpectedClose, 1),
                  "UnexpectedClose at offset 1");
    const auto unclosed = twt::parse_annotation_utf8("<T1>abc", "a");
    check.require(!unclosed.ok() && has_error_at(unclosed, twt::DiagnosticCode::UnclosedTag, 0),
                  "UnclosedTag at offset 0");
}

void criterion_consensus_properties(Checker& check) {
    // Six annotators over one text: unanimity and a 3-of-6 split.
    const std::u32string text = U"quail saw mars valley again";
    const auto tokens = twt::tokenize(text);
    std::vector<twt::AnnotatedDocument> docs;
    for (int i = 0; i < 6; ++i) {
        std::vector<twt::Span> spans;
        spans.push_back({twt::TagKind::Character, 1, tokens[0].start, tokens[0].end, 0});
        if (i < 3) spans.push_back({twt::TagKind::Place, 1, tokens[3].start, tokens[3].end, 0});
        docs.push_back(twt::make_document("a" + std::to_string(i), text, std::move(spans)));
    }
    const auto fuzzy = twt::fuzzy_membership(docs);
    check.require(fuzzy.degree(twt::TagKind::Character, 0) == 1.0, "unanimity must score 1.0");
    check.require(fuzzy.degree(twt::TagKind::Place, 3) == 0.5, "3 of 6 must score 0.5");
    for (twt::TagKind kind : twt::kAllTagKinds) {
        const auto& counts = fuzzy.counts[twt::kind_index(kind)];
        for (std::size_t t = 0; t < counts.size(); ++t) {
            const double degree = fuzzy.degree(kind, t);
            const double reconstructed =
                static_cast<double>(counts[t]) / static_cast<double>(fuzzy.num_annotators);
            if (degree != reconstructed || counts[t] > fuzzy.num_annotators) {
                check.require(false, "degree is not k/n");
                return;
            }
        }
    }

    // Monotone thresholds over a random fuzzy annotation.
    std::mt19937 rng(11223);
    twt::FuzzyAnnotation random_fuzzy;
    random_fuzzy.num_annotators = 6;
    random_fuzzy.num_tokens = 64;
    std::uniform_int_distribution<std::uint32_t> count_pick(0, 6);
    for (auto& column : random_fuzzy.counts) {
        column.resize(random_fuzzy.num_tokens);
        for (auto& c : column) c = count_pick(rng);
    }
    auto covered = [&](const twt::CrispRuns& runs, twt::TagKind kind) {
        std::vector<bool> cov(random_fuzzy.num_tokens, false);
        for (const auto& run : runs[twt::kind_index(kind)])
            for (std::size_t t = run.first; t <= run.last; ++t) cov[t] = true;
        return cov;
    };
    for (int step = 1; step < 10; ++step) {
        const auto lo = twt::crisp_consensus(random_fuzzy, step / 10.0);
        const auto hi = twt::crisp_consensus(random_fuzzy, (step + 1) / 10.0);
        for (twt::TagKind kind : twt::kAllTagKinds) {
            const auto cov_lo = covered(lo, kind);
            const auto cov_hi = covered(hi, kind);
            for (std::size_t t = 0; t < random_fuzzy.num_tokens; ++t) {
                if (cov_hi[t] && !cov_lo[t]) {
                    check.require(false, "raising the threshold enlarged a run");
                    return;
                }
            }
        }
    }
}

void criterion_end_to_end(Checker& check) {
    const auto dir = proc::make_scratch_dir("acceptance");
    const auto corpus = fixtures::synthetic_corpus(500);
    const auto manifest = fixtures::write_corpus(dir, corpus);

    const std::string cli = TWT_CLI_PATH;
    const std::vector<std::string> commands = {
        "validate " + manifest.string(),
        "stats " + manifest.string(),
        "match --pair anno1,anno3 " + manifest.string(),
        "elements --kind character " + manifest.string(),
        "switches " + manifest.string(),
        "consensus " + manifest.string(),
    };
    for (const auto& command : commands) {
        const auto serial_1 = proc::run(cli + " " + command + " --threads 1", dir);
        const auto serial_2 = proc::run(cli + " " + command + " --threads 1", dir);
        const auto parallel_1 = proc::run(cli + " " + command + " --threads 4", dir);
        const auto parallel_2 = proc::run(cli + " " + command + " --threads 4", dir);
        if (serial_1.exit_code != 0) {
            check.require(false, "command '" + command + "' exited " +
                                     std::to_string(serial_1.exit_code) + ": " + serial_1.err);
            return;
        }
        if (serial_1.out.empty()) {
            check.require(false, "command '" + command + "' produced no report");
            return;
        }
        if (serial_1.out != serial_2.out) {
            check.require(false, "command '" + command + "' is not deterministic across runs");
            return;
        }
        if (serial_1.out != parallel_1.out || parallel_1.out != parallel_2.out) {
            check.require(false, "command '" + command + "' differs between serial and parallel");
            return;
        }
    }
}

}  // namespace

int main() {
    const std::vector<Criterion> criteria = {
        {1, "count-table medians reproduce the reference row", 1.0, criterion_count_medians},
        {2, "similarity-grid means match printed values", 1.0, criterion_similarity_grid},
        {3, "edit distance equals the script-search oracle (1000 pairs)", 60.0,
         criterion_edit_distance_oracle},
        {4, "edit distance satisfies the metric axioms (500 triples)", 30.0,
         criterion_metric_axioms},
        {5, "world matching: identity self-match and worked divergence", 5.0,
         criterion_matching_sanity},
        {6, "parser round-trips 200 canonical documents and flags all error classes", 10.0,
         criterion_parser_round_trip},
        {7, "consensus degrees are k/n and thresholds are monotone", 5.0,
         criterion_consensus_properties},
        {8, "end-to-end CLI over the synthetic corpus is deterministic", 10.0,
         criterion_end_to_end},
    };

    int failed = 0;
    for (const auto& criterion : criteria) {
        Checker check;
        const auto start = std::chrono::steady_clock::now();
        criterion.body(check);
        const double elapsed =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (elapsed > criterion.time_limit_s)
            check.failures.push_back("exceeded time limit (" + std::to_string(elapsed) + "s > " +
                                     std::to_string(criterion.time_limit_s) + "s)");
        if (check.failures.empty()) {
            std::printf("PASS  criterion %d: %s (%.2fs)\n", criterion.number,
                        criterion.name.c_str(), elapsed);
        } else {
            ++failed;
            std::printf("FAIL  criterion %d: %s (%.2fs): %s\n", criterion.number,
                        criterion.name.c_str(), elapsed, check.failures.front().c_str());
        }
    }
    return failed == 0 ? 0 : 1;
}
