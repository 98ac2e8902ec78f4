// Licensed under the Apache License, Version 2.0. See LICENSE in the project root.
//
// Inline tag markup <-> AnnotatedDocument. The markup is a fixed tag
// grammar, not XML: open/close tags `<X>` / `</X>` where X is
//   T<digits>  text world        c<digits>  character
//   p<digits>  place             t[digits]  time
//   s[digits]  switch
// (case-sensitive; ids required for T/c/p, optional for t/s).
// Anything else between `<` and `>` is literal text.

#ifndef TWT_PARSER_HPP
#define TWT_PARSER_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "twt/model.hpp"
#include "twt/unicode.hpp"

namespace twt {

enum class Severity : std::uint8_t { Error, Warning };

enum class DiagnosticCode : std::uint8_t {
    UnclosedTag,
    UnexpectedClose,
    CrossingTags,
    BadTagName,
    DuplicateOpen,
};

constexpr std::string_view to_string(Severity s) {
    return s == Severity::Error ? "error" : "warning";
}

constexpr std::string_view to_string(DiagnosticCode code) {
    switch (code) {
        case DiagnosticCode::UnclosedTag: return "UnclosedTag";
        case DiagnosticCode::UnexpectedClose: return "UnexpectedClose";
        case DiagnosticCode::CrossingTags: return "CrossingTags";
        case DiagnosticCode::BadTagName: return "BadTagName";
        case DiagnosticCode::DuplicateOpen: return "DuplicateOpen";
    }
    return "?";
}

/// One parse finding. `offset` is a Unicode scalar position into the raw
/// input (after BOM removal); `excerpt` is up to 40 characters of raw
/// context starting at that offset, re-encoded as UTF-8.
struct ParseDiagnostic {
    Severity severity = Severity::Error;
    std::size_t offset = 0;
    DiagnosticCode code = DiagnosticCode::BadTagName;
    std::string excerpt;

    bool operator==(const ParseDiagnostic&) const = default;
};

/// Outcome of parse_annotation. `document` is present iff no
/// error-severity diagnostic was produced; warnings may accompany a
/// successful parse.
struct ParseResult {
    std::optional<AnnotatedDocument> document;
    std::vector<ParseDiagnostic> diagnostics;

    bool ok() const { return document.has_value(); }

    std::size_t error_count() const {
        std::size_t n = 0;
        for (const auto& d : diagnostics) n += d.severity == Severity::Error ? 1 : 0;
        return n;
    }
};

namespace detail {

inline std::string excerpt_at(std::u32string_view raw, std::size_t offset) {
    constexpr std::size_t kExcerptLen = 40;
    const auto len = std::min(kExcerptLen, raw.size() - std::min(offset, raw.size()));
    return utf8_encode(raw.substr(offset, len));
}

struct TagToken {
    bool closing = false;
    TagKind kind = TagKind::TextWorld;
    std::optional<std::uint32_t> id;
    std::size_t length = 0;  // codepoints consumed, including both angle brackets
};

enum class TagScan { NotTagLike, BadName, Valid };

/// Tries to read a tag at raw[pos] (raw[pos] == '<'). A "tag-like"
/// sequence is `<` `/`? ASCII-alnum+ `>`; anything else is plain prose and
/// scans as NotTagLike. Tag-like sequences that fail the grammar (wrong
/// letter, missing or zero id, trailing junk) scan as BadName.
inline TagScan scan_tag(std::u32string_view raw, std::size_t pos, TagToken& out) {
    std::size_t i = pos + 1;
    const std::size_t n = raw.size();
    bool closing = false;
    if (i < n && raw[i] == U'/') {
        closing = true;
        ++i;
    }
    const std::size_t name_begin = i;
    auto is_ascii_alnum = [](char32_t c) {
        return (c >= U'0' && c <= U'9') || (c >= U'A' && c <= U'Z') || (c >= U'a' && c <= U'z');
    };
    while (i < n && is_ascii_alnum(raw[i])) ++i;
    if (i == name_begin || i >= n || raw[i] != U'>') return TagScan::NotTagLike;

    const std::u32string_view name = raw.substr(name_begin, i - name_begin);
    out.closing = closing;
    out.length = i + 1 - pos;

    const auto kind = tag_kind_from_letter(name[0]);
    if (!kind) return TagScan::BadName;
    out.kind = *kind;

    const std::u32string_view digits = name.substr(1);
    if (digits.empty()) {
        const bool id_optional = *kind == TagKind::Time || *kind == TagKind::Switch;
        if (!id_optional) return TagScan::BadName;
        out.id = std::nullopt;
        return TagScan::Valid;
    }
    std::uint64_t value = 0;
    for (char32_t c : digits) {
        if (c < U'0' || c > U'9') return TagScan::BadName;
        value = value * 10 + (c - U'0');
        if (value > 0xFFFFFFFFull) return TagScan::BadName;
    }
    if (value == 0) return TagScan::BadName;  // ids are positive
    out.id = static_cast<std::uint32_t>(value);
    return TagScan::Valid;
}

}  // namespace detail

/// Parses one annotator's raw markup. Offsets in the result address the
/// tag-stripped plain text; diagnostic offsets address the raw input.
/// Zero-length tagged regions (`<c1></c1>`) are rejected; the close tag is
/// reported as UnexpectedClose. Unclosed tags are reported at the offset
/// of the open tag.
inline ParseResult parse_annotation(std::u32string_view raw, std::string annotator_id) {
    if (!raw.empty() && raw.front() == 0xFEFF) raw.remove_prefix(1);

    struct OpenTag {
        TagKind kind;
        std::optional<std::uint32_t> id;
        std::size_t raw_offset;
        std::size_t plain_start;
    };

    ParseResult result;
    std::u32string plain;
    plain.reserve(raw.size());
    std::vector<Span> spans;
    std::vector<OpenTag> stack;

    auto diag = [&](Severity sev, DiagnosticCode code, std::size_t offset) {
        result.diagnostics.push_back({sev, offset, code, detail::excerpt_at(raw, offset)});
    };

    std::size_t i = 0;
    while (i < raw.size()) {
        if (raw[i] != U'<') {
            plain.push_back(raw[i]);
            ++i;
            continue;
        }
        detail::TagToken tag;
        switch (detail::scan_tag(raw, i, tag)) {
            case detail::TagScan::NotTagLike:
                plain.push_back(raw[i]);
                ++i;
                continue;
            case detail::TagScan::BadName:
                diag(Severity::Warning, DiagnosticCode::BadTagName, i);
                plain.push_back(raw[i]);
                ++i;
                continue;
            case detail::TagScan::Valid:
                break;
        }
        if (!tag.closing) {
            for (const OpenTag& open : stack) {
                if (open.kind == tag.kind && open.id == tag.id) {
                    diag(Severity::Error, DiagnosticCode::DuplicateOpen, i);
                    break;
                }
            }
            stack.push_back({tag.kind, tag.id, i, plain.size()});
        } else {
            auto match = stack.end();
            for (auto it = stack.end(); it != stack.begin();) {
                --it;
                if (it->kind == tag.kind && it->id == tag.id) {
                    match = it;
                    break;
                }
            }
            if (match == stack.end()) {
                diag(Severity::Error, DiagnosticCode::UnexpectedClose, i);
            } else if (match + 1 != stack.end()) {
                // The matching open is buried: the regions cross.
                diag(Severity::Error, DiagnosticCode::CrossingTags, i);
                stack.erase(match, stack.end());
            } else {
                if (match->plain_start == plain.size()) {
                    diag(Severity::Error, DiagnosticCode::UnexpectedClose, i);
                } else {
                    spans.push_back({match->kind, match->id, match->plain_start, plain.size(), 0});
                }
                stack.pop_back();
            }
        }
        i += tag.length;
    }
    for (const OpenTag& open : stack)
        diag(Severity::Error, DiagnosticCode::UnclosedTag, open.raw_offset);

    if (result.error_count() == 0)
        result.document = make_document(std::move(annotator_id), std::move(plain), std::move(spans));
    return result;
}

/// UTF-8 entry point; strips a leading byte-order mark before offset 0.
inline ParseResult parse_annotation_utf8(std::string_view raw, std::string annotator_id) {
    return parse_annotation(utf8_decode(raw), std::move(annotator_id));
}

namespace detail {

inline void append_tag(std::u32string& out, const Span& span, bool closing) {
    out.push_back(U'<');
    if (closing) out.push_back(U'/');
    out.push_back(tag_letter(span.kind));
    if (span.element_id) {
        const std::string digits = std::to_string(*span.element_id);
        for (char c : digits) out.push_back(static_cast<char32_t>(c));
    } else if (span.kind != TagKind::Time && span.kind != TagKind::Switch) {
        throw std::invalid_argument("text-world, character and place spans require an element id");
    }
    out.push_back(U'>');
}

}  // namespace detail

/// Re-inserts tags into plain text. At equal offsets longer spans open
/// first and close last; ties are broken by kind (T, c, p, t, s), then id.
/// The output of serialize re-parses to an equal document.
inline std::u32string serialize(const AnnotatedDocument& doc) {
    std::vector<Span> opens = doc.spans;
    std::sort(opens.begin(), opens.end(), detail::span_before);
    std::vector<Span> closes = opens;
    std::sort(closes.begin(), closes.end(), [](const Span& a, const Span& b) {
        if (a.end != b.end) return a.end < b.end;
        if (a.start != b.start) return a.start > b.start;
        if (a.kind != b.kind) return kind_index(a.kind) > kind_index(b.kind);
        return a.element_id.value_or(0) > b.element_id.value_or(0);
    });

    std::u32string out;
    out.reserve(doc.plain_text.size() + doc.spans.size() * 10);
    std::size_t oi = 0;
    std::size_t ci = 0;
    for (std::size_t pos = 0; pos <= doc.plain_text.size(); ++pos) {
        while (ci < closes.size() && closes[ci].end == pos) detail::append_tag(out, closes[ci++], true);
        while (oi < opens.size() && opens[oi].start == pos) detail::append_tag(out, opens[oi++], false);
        if (pos < doc.plain_text.size()) out.push_back(doc.plain_text[pos]);
    }
    return out;
}

inline std::string serialize_utf8(const AnnotatedDocument& doc) { return utf8_encode(serialize(doc)); }

/// Result of cross-annotator plain-text comparison. `aligned` is true iff
/// all plain texts are identical after CRLF/CR -> LF normalization; the
/// reported lengths are of the normalized texts.
struct AlignmentReport {
    struct Divergence {
        std::string annotator_a;
        std::string annotator_b;
        std::size_t offset = 0;

        bool operator==(const Divergence&) const = default;
    };

    bool aligned = false;
    std::optional<Divergence> first_divergence;
    std::vector<std::pair<std::string, std::size_t>> plain_text_lengths;

    bool operator==(const AlignmentReport&) const = default;
};

namespace detail {

inline std::u32string normalize_newlines(std::u32string_view text) {
    std::u32string out;
    out.reserve(text.size());
    for (std::size_t i = 0; i < text.size(); ++i) {
        if (text[i] == U'\r') {
            out.push_back(U'\n');
            if (i + 1 < text.size() && text[i + 1] == U'\n') ++i;
        } else {
            out.push_back(text[i]);
        }
    }
    return out;
}

}  // namespace detail

/// Checks that all documents annotate one and the same text. On
/// divergence, reports the lexicographically first annotator-id pair that
/// differs and the first differing character offset (in the normalized
/// texts).
inline AlignmentReport validate_alignment(const std::vector<AnnotatedDocument>& docs) {
    if (docs.size() < 2)
        throw std::invalid_argument("validate_alignment requires at least 2 documents");

    std::vector<std::u32string> normalized;
    normalized.reserve(docs.size());
    AlignmentReport report;
    for (const auto& doc : docs) {
        normalized.push_back(detail::normalize_newlines(doc.plain_text));
        report.plain_text_lengths.emplace_back(doc.annotator_id, normalized.back().size());
    }

    std::vector<std::size_t> order(docs.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return docs[a].annotator_id < docs[b].annotator_id;
    });

    report.aligned = true;
    for (std::size_t a = 0; a < order.size() && report.aligned; ++a) {
        for (std::size_t b = a + 1; b < order.size(); ++b) {
            const std::u32string& ta = normalized[order[a]];
            const std::u32string& tb = normalized[order[b]];
            if (ta == tb) continue;
            std::size_t off = 0;
            const std::size_t limit = std::min(ta.size(), tb.size());
            while (off < limit && ta[off] == tb[off]) ++off;
            report.aligned = false;
            report.first_divergence = {docs[order[a]].annotator_id, docs[order[b]].annotator_id, off};
            break;
        }
    }
    return report;
}

}  // namespace twt

#endif  // TWT_PARSER_HPP
