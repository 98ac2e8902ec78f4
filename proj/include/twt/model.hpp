// Licensed under the Apache License, Version 2.0. See LICENSE in the project root.

#ifndef TWT_MODEL_HPP
#define TWT_MODEL_HPP

#include <algorithm>
#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "twt/unicode.hpp"

namespace twt {

/// The five tag kinds of the annotation scheme. Nothing else is
/// constructible; every per-kind table in the toolkit is indexed by
/// kind_index().
enum class TagKind : std::uint8_t {
    TextWorld = 0,
    Character = 1,
    Place = 2,
    Time = 3,
    Switch = 4,
};

inline constexpr std::size_t kNumTagKinds = 5;

inline constexpr std::array<TagKind, kNumTagKinds> kAllTagKinds = {
    TagKind::TextWorld, TagKind::Character, TagKind::Place, TagKind::Time, TagKind::Switch};

constexpr std::size_t kind_index(TagKind kind) { return static_cast<std::size_t>(kind); }

/// Tag letter as written in the markup: T, c, p, t, s.
constexpr char32_t tag_letter(TagKind kind) {
    switch (kind) {
        case TagKind::TextWorld: return U'T';
        case TagKind::Character: return U'c';
        case TagKind::Place: return U'p';
        case TagKind::Time: return U't';
        case TagKind::Switch: return U's';
    }
    return U'?';
}

constexpr std::optional<TagKind> tag_kind_from_letter(char32_t letter) {
    switch (letter) {
        case U'T': return TagKind::TextWorld;
        case U'c': return TagKind::Character;
        case U'p': return TagKind::Place;
        case U't': return TagKind::Time;
        case U's': return TagKind::Switch;
        default: return std::nullopt;
    }
}

/// Snake-case name used in reports and CLI flags.
constexpr std::string_view kind_name(TagKind kind) {
    switch (kind) {
        case TagKind::TextWorld: return "text_world";
        case TagKind::Character: return "character";
        case TagKind::Place: return "place";
        case TagKind::Time: return "time";
        case TagKind::Switch: return "switch";
    }
    return "?";
}

inline std::optional<TagKind> kind_from_name(std::string_view name) {
    for (TagKind kind : kAllTagKinds)
        if (kind_name(kind) == name) return kind;
    return std::nullopt;
}

/// One tagged region. Offsets are Unicode scalar positions into the
/// document's plain text, [start, end). `ordinal` is the 1-based appearance
/// index among spans of the same kind; for TextWorld spans this is the
/// stretch number.
struct Span {
    TagKind kind = TagKind::TextWorld;
    std::optional<std::uint32_t> element_id;
    std::size_t start = 0;
    std::size_t end = 0;
    std::size_t ordinal = 0;

    bool operator==(const Span&) const = default;

    bool contains(const Span& other) const {
        return start <= other.start && other.end <= end;
    }
};

/// One annotator's copy of the shared text: tag-free plain text plus
/// offset-addressed spans, sorted by (start, longer-first).
struct AnnotatedDocument {
    std::string annotator_id;
    std::u32string plain_text;
    std::vector<Span> spans;

    bool operator==(const AnnotatedDocument&) const = default;

    std::vector<Span> spans_of_kind(TagKind kind) const {
        std::vector<Span> out;
        for (const Span& s : spans)
            if (s.kind == kind) out.push_back(s);
        return out;
    }

    std::size_t count_of_kind(TagKind kind) const {
        std::size_t n = 0;
        for (const Span& s : spans) n += s.kind == kind ? 1 : 0;
        return n;
    }
};

struct Token {
    std::size_t index = 0;
    std::size_t start = 0;
    std::size_t end = 0;
    std::u32string surface;

    bool operator==(const Token&) const = default;
};

/// Tokenizer knobs. The defaults implement the language-neutral rule:
/// whitespace and punctuation separate words, and every maximal punctuation
/// run is a token of its own (switch marks include punctuation like "—").
struct TokenizerOptions {
    bool punctuation_separates = true;  // false: punctuation glues to adjacent word characters
    bool punctuation_tokens = true;     // false: punctuation runs are dropped from the output

    bool operator==(const TokenizerOptions&) const = default;
};

inline std::vector<Token> tokenize(std::u32string_view text, const TokenizerOptions& options = {}) {
    std::vector<Token> tokens;
    const std::size_t n = text.size();
    std::size_t i = 0;
    while (i < n) {
        if (is_whitespace(text[i])) {
            ++i;
            continue;
        }
        std::size_t j = i;
        if (options.punctuation_separates && is_punctuation(text[i])) {
            while (j < n && is_punctuation(text[j])) ++j;
            if (options.punctuation_tokens)
                tokens.push_back({tokens.size(), i, j, std::u32string(text.substr(i, j - i))});
        } else {
            while (j < n && !is_whitespace(text[j]) &&
                   !(options.punctuation_separates && is_punctuation(text[j])))
                ++j;
            tokens.push_back({tokens.size(), i, j, std::u32string(text.substr(i, j - i))});
        }
        i = j;
    }
    return tokens;
}

/// Indices of all tokens whose character range overlaps [span.start,
/// span.end) by at least one character. `tokens` must be a tokenization of
/// the text the span addresses.
inline std::vector<std::size_t> span_tokens(const std::vector<Token>& tokens, const Span& span) {
    std::vector<std::size_t> out;
    // Tokens are sorted by start; find the first that can overlap.
    auto it = std::lower_bound(tokens.begin(), tokens.end(), span.start,
                               [](const Token& t, std::size_t pos) { return t.end <= pos; });
    for (; it != tokens.end() && it->start < span.end; ++it) out.push_back(it->index);
    return out;
}

inline std::vector<std::size_t> span_tokens(const AnnotatedDocument& doc, const Span& span,
                                            const TokenizerOptions& options = {}) {
    if (span.start >= span.end || span.end > doc.plain_text.size())
        throw std::out_of_range("span offsets out of range for document '" + doc.annotator_id + "'");
    return span_tokens(tokenize(doc.plain_text, options), span);
}

namespace detail {

/// Canonical span order: by start, longer spans first, then kind, then id.
/// This is also the order in which open tags are emitted at equal offsets.
inline bool span_before(const Span& a, const Span& b) {
    if (a.start != b.start) return a.start < b.start;
    if (a.end != b.end) return a.end > b.end;
    if (a.kind != b.kind) return kind_index(a.kind) < kind_index(b.kind);
    return a.element_id.value_or(0) < b.element_id.value_or(0);
}

/// Sorts spans canonically and assigns per-kind 1-based ordinals.
inline void finalize_spans(std::vector<Span>& spans) {
    std::sort(spans.begin(), spans.end(), span_before);
    std::array<std::size_t, kNumTagKinds> next{};
    next.fill(1);
    for (Span& s : spans) s.ordinal = next[kind_index(s.kind)]++;
}

inline void check_spans(const std::u32string& text, const std::vector<Span>& spans) {
    std::vector<Span> open;
    for (const Span& s : spans) {
        if (s.start >= s.end || s.end > text.size())
            throw std::invalid_argument("span offsets out of range");
        while (!open.empty() && open.back().end <= s.start) open.pop_back();
        if (!open.empty() && !open.back().contains(s))
            throw std::invalid_argument("spans are not well-nested");
        open.push_back(s);
    }
}

}  // namespace detail

/// Builds a document from unordered spans: validates bounds and
/// well-nestedness, then assigns canonical order and ordinals.
inline AnnotatedDocument make_document(std::string annotator_id, std::u32string plain_text,
                                       std::vector<Span> spans) {
    detail::finalize_spans(spans);
    detail::check_spans(plain_text, spans);
    return {std::move(annotator_id), std::move(plain_text), std::move(spans)};
}

inline AnnotatedDocument make_document(std::string annotator_id, std::string_view plain_text_utf8,
                                       std::vector<Span> spans) {
    return make_document(std::move(annotator_id), utf8_decode(plain_text_utf8), std::move(spans));
}

}  // namespace twt

#endif  // TWT_MODEL_HPP
