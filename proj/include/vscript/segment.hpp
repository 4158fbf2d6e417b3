#pragma once

#include "vscript/domain.hpp"
#include "vscript/error.hpp"
#include "vscript/text.hpp"

#include <algorithm>
#include <array>
#include <string>
#include <string_view>
#include <vector>

namespace vscript {

namespace detail {

inline constexpr std::array<std::string_view, 7> kAbbreviations{"mr.", "dr.", "mrs.", "st.",
                                                                "vs.", "e.g.", "i.e."};

inline constexpr std::size_t kMinSentenceLength = 3;

inline bool is_terminator(char c) { return c == '.' || c == '!' || c == '?'; }

// Closing marks that may trail a terminator: ASCII quote/paren and the UTF-8
// right double/single quotation marks.
inline std::size_t closing_mark_length(std::string_view s, std::size_t i) {
    if (s[i] == '"' || s[i] == '\'' || s[i] == ')') return 1;
    if (s.substr(i, 3) == "\xE2\x80\x9D" || s.substr(i, 3) == "\xE2\x80\x99") return 3;
    return 0;
}

inline bool ends_with_abbreviation(std::string_view normalized, std::size_t word_begin,
                                   std::size_t terminator_end) {
    auto word = text::to_lower(normalized.substr(word_begin, terminator_end - word_begin));
    return std::find(kAbbreviations.begin(), kAbbreviations.end(), word) != kAbbreviations.end();
}

/// Raw split points over whitespace-normalized text. Each piece is a substring
/// delimited by single spaces, so joining with " " restores the input.
inline std::vector<std::string> split_sentences(const std::string& s) {
    std::vector<std::string> pieces;
    std::size_t begin = 0;
    std::size_t word_begin = 0;
    bool in_ascii_quote = false;
    int curly_depth = 0;

    std::size_t i = 0;
    while (i < s.size()) {
        char c = s[i];
        if (c == ' ') {
            word_begin = i + 1;
            ++i;
            continue;
        }
        if (c == '"') {
            in_ascii_quote = !in_ascii_quote;
            ++i;
            continue;
        }
        if (s.compare(i, 3, "\xE2\x80\x9C") == 0) {
            ++curly_depth;
            i += 3;
            continue;
        }
        if (s.compare(i, 3, "\xE2\x80\x9D") == 0) {
            curly_depth = std::max(0, curly_depth - 1);
            i += 3;
            continue;
        }
        if (!is_terminator(c)) {
            ++i;
            continue;
        }

        std::size_t term_end = i + 1;
        while (term_end < s.size() && is_terminator(s[term_end])) ++term_end;
        std::size_t after = term_end;
        while (after < s.size()) {
            auto n = closing_mark_length(s, after);
            if (n == 0) break;
            if (s[after] == '"') in_ascii_quote = !in_ascii_quote;
            if (n == 3 && s.compare(after, 3, "\xE2\x80\x9D") == 0)
                curly_depth = std::max(0, curly_depth - 1);
            after += n;
        }
        bool boundary = (after == s.size() || s[after] == ' ') && !in_ascii_quote &&
                        curly_depth == 0 &&
                        !(term_end == i + 1 && s[i] == '.' &&
                          ends_with_abbreviation(s, word_begin, term_end));
        if (boundary) {
            pieces.push_back(s.substr(begin, after - begin));
            begin = after + 1;
            word_begin = begin;
        }
        i = after;
    }
    if (begin < s.size()) pieces.push_back(s.substr(begin));
    return pieces;
}

/// Merges fragments shorter than the minimum into the previous sentence, or
/// into the following one when there is no previous sentence.
inline std::vector<std::string> merge_short_fragments(std::vector<std::string> pieces) {
    std::vector<std::string> out;
    std::string carry;
    for (auto& p : pieces) {
        if (!carry.empty()) {
            p = carry + " " + p;
            carry.clear();
        }
        if (utf8_length(p) < kMinSentenceLength) {
            if (!out.empty()) {
                out.back() += " " + p;
            } else {
                carry = std::move(p);
            }
            continue;
        }
        out.push_back(std::move(p));
    }
    if (!carry.empty()) out.push_back(std::move(carry));
    return out;
}

} // namespace detail

/// Splits a plot into sentences on `.`, `!`, `?` followed by whitespace or the
/// end of text. A fixed abbreviation list is exempt, quoted spans are never
/// split, and fragments under three characters merge into a neighbour.
inline std::vector<PlotSentence> segment_plot(std::string_view raw) {
    auto normalized = text::normalize_whitespace(raw);
    if (normalized.empty()) throw Error(ErrorCode::NoSentences, "plot text is blank");

    auto pieces = detail::merge_short_fragments(detail::split_sentences(normalized));
    std::vector<PlotSentence> out;
    out.reserve(pieces.size());
    for (auto& p : pieces) out.push_back(PlotSentence{out.size(), std::move(p)});
    return out;
}

inline constexpr std::size_t kCaptionChunkTokens = 25;
inline constexpr std::array<std::string_view, 5> kDiscourseCues{"and", "but", "so", "then",
                                                                "because"};

/// Sentence-splits a caption. Auto-generated captions often carry no
/// punctuation at all; those are chunked greedily at <= 25 tokens, cutting
/// before the last discourse cue inside the chunk when there is one.
inline std::vector<std::string> segment_caption(std::string_view raw) {
    auto normalized = text::normalize_whitespace(raw);
    if (normalized.empty()) return {};

    bool punctuated = std::any_of(normalized.begin(), normalized.end(), detail::is_terminator);
    if (punctuated) {
        std::vector<std::string> out;
        for (auto& s : segment_plot(normalized)) out.push_back(std::move(s.text));
        return out;
    }

    auto tokens = text::split_whitespace(normalized);
    std::vector<std::string> out;
    std::size_t pos = 0;
    while (tokens.size() - pos > kCaptionChunkTokens) {
        std::size_t cut = kCaptionChunkTokens;
        for (std::size_t k = kCaptionChunkTokens - 1; k > 0; --k) {
            auto tok = text::to_lower(tokens[pos + k]);
            if (std::find(kDiscourseCues.begin(), kDiscourseCues.end(), tok) != kDiscourseCues.end()) {
                cut = k;
                break;
            }
        }
        std::vector<std::string> chunk(tokens.begin() + static_cast<std::ptrdiff_t>(pos),
                                       tokens.begin() + static_cast<std::ptrdiff_t>(pos + cut));
        out.push_back(text::join(chunk, " "));
        pos += cut;
    }
    std::vector<std::string> rest(tokens.begin() + static_cast<std::ptrdiff_t>(pos), tokens.end());
    out.push_back(text::join(rest, " "));
    return out;
}

} // namespace vscript
