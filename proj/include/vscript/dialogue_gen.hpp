#pragma once

// Plot-guided dialogue generation, framed as summarization run backwards: the
// plot sentence plays the summary and the model writes the whole dialogue in
// one pass. The training corpus is inverted with the same delimiters.

#include "vscript/backend.hpp"
#include "vscript/domain.hpp"
#include "vscript/json_io.hpp"

#include <algorithm>
#include <istream>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace vscript {

inline constexpr std::string_view kSummaryTag = "Summary: ";
inline constexpr std::string_view kDialogueTag = "Dialogue:\n";
inline constexpr std::string_view kEndOfDialogue = "<|endofdialogue|>";
inline constexpr std::string_view kDialogueStopMarker = "\n\n";
inline constexpr std::string_view kNarrator = "NARRATOR";

struct SummarizationRecord {
    std::string summary;
    std::string dialogue_text;

    bool operator==(const SummarizationRecord&) const = default;
};

struct Dialogue {
    std::vector<DialogueTurn> turns;
    PlotSentence source_sentence;
    std::string raw_text;
    bool monologue = false;
    bool fallback = false;

    bool operator==(const Dialogue&) const = default;
};

inline std::string build_dialogue_prompt(const PlotSentence& sentence) {
    return std::string(kSummaryTag) + sentence.text + "\n" + std::string(kDialogueTag);
}

namespace detail {

// A speaker name: one to three capitalized tokens, at most 30 characters.
inline bool is_speaker_name(std::string_view name) {
    if (name.empty() || utf8_length(name) > kMaxSpeakerLength) return false;
    auto tokens = text::split_whitespace(name);
    if (tokens.empty() || tokens.size() > 3) return false;
    if (text::join(tokens, " ") != name) return false;
    for (const auto& tok : tokens) {
        if (!text::is_upper(tok.front())) return false;
        for (char c : tok.substr(1)) {
            bool ok = text::is_alnum(c) || c == '.' || c == '\'' || c == '-' ||
                      (static_cast<unsigned char>(c) & 0x80) != 0;
            if (!ok) return false;
        }
    }
    return true;
}

struct TurnLine {
    std::string speaker;
    std::string utterance;
};

inline std::optional<TurnLine> match_turn_line(std::string_view line) {
    auto colon = line.find(':');
    if (colon == std::string_view::npos) return std::nullopt;
    auto name = line.substr(0, colon);
    if (!is_speaker_name(name)) return std::nullopt;
    auto rest = line.substr(colon + 1);
    if (!rest.empty() && rest.front() != ' ' && rest.front() != '\t') return std::nullopt;
    return TurnLine{std::string(name), text::trim(rest)};
}

} // namespace detail

/// Parses "Name: utterance" lines. Lines that do not start a turn continue the
/// previous utterance; anything before the first turn is dropped, as are turns
/// left with an empty utterance.
inline std::vector<DialogueTurn> parse_dialogue(std::string_view raw) {
    std::vector<DialogueTurn> turns;
    for (const auto& line : text::split_lines(raw)) {
        if (auto m = detail::match_turn_line(line)) {
            turns.push_back(DialogueTurn{std::move(m->speaker), std::move(m->utterance)});
            continue;
        }
        auto extra = text::trim(line);
        if (extra.empty() || turns.empty()) continue;
        auto& u = turns.back().utterance;
        u += u.empty() ? extra : " " + extra;
    }
    std::erase_if(turns, [](const DialogueTurn& t) { return t.utterance.empty(); });
    if (turns.empty()) throw Error(ErrorCode::DialogueParseError, std::string(raw));
    return turns;
}

inline std::size_t distinct_speakers(const std::vector<DialogueTurn>& turns) {
    std::set<std::string> names;
    for (const auto& t : turns) names.insert(text::to_upper(t.speaker));
    return names.size();
}

/// One-shot dialogue for a plot sentence. An unparseable reply is retried once
/// with seed + 1; a second failure yields a single flagged NARRATOR turn.
inline Dialogue generate_dialogue(TextGenerator& generator, const PlotSentence& sentence, Seed seed,
                                  const DecodeParams& params = {}) {
    auto prompt = build_dialogue_prompt(sentence);
    Dialogue d;
    d.source_sentence = sentence;
    for (Seed attempt = 0; attempt < 2; ++attempt) {
        auto reply = generator.generate_text(
            make_request(prompt, params, seed + attempt, 1, std::string(kDialogueStopMarker)));
        d.raw_text = reply.front();
        try {
            d.turns = parse_dialogue(d.raw_text);
            d.monologue = distinct_speakers(d.turns) < 2;
            return d;
        } catch (const Error& e) {
            if (e.code() != ErrorCode::DialogueParseError) throw;
        }
    }
    d.turns = {DialogueTurn{std::string(kNarrator), sentence.text}};
    d.monologue = true;
    d.fallback = true;
    return d;
}

inline std::string format_training_example(const SummarizationRecord& r) {
    return std::string(kSummaryTag) + r.summary + "\n" + std::string(kDialogueTag) + r.dialogue_text + "\n" +
           std::string(kEndOfDialogue);
}

/// Produces the inverted training strings (summary first, dialogue second).
inline std::vector<std::string> invert_summarization_corpus(const std::vector<SummarizationRecord>& records) {
    std::vector<std::string> out;
    out.reserve(records.size());
    for (std::size_t i = 0; i < records.size(); ++i) {
        const auto& r = records[i];
        if (text::trim_view(r.summary).empty())
            throw Error(ErrorCode::MalformedRecord, "empty summary", i);
        if (r.summary.find('\n') != std::string::npos)
            throw Error(ErrorCode::MalformedRecord, "summary spans several lines", i);
        try {
            parse_dialogue(r.dialogue_text);
        } catch (const Error&) {
            throw Error(ErrorCode::MalformedRecord, "dialogue has no turn lines", i);
        }
        out.push_back(format_training_example(r));
    }
    return out;
}

/// Rewrites DialogSum speaker tags ("#Person1#") to plain names ("Person1").
inline std::string normalize_speaker_tags(std::string_view dialogue) {
    std::string out;
    out.reserve(dialogue.size());
    std::size_t i = 0;
    while (i < dialogue.size()) {
        if (dialogue[i] == '#') {
            auto close = dialogue.find('#', i + 1);
            if (close != std::string_view::npos && close > i + 1) {
                auto inner = dialogue.substr(i + 1, close - i - 1);
                bool plain = std::all_of(inner.begin(), inner.end(), [](char c) { return text::is_alnum(c); });
                if (plain) {
                    out += inner;
                    i = close + 1;
                    continue;
                }
            }
        }
        out.push_back(dialogue[i++]);
    }
    return out;
}

/// Reads line-delimited `{"summary", "dialogue"}` records (SAMSum/DialogSum style).
inline std::vector<SummarizationRecord> load_summarization_records(std::istream& in) {
    std::vector<SummarizationRecord> out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (text::trim_view(line).empty()) continue;
        try {
            auto j = json::parse(line);
            out.push_back(SummarizationRecord{normalize_speaker_tags(j.at("summary").get<std::string>()),
                                              normalize_speaker_tags(j.at("dialogue").get<std::string>())});
        } catch (const json::exception& e) {
            throw Error(ErrorCode::MalformedRecord, "line " + std::to_string(lineno) + ": " + e.what(),
                        out.size());
        }
    }
    return out;
}

/// One `{"text": ...}` object per line; newlines inside a training string are
/// carried by the JSON string escape and restored by any reader.
inline void write_training_corpus(std::ostream& out, const std::vector<std::string>& examples) {
    for (const auto& e : examples) out << json{{"text", e}}.dump() << '\n';
}

} // namespace vscript
