#pragma once

#include "vscript/backend.hpp"
#include "vscript/dialogue_gen.hpp"
#include "vscript/domain.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace vscript {

// ---------------------------------------------------------------------------
// Scene headers
// ---------------------------------------------------------------------------

namespace detail {

struct SettingPrefix {
    std::string_view text;
    Setting setting;
};

// Longest spellings first so "INT./EXT." is not read as "INT.".
inline constexpr std::array<SettingPrefix, 4> kSettingPrefixes{{
    {"INT./EXT", Setting::IntExt},
    {"INT/EXT", Setting::IntExt},
    {"INT", Setting::Int},
    {"EXT", Setting::Ext},
}};

inline constexpr std::array<std::string_view, 3> kDashes{"-", "\xE2\x80\x93", "\xE2\x80\x94"};

} // namespace detail

/// Parses a slugline such as "INT. SPACE STATION - NIGHT" (case-insensitive,
/// hyphen or en dash). Never throws: an unrecognized line yields an UNKNOWN
/// setting with an empty location.
inline SceneHeader parse_scene_header(std::string_view line) {
    auto s = text::trim_view(line);
    SceneHeader failed{};
    std::optional<Setting> setting;
    for (const auto& p : detail::kSettingPrefixes) {
        if (!text::starts_with_icase(s, p.text)) continue;
        auto rest = s.substr(p.text.size());
        if (!rest.empty() && rest.front() == '.') rest.remove_prefix(1);
        if (rest.empty() || !text::is_space(rest.front())) continue;
        setting = p.setting;
        s = text::trim_view(rest);
        break;
    }
    if (!setting) return failed;

    SceneHeader h;
    h.setting = *setting;
    std::string_view location = s;
    for (auto dash : detail::kDashes) {
        auto pos = s.rfind(dash);
        if (pos == std::string_view::npos) continue;
        auto time = parse_time_name(s.substr(pos + dash.size()));
        auto tail = text::to_upper(text::trim_view(s.substr(pos + dash.size())));
        if (time && (tail == "DAY" || tail == "NIGHT")) {
            h.time_of_day = *time;
            location = s.substr(0, pos);
            break;
        }
    }
    h.location = normalize_location(location);
    if (h.location.empty()) return failed;
    return h;
}

// ---------------------------------------------------------------------------
// Banned content
// ---------------------------------------------------------------------------

enum class MatchMode { Word, Substring };

inline constexpr std::string_view kRedactionGlyph = "\xE2\x96\x88\xE2\x96\x88\xE2\x96\x88\xE2\x96\x88";

struct BanList {
    std::set<std::string> terms;
    MatchMode match_mode = MatchMode::Word;

    [[nodiscard]] bool enabled() const { return !terms.empty(); }
};

inline BanList make_banlist(const std::vector<std::string>& terms, MatchMode mode = MatchMode::Word) {
    BanList b;
    b.match_mode = mode;
    for (const auto& t : terms) {
        auto norm = text::to_lower(text::trim_view(t));
        if (norm.empty()) throw Error(ErrorCode::InvalidArgument, "banlist term is empty");
        b.terms.insert(std::move(norm));
    }
    return b;
}

/// Plain text, one term per line; blank lines and `#` comments are ignored.
inline BanList load_banlist(const std::filesystem::path& path, MatchMode mode = MatchMode::Word) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::InvalidArgument, "cannot read banlist " + path.string());
    std::vector<std::string> terms;
    std::string line;
    while (std::getline(in, line)) {
        auto t = text::trim_view(line);
        if (t.empty() || t.front() == '#') continue;
        terms.emplace_back(t);
    }
    return make_banlist(terms, mode);
}

struct Redaction {
    std::string term;
    std::size_t position = 0;

    bool operator==(const Redaction&) const = default;
};

struct FilterOutcome {
    std::string clean_text;
    std::vector<Redaction> redactions;
};

namespace detail {

// Longest banned term starting at `pos`, honouring word boundaries in word mode.
inline const std::string* banned_match_at(std::string_view lowered, std::size_t pos, const BanList& banlist) {
    const std::string* best = nullptr;
    for (const auto& term : banlist.terms) {
        if (best && term.size() <= best->size()) continue;
        if (lowered.compare(pos, term.size(), term) != 0) continue;
        if (banlist.match_mode == MatchMode::Word) {
            bool left = pos == 0 || !text::is_word_char(lowered[pos - 1]);
            auto end = pos + term.size();
            bool right = end == lowered.size() || !text::is_word_char(lowered[end]);
            if (!left || !right) continue;
        }
        best = &term;
    }
    return best;
}

} // namespace detail

inline bool contains_banned(std::string_view s, const BanList& banlist) {
    if (!banlist.enabled()) return false;
    auto lowered = text::to_lower(s);
    for (std::size_t i = 0; i < lowered.size(); ++i)
        if (detail::banned_match_at(lowered, i, banlist)) return true;
    return false;
}

/// Replaces banned terms (case-insensitive) with a fixed glyph. Redactions are
/// reported by term and byte offset into the input, in order of appearance.
inline FilterOutcome filter_banned_content(std::string_view s, const BanList& banlist) {
    FilterOutcome out;
    if (!banlist.enabled()) {
        out.clean_text = std::string(s);
        return out;
    }
    auto lowered = text::to_lower(s);
    std::size_t i = 0;
    while (i < s.size()) {
        if (const auto* term = detail::banned_match_at(lowered, i, banlist)) {
            out.redactions.push_back(Redaction{*term, i});
            out.clean_text += kRedactionGlyph;
            i += term->size();
            continue;
        }
        out.clean_text.push_back(s[i++]);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Scene descriptions
// ---------------------------------------------------------------------------

inline constexpr std::string_view kSceneTag = "Scene:\n";

inline std::string render_turns(const std::vector<DialogueTurn>& turns) {
    std::string out;
    for (std::size_t i = 0; i < turns.size(); ++i) {
        if (i) out += '\n';
        out += turns[i].speaker + ": " + turns[i].utterance;
    }
    return out;
}

inline std::string build_scene_prompt(const std::vector<DialogueTurn>& turns) {
    return std::string(kDialogueTag) + render_turns(turns) + "\n" + std::string(kSceneTag);
}

struct SceneDraft {
    SceneHeader header;
    std::string description;
    bool header_fallback = false;
    bool description_fallback = false;

    bool operator==(const SceneDraft&) const = default;
};

/// Splits a scene reply into header (first non-blank line) and description.
inline SceneDraft parse_scene_reply(std::string_view reply, const PlotSentence& source) {
    auto lines = text::split_lines(reply);
    std::size_t first = 0;
    while (first < lines.size() && text::trim_view(lines[first]).empty()) ++first;

    SceneDraft d;
    if (first < lines.size()) d.header = parse_scene_header(lines[first]);
    if (d.header.setting == Setting::Unknown) {
        d.header = SceneHeader{Setting::Unknown, "UNKNOWN", TimeOfDay::Unknown};
        d.header_fallback = true;
        d.description = text::normalize_whitespace(reply);
    } else {
        std::vector<std::string> rest(lines.begin() + static_cast<std::ptrdiff_t>(first) + 1, lines.end());
        d.description = text::normalize_whitespace(text::join(rest, " "));
    }
    if (d.description.empty()) {
        d.description = source.text;
        d.description_fallback = true;
    }
    return d;
}

inline SceneDraft generate_scene_description(TextGenerator& generator, const Dialogue& dialogue, Seed seed,
                                             const DecodeParams& params = {}) {
    if (dialogue.turns.empty()) throw Error(ErrorCode::InvalidArgument, "dialogue has no turns");
    auto reply = generator.generate_text(make_request(build_scene_prompt(dialogue.turns), params, seed));
    return parse_scene_reply(reply.front(), dialogue.source_sentence);
}

// ---------------------------------------------------------------------------
// Assembly
// ---------------------------------------------------------------------------

struct RedactionLogEntry {
    std::size_t scene_index = 0;
    std::string field;
    Redaction redaction;

    bool operator==(const RedactionLogEntry&) const = default;
};

struct AssembledScript {
    Script script;
    std::vector<RedactionLogEntry> redactions;
};

/// Builds scene i from dialogue i and scene draft i. Every rendered text field
/// (location, description, speakers, utterances) passes the banned-term filter.
inline AssembledScript assemble_script(const Plot& plot, const std::vector<Dialogue>& dialogues,
                                       const std::vector<SceneDraft>& scene_parts, const BanList& banlist,
                                       std::size_t first_scene_index = 0) {
    auto expected = plot.sentences.size() - std::min(first_scene_index, plot.sentences.size());
    if (dialogues.size() != expected || scene_parts.size() != expected)
        throw Error(ErrorCode::CardinalityMismatch,
                    std::to_string(expected) + " sentences, " + std::to_string(dialogues.size()) +
                        " dialogues, " + std::to_string(scene_parts.size()) + " scene parts");

    AssembledScript out;
    out.script.genre = plot.genre;
    out.script.plot = plot;
    auto clean = [&](std::size_t scene, const char* field, const std::string& s) {
        auto f = filter_banned_content(s, banlist);
        for (auto& r : f.redactions) out.redactions.push_back(RedactionLogEntry{scene, field, std::move(r)});
        return std::move(f.clean_text);
    };

    for (std::size_t k = 0; k < expected; ++k) {
        auto i = first_scene_index + k;
        const auto& dialogue = dialogues[k];
        const auto& part = scene_parts[k];
        if (dialogue.source_sentence != plot.sentences[i])
            throw Error(ErrorCode::CardinalityMismatch, "dialogue out of sentence order", i);

        Scene scene;
        scene.source_sentence = plot.sentences[i];
        scene.header = part.header;
        scene.header.location = normalize_location(clean(i, "location", part.header.location));
        scene.description = clean(i, "description", part.description);
        scene.header_fallback = part.header_fallback;
        scene.description_fallback = part.description_fallback;
        scene.dialogue_fallback = dialogue.fallback;
        for (const auto& t : dialogue.turns)
            scene.turns.push_back(DialogueTurn{clean(i, "speaker", t.speaker), clean(i, "utterance", t.utterance)});
        out.script.scenes.push_back(std::move(scene));
    }
    return out;
}

} // namespace vscript
