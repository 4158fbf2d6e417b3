#pragma once

#include "vscript/error.hpp"
#include "vscript/text.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace vscript {

using Seed = std::uint64_t;

enum class Genre { Crime, SciFi, War, Romance, GenreFree };

/// The four classifiable genres, in canonical order. GenreFree is a mode, not a class.
inline constexpr std::array<Genre, 4> kClassGenres{Genre::Crime, Genre::SciFi, Genre::War,
                                                   Genre::Romance};

inline constexpr std::array<Genre, 5> kAllGenres{Genre::Crime, Genre::SciFi, Genre::War,
                                                 Genre::Romance, Genre::GenreFree};

inline std::string_view to_string(Genre g) {
    switch (g) {
    case Genre::Crime: return "Crime";
    case Genre::SciFi: return "SciFi";
    case Genre::War: return "War";
    case Genre::Romance: return "Romance";
    case Genre::GenreFree: return "GenreFree";
    }
    return "GenreFree";
}

/// Accepts the canonical names plus the display spellings ("Sci-Fi",
/// "Genre-Free"), case-insensitively.
inline std::optional<Genre> parse_genre(std::string_view s) {
    std::string key;
    for (char c : s)
        if (c != '-' && c != '_' && c != ' ') key.push_back(text::lower(c));
    if (key == "crime") return Genre::Crime;
    if (key == "scifi") return Genre::SciFi;
    if (key == "war") return Genre::War;
    if (key == "romance") return Genre::Romance;
    if (key == "genrefree" || key == "free" || key == "none") return Genre::GenreFree;
    return std::nullopt;
}

inline Genre genre_from_string(std::string_view s) {
    if (auto g = parse_genre(s)) return *g;
    throw Error(ErrorCode::InvalidArgument, "unknown genre '" + std::string(s) + "'");
}

inline std::size_t genre_slot(Genre g) { return static_cast<std::size_t>(g); }

struct PlotSentence {
    std::size_t index = 0;
    std::string text;

    bool operator==(const PlotSentence&) const = default;
};

struct PlotCandidate {
    std::string text;
    std::size_t candidate_index = 0;
    double target_genre_prob = 0.0;
    bool scored = false;

    bool operator==(const PlotCandidate&) const = default;
};

struct Plot {
    std::string text;
    Genre genre = Genre::GenreFree;
    std::vector<PlotSentence> sentences;

    bool operator==(const Plot&) const = default;
};

struct DialogueTurn {
    std::string speaker;
    std::string utterance;

    bool operator==(const DialogueTurn&) const = default;
};

enum class Setting { Int, Ext, IntExt, Unknown };
enum class TimeOfDay { Day, Night, Unknown };

inline std::string_view to_string(Setting s) {
    switch (s) {
    case Setting::Int: return "INT";
    case Setting::Ext: return "EXT";
    case Setting::IntExt: return "INT_EXT";
    case Setting::Unknown: return "UNKNOWN";
    }
    return "UNKNOWN";
}

inline std::string_view to_string(TimeOfDay t) {
    switch (t) {
    case TimeOfDay::Day: return "DAY";
    case TimeOfDay::Night: return "NIGHT";
    case TimeOfDay::Unknown: return "UNKNOWN";
    }
    return "UNKNOWN";
}

inline std::optional<Setting> parse_setting_name(std::string_view s) {
    auto u = text::to_upper(s);
    if (u == "INT") return Setting::Int;
    if (u == "EXT") return Setting::Ext;
    if (u == "INT_EXT") return Setting::IntExt;
    if (u == "UNKNOWN") return Setting::Unknown;
    return std::nullopt;
}

inline std::optional<TimeOfDay> parse_time_name(std::string_view s) {
    auto u = text::to_upper(text::trim_view(s));
    if (u == "DAY") return TimeOfDay::Day;
    if (u == "NIGHT") return TimeOfDay::Night;
    if (u == "UNKNOWN" || u.empty()) return TimeOfDay::Unknown;
    return std::nullopt;
}

struct SceneHeader {
    Setting setting = Setting::Unknown;
    std::string location;
    TimeOfDay time_of_day = TimeOfDay::Unknown;

    bool operator==(const SceneHeader&) const = default;
};

struct Scene {
    SceneHeader header;
    std::string description;
    std::vector<DialogueTurn> turns;
    PlotSentence source_sentence;
    bool header_fallback = false;
    bool description_fallback = false;
    bool dialogue_fallback = false;

    bool operator==(const Scene&) const = default;
};

struct Script {
    Genre genre = Genre::GenreFree;
    Plot plot;
    std::vector<Scene> scenes;

    bool operator==(const Script&) const = default;
};

/// Uppercases, collapses whitespace, and strips stray separators from a location.
inline std::string normalize_location(std::string_view raw) {
    auto s = text::to_upper(text::normalize_whitespace(raw));
    while (!s.empty() && (s.back() == '-' || s.back() == '.' || s.back() == ',' || s.back() == ' '))
        s.pop_back();
    return s;
}

inline std::size_t utf8_length(std::string_view s) {
    std::size_t n = 0;
    for (char c : s)
        if ((static_cast<unsigned char>(c) & 0xC0) != 0x80) ++n;
    return n;
}

inline constexpr std::size_t kMaxSpeakerLength = 30;

inline bool is_valid_speaker(std::string_view speaker) {
    if (text::trim_view(speaker).empty() || utf8_length(speaker) > kMaxSpeakerLength) return false;
    return speaker.find_first_of(":\n\r") == std::string_view::npos;
}

/// "<SETTING>. <LOCATION> - <TIME>"; the time part is omitted when unknown so
/// the line parses back to the same header.
inline std::string render_header(const SceneHeader& h) {
    std::string out;
    switch (h.setting) {
    case Setting::Int: out = "INT."; break;
    case Setting::Ext: out = "EXT."; break;
    case Setting::IntExt: out = "INT./EXT."; break;
    case Setting::Unknown: out = "UNKNOWN."; break;
    }
    out += ' ';
    out += h.location.empty() ? std::string("UNKNOWN") : text::to_upper(h.location);
    if (h.time_of_day != TimeOfDay::Unknown) {
        out += " - ";
        out += to_string(h.time_of_day);
    }
    return out;
}

inline std::string render_scene(const Scene& scene) {
    std::string out = render_header(scene.header);
    out += "\n\n";
    out += scene.description;
    for (const auto& turn : scene.turns) {
        out += "\n\n";
        out += text::to_upper(turn.speaker);
        out += "\n  ";
        out += turn.utterance;
    }
    return out;
}

inline std::string render_script(const Script& script) {
    std::string out;
    for (std::size_t i = 0; i < script.scenes.size(); ++i) {
        if (i) out += "\n\n\n";
        out += render_scene(script.scenes[i]);
    }
    return out;
}

struct Violation {
    std::string invariant;
    std::optional<std::size_t> scene_index;
    std::string message;

    bool operator==(const Violation&) const = default;
};

inline std::vector<Violation> validate_script(const Script& script) {
    std::vector<Violation> out;
    auto add = [&](std::string inv, std::optional<std::size_t> idx, std::string msg) {
        out.push_back(Violation{std::move(inv), idx, std::move(msg)});
    };

    const auto& plot = script.plot;
    if (plot.sentences.empty()) add("empty plot", std::nullopt, "plot has no sentences");
    std::vector<std::string> parts;
    for (std::size_t i = 0; i < plot.sentences.size(); ++i) {
        const auto& s = plot.sentences[i];
        if (s.index != i)
            add("sentence index", i, "expected index " + std::to_string(i) + ", got " +
                                         std::to_string(s.index));
        if (text::trim_view(s.text).empty()) add("empty sentence", i, "plot sentence is blank");
        parts.push_back(s.text);
    }
    if (!plot.sentences.empty() &&
        text::normalize_whitespace(text::join(parts, " ")) != text::normalize_whitespace(plot.text))
        add("plot text", std::nullopt, "sentences do not reconstruct the plot text");

    if (script.scenes.size() != plot.sentences.size())
        add("cardinality", std::nullopt,
            std::to_string(script.scenes.size()) + " scenes for " +
                std::to_string(plot.sentences.size()) + " plot sentences");

    for (std::size_t i = 0; i < script.scenes.size(); ++i) {
        const auto& scene = script.scenes[i];
        if (scene.source_sentence.index != i)
            add("source index", i, "scene refers to sentence " +
                                       std::to_string(scene.source_sentence.index));
        else if (i < plot.sentences.size() && scene.source_sentence != plot.sentences[i])
            add("source sentence", i, "scene source sentence differs from the plot");
        if (scene.turns.empty()) add("empty dialogue", i, "scene has no dialogue turns");
        for (const auto& turn : scene.turns) {
            if (!is_valid_speaker(turn.speaker))
                add("speaker", i, "invalid speaker '" + turn.speaker + "'");
            if (text::trim_view(turn.utterance).empty())
                add("empty utterance", i, "turn by '" + turn.speaker + "' is empty");
        }
        if (scene.description.empty() && !scene.description_fallback)
            add("empty description", i, "description missing without fallback flag");
        if (scene.header.location != normalize_location(scene.header.location))
            add("location", i, "location is not uppercase-normalized");
    }
    return out;
}

} // namespace vscript
