#pragma once

#include "vscript/domain.hpp"
#include "vscript/error.hpp"

#include <json.hpp>

#include <array>
#include <filesystem>
#include <fstream>
#include <string>
#include <unordered_set>
#include <vector>

namespace vscript {

/// Lowercase genre-indicative tokens per classifiable genre, indexed by genre_slot().
struct LexiconSet {
    std::array<std::vector<std::string>, 4> tokens;

    [[nodiscard]] const std::vector<std::string>& of(Genre g) const { return tokens.at(genre_slot(g)); }
};

inline const LexiconSet& builtin_lexicons() {
    static const LexiconSet set{{{
        // Crime
        {"detective", "murder", "police", "gang", "heist", "robbery", "suspect", "killer",
         "mafia", "bullet", "crime", "cop", "evidence", "witness", "drug", "smuggler", "gun",
         "prison", "thief", "corruption", "ransom", "kidnapping", "mob", "alibi", "homicide"},
        // SciFi
        {"spaceship", "alien", "robot", "planet", "galaxy", "laser", "android", "starship",
         "wormhole", "cyborg", "asteroid", "orbit", "colony", "scientist", "experiment",
         "quantum", "clone", "mutant", "teleport", "satellite", "cosmic", "reactor",
         "interstellar", "hologram", "spacecraft"},
        // War
        {"soldier", "army", "battle", "war", "general", "enemy", "battalion", "troops", "trench",
         "sniper", "tank", "invasion", "frontline", "regiment", "bomb", "platoon", "rifle",
         "siege", "commander", "officer", "veteran", "artillery", "ceasefire", "allied",
         "resistance"},
        // Romance
        {"love", "kiss", "heart", "wedding", "romance", "lover", "passion", "bride", "date",
         "marriage", "sweetheart", "flirt", "affair", "valentine", "embrace", "boyfriend",
         "girlfriend", "engaged", "honeymoon", "crush", "roses", "beloved", "soulmate", "couple",
         "longing"},
    }}};
    return set;
}

/// Reads one document per genre (`<name>.json`, `{"genre": ..., "tokens": [...]}`)
/// from `dir`. Every classifiable genre must be present.
inline LexiconSet load_lexicons(const std::filesystem::path& dir) {
    LexiconSet set;
    std::array<bool, 4> seen{};
    if (!std::filesystem::is_directory(dir))
        throw Error(ErrorCode::InvalidArgument, "lexicon directory not found: " + dir.string());
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        if (entry.path().extension() != ".json") continue;
        std::ifstream in(entry.path());
        nlohmann::json doc;
        try {
            doc = nlohmann::json::parse(in);
        } catch (const nlohmann::json::exception& e) {
            throw Error(ErrorCode::InvalidArgument, entry.path().string() + ": " + e.what());
        }
        auto genre = genre_from_string(doc.at("genre").get<std::string>());
        if (genre == Genre::GenreFree)
            throw Error(ErrorCode::InvalidArgument, "GenreFree cannot have a lexicon");
        auto& list = set.tokens[genre_slot(genre)];
        for (const auto& tok : doc.at("tokens")) {
            auto s = tok.get<std::string>();
            if (s.empty() || s != text::to_lower(s))
                throw Error(ErrorCode::InvalidArgument, "lexicon tokens must be lowercase: '" + s + "'");
            list.push_back(std::move(s));
        }
        seen[genre_slot(genre)] = true;
    }
    for (auto g : kClassGenres)
        if (!seen[genre_slot(g)])
            throw Error(ErrorCode::InvalidArgument,
                        "missing lexicon for " + std::string(to_string(g)));
    return set;
}

} // namespace vscript
