#pragma once

// Structured interchange for the domain types. Field names mirror the C++
// members one-to-one; enums travel as their canonical names.

#include "vscript/backend.hpp"
#include "vscript/domain.hpp"

#include <json.hpp>

namespace vscript {

using json = nlohmann::json;

inline void to_json(json& j, Genre g) { j = std::string(to_string(g)); }
inline void from_json(const json& j, Genre& g) { g = genre_from_string(j.get<std::string>()); }

inline void to_json(json& j, Setting s) { j = std::string(to_string(s)); }
inline void from_json(const json& j, Setting& s) {
    auto parsed = parse_setting_name(j.get<std::string>());
    if (!parsed) throw Error(ErrorCode::InvalidArgument, "unknown setting " + j.dump());
    s = *parsed;
}

inline void to_json(json& j, TimeOfDay t) { j = std::string(to_string(t)); }
inline void from_json(const json& j, TimeOfDay& t) {
    auto parsed = parse_time_name(j.get<std::string>());
    if (!parsed) throw Error(ErrorCode::InvalidArgument, "unknown time of day " + j.dump());
    t = *parsed;
}

inline void to_json(json& j, const PlotSentence& s) { j = json{{"index", s.index}, {"text", s.text}}; }
inline void from_json(const json& j, PlotSentence& s) {
    j.at("index").get_to(s.index);
    j.at("text").get_to(s.text);
}

inline void to_json(json& j, const PlotCandidate& c) {
    j = json{{"text", c.text},
             {"candidate_index", c.candidate_index},
             {"target_genre_prob", c.target_genre_prob},
             {"scored", c.scored}};
}
inline void from_json(const json& j, PlotCandidate& c) {
    j.at("text").get_to(c.text);
    j.at("candidate_index").get_to(c.candidate_index);
    c.target_genre_prob = j.value("target_genre_prob", 0.0);
    c.scored = j.value("scored", false);
}

inline void to_json(json& j, const Plot& p) {
    j = json{{"text", p.text}, {"genre", p.genre}, {"sentences", p.sentences}};
}
inline void from_json(const json& j, Plot& p) {
    j.at("text").get_to(p.text);
    j.at("genre").get_to(p.genre);
    j.at("sentences").get_to(p.sentences);
}

inline void to_json(json& j, const DialogueTurn& t) {
    j = json{{"speaker", t.speaker}, {"utterance", t.utterance}};
}
inline void from_json(const json& j, DialogueTurn& t) {
    j.at("speaker").get_to(t.speaker);
    j.at("utterance").get_to(t.utterance);
}

inline void to_json(json& j, const SceneHeader& h) {
    j = json{{"setting", h.setting}, {"location", h.location}, {"time_of_day", h.time_of_day}};
}
inline void from_json(const json& j, SceneHeader& h) {
    j.at("setting").get_to(h.setting);
    j.at("location").get_to(h.location);
    j.at("time_of_day").get_to(h.time_of_day);
}

inline void to_json(json& j, const Scene& s) {
    j = json{{"header", s.header},
             {"description", s.description},
             {"turns", s.turns},
             {"source_sentence", s.source_sentence},
             {"header_fallback", s.header_fallback},
             {"description_fallback", s.description_fallback},
             {"dialogue_fallback", s.dialogue_fallback}};
}
inline void from_json(const json& j, Scene& s) {
    j.at("header").get_to(s.header);
    j.at("description").get_to(s.description);
    j.at("turns").get_to(s.turns);
    j.at("source_sentence").get_to(s.source_sentence);
    s.header_fallback = j.value("header_fallback", false);
    s.description_fallback = j.value("description_fallback", false);
    s.dialogue_fallback = j.value("dialogue_fallback", false);
}

inline void to_json(json& j, const Script& s) {
    j = json{{"genre", s.genre}, {"plot", s.plot}, {"scenes", s.scenes}};
}
inline void from_json(const json& j, Script& s) {
    j.at("genre").get_to(s.genre);
    j.at("plot").get_to(s.plot);
    j.at("scenes").get_to(s.scenes);
}

inline void to_json(json& j, const GenerationRequest& r) {
    j = json{{"prompt", r.prompt},
             {"max_new_tokens", r.max_new_tokens},
             {"top_k", r.top_k},
             {"temperature", r.temperature},
             {"num_candidates", r.num_candidates},
             {"seed", r.seed}};
    if (r.stop_marker) j["stop_marker"] = *r.stop_marker;
}
inline void from_json(const json& j, GenerationRequest& r) {
    j.at("prompt").get_to(r.prompt);
    j.at("max_new_tokens").get_to(r.max_new_tokens);
    j.at("top_k").get_to(r.top_k);
    j.at("temperature").get_to(r.temperature);
    j.at("num_candidates").get_to(r.num_candidates);
    j.at("seed").get_to(r.seed);
    if (j.contains("stop_marker") && !j["stop_marker"].is_null())
        r.stop_marker = j["stop_marker"].get<std::string>();
    else
        r.stop_marker.reset();
}

inline void to_json(json& j, const GenreDistribution& d) {
    json probs = json::object();
    for (auto g : kClassGenres) probs[std::string(to_string(g))] = d.probs[genre_slot(g)];
    j = json{{"probs", probs}};
}
inline void from_json(const json& j, GenreDistribution& d) {
    const auto& probs = j.at("probs");
    for (auto g : kClassGenres) d.probs[genre_slot(g)] = probs.at(std::string(to_string(g))).get<double>();
}

inline void to_json(json& j, const PerplexityScore& s) {
    j = json{{"mean_nll_per_token", s.mean_nll_per_token}, {"token_count", s.token_count}};
}
inline void from_json(const json& j, PerplexityScore& s) {
    j.at("mean_nll_per_token").get_to(s.mean_nll_per_token);
    j.at("token_count").get_to(s.token_count);
}

} // namespace vscript
