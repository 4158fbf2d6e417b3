#pragma once

#include "vscript/json_io.hpp"
#include "vscript/plot_gen.hpp"
#include "vscript/scene_gen.hpp"

#include <filesystem>
#include <fstream>
#include <optional>
#include <string>

namespace vscript {

struct BackendConfig {
    std::optional<std::string> generate_url;
    std::optional<std::string> classify_url;
    std::optional<std::string> embed_url;
    std::optional<std::string> score_url;
    std::string bearer_token;
    int timeout_ms = 30000;
    int retries = 1;
    int backoff_ms = 500;
};

/// Engine-wide settings. Every key of the config document is optional.
struct EngineConfig {
    BackendConfig backends;
    RescoreConfig plot;
    std::optional<std::filesystem::path> banlist_path;
    MatchMode banlist_mode = MatchMode::Word;
    std::optional<std::filesystem::path> music_path;
    std::filesystem::path session_dir = "sessions";
    std::optional<std::filesystem::path> lexicon_dir;
    std::optional<std::filesystem::path> index_path;
    bool parallel = false;
};

namespace detail {

inline std::optional<std::string> opt_string(const json& j, const char* key) {
    auto it = j.find(key);
    if (it == j.end() || it->is_null()) return std::nullopt;
    return it->get<std::string>();
}

inline std::optional<std::filesystem::path> opt_path(const json& j, const char* key,
                                                     const std::filesystem::path& base) {
    auto s = opt_string(j, key);
    if (!s) return std::nullopt;
    std::filesystem::path p(*s);
    return p.is_relative() && !base.empty() ? base / p : p;
}

} // namespace detail

/// Relative paths are resolved against `base` (normally the config file's directory).
inline EngineConfig parse_config(const json& j, const std::filesystem::path& base = {}) {
    EngineConfig c;
    if (!j.is_object()) throw Error(ErrorCode::InvalidArgument, "config must be an object");
    try {
        if (auto it = j.find("backends"); it != j.end()) {
            const auto& b = *it;
            c.backends.generate_url = detail::opt_string(b, "generate_url");
            c.backends.classify_url = detail::opt_string(b, "classify_url");
            c.backends.embed_url = detail::opt_string(b, "embed_url");
            c.backends.score_url = detail::opt_string(b, "score_url");
            c.backends.bearer_token = b.value("bearer_token", std::string{});
            c.backends.timeout_ms = b.value("timeout_ms", c.backends.timeout_ms);
            c.backends.retries = b.value("retries", c.backends.retries);
            c.backends.backoff_ms = b.value("backoff_ms", c.backends.backoff_ms);
        }
        c.plot.num_candidates = j.value("num_candidates", c.plot.num_candidates);
        c.plot.top_k = j.value("top_k", c.plot.top_k);
        c.plot.max_new_tokens = j.value("max_new_tokens", c.plot.max_new_tokens);
        c.plot.temperature = j.value("temperature", c.plot.temperature);
        c.banlist_path = detail::opt_path(j, "banlist_path", base);
        auto mode = j.value("banlist_mode", std::string("word"));
        if (mode == "word") c.banlist_mode = MatchMode::Word;
        else if (mode == "substring") c.banlist_mode = MatchMode::Substring;
        else throw Error(ErrorCode::InvalidArgument, "banlist_mode must be word or substring");
        c.music_path = detail::opt_path(j, "music_path", base);
        if (auto p = detail::opt_path(j, "session_dir", base)) c.session_dir = *p;
        c.lexicon_dir = detail::opt_path(j, "lexicon_dir", base);
        c.index_path = detail::opt_path(j, "index_path", base);
        c.parallel = j.value("parallel", false);
    } catch (const json::exception& e) {
        throw Error(ErrorCode::InvalidArgument, std::string("config: ") + e.what());
    }
    if (c.plot.num_candidates < 1) throw Error(ErrorCode::InvalidArgument, "num_candidates must be >= 1");
    if (c.plot.top_k < 1) throw Error(ErrorCode::InvalidArgument, "top_k must be >= 1");
    if (c.plot.max_new_tokens < 1) throw Error(ErrorCode::InvalidArgument, "max_new_tokens must be >= 1");
    if (!(c.plot.temperature > 0.0)) throw Error(ErrorCode::InvalidArgument, "temperature must be > 0");
    return c;
}

inline EngineConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::InvalidArgument, "cannot read config " + path.string());
    json j;
    try {
        j = json::parse(in);
    } catch (const json::exception& e) {
        throw Error(ErrorCode::InvalidArgument, path.string() + ": " + e.what());
    }
    return parse_config(j, path.parent_path());
}

inline BanList load_configured_banlist(const EngineConfig& c) {
    if (!c.banlist_path) return BanList{{}, c.banlist_mode};
    return load_banlist(*c.banlist_path, c.banlist_mode);
}

} // namespace vscript
