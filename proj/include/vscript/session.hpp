#pragma once

#include "vscript/domain.hpp"
#include "vscript/json_io.hpp"
#include "vscript/video_store.hpp"

#include <array>
#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

namespace vscript {

enum class SessionStatus { Pending, Running, Complete, Failed };

inline std::string_view to_string(SessionStatus s) {
    switch (s) {
    case SessionStatus::Pending: return "pending";
    case SessionStatus::Running: return "running";
    case SessionStatus::Complete: return "complete";
    case SessionStatus::Failed: return "failed";
    }
    return "unknown";
}

inline SessionStatus parse_session_status(std::string_view s) {
    for (auto v : {SessionStatus::Pending, SessionStatus::Running, SessionStatus::Complete, SessionStatus::Failed})
        if (to_string(v) == s) return v;
    throw Error(ErrorCode::InvalidArgument, "unknown session status '" + std::string(s) + "'");
}

inline void to_json(json& j, SessionStatus s) { j = std::string(to_string(s)); }
inline void from_json(const json& j, SessionStatus& s) { s = parse_session_status(j.get<std::string>()); }

/// Pending -> Running -> {Complete, Failed}. A steer keeps a complete session
/// complete, so the terminal states have no way out.
inline bool can_transition(SessionStatus from, SessionStatus to) {
    switch (from) {
    case SessionStatus::Pending: return to == SessionStatus::Running || to == SessionStatus::Failed;
    case SessionStatus::Running: return to == SessionStatus::Complete || to == SessionStatus::Failed;
    case SessionStatus::Complete:
    case SessionStatus::Failed: return false;
    }
    return false;
}

struct PresentationSlot {
    std::size_t scene_index = 0;
    std::optional<ClipRecord> clip;
    bool relaxed = false;
    double score = 0.0;
    std::vector<std::string> relaxed_filters;

    bool operator==(const PresentationSlot&) const = default;
};

inline void to_json(json& j, const PresentationSlot& p) {
    j = json{{"scene_index", p.scene_index},
             {"clip", p.clip ? json(*p.clip) : json(nullptr)},
             {"relaxed", p.relaxed},
             {"score", p.score},
             {"relaxed_filters", p.relaxed_filters}};
}
inline void from_json(const json& j, PresentationSlot& p) {
    j.at("scene_index").get_to(p.scene_index);
    const auto& c = j.at("clip");
    p.clip = c.is_null() ? std::nullopt : std::optional<ClipRecord>(c.get<ClipRecord>());
    j.at("relaxed").get_to(p.relaxed);
    p.score = j.value("score", 0.0);
    p.relaxed_filters = j.value("relaxed_filters", std::vector<std::string>{});
}

struct SteerEvent {
    std::string timestamp;
    std::optional<Genre> new_genre;
    std::optional<std::string> injected_words;

    bool operator==(const SteerEvent&) const = default;
};

inline void to_json(json& j, const SteerEvent& e) {
    j = json{{"timestamp", e.timestamp},
             {"new_genre", e.new_genre ? json(*e.new_genre) : json(nullptr)},
             {"injected_words", e.injected_words ? json(*e.injected_words) : json(nullptr)}};
}
inline void from_json(const json& j, SteerEvent& e) {
    j.at("timestamp").get_to(e.timestamp);
    const auto& g = j.at("new_genre");
    e.new_genre = g.is_null() ? std::nullopt : std::optional<Genre>(g.get<Genre>());
    const auto& w = j.at("injected_words");
    e.injected_words = w.is_null() ? std::nullopt : std::optional<std::string>(w.get<std::string>());
}

struct StageFailure {
    std::string stage;
    std::string cause;

    bool operator==(const StageFailure&) const = default;
};

struct Session {
    std::string id;
    Genre genre = Genre::GenreFree;
    std::string starting_words;
    Plot plot;
    Script script;
    std::vector<PresentationSlot> presentation;
    std::optional<MusicTrack> music;
    SessionStatus status = SessionStatus::Pending;
    Seed seed = 0;
    std::vector<SteerEvent> history;
    std::vector<std::string> warnings;
    std::optional<StageFailure> failure;

    bool operator==(const Session&) const = default;
};

inline void to_json(json& j, const Session& s) {
    j = json{{"id", s.id},
             {"genre", s.genre},
             {"starting_words", s.starting_words},
             {"plot", s.plot},
             {"script", s.script},
             {"presentation", s.presentation},
             {"music", s.music ? json(*s.music) : json(nullptr)},
             {"status", s.status},
             {"seed", s.seed},
             {"history", s.history},
             {"warnings", s.warnings},
             {"failure", s.failure ? json{{"stage", s.failure->stage}, {"cause", s.failure->cause}} : json(nullptr)}};
}
inline void from_json(const json& j, Session& s) {
    j.at("id").get_to(s.id);
    j.at("genre").get_to(s.genre);
    j.at("starting_words").get_to(s.starting_words);
    j.at("plot").get_to(s.plot);
    j.at("script").get_to(s.script);
    j.at("presentation").get_to(s.presentation);
    const auto& m = j.at("music");
    s.music = m.is_null() ? std::nullopt : std::optional<MusicTrack>(m.get<MusicTrack>());
    j.at("status").get_to(s.status);
    j.at("seed").get_to(s.seed);
    j.at("history").get_to(s.history);
    j.at("warnings").get_to(s.warnings);
    const auto& f = j.at("failure");
    if (f.is_null()) s.failure.reset();
    else s.failure = StageFailure{f.at("stage").get<std::string>(), f.at("cause").get<std::string>()};
}

inline std::string utc_timestamp(std::chrono::system_clock::time_point t = std::chrono::system_clock::now()) {
    auto secs = std::chrono::system_clock::to_time_t(t);
    auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(t.time_since_epoch()).count() % 1000;
    std::tm tm{};
    gmtime_r(&secs, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%S", &tm);
    char out[40];
    std::snprintf(out, sizeof out, "%s.%03dZ", buf, static_cast<int>(ms));
    return out;
}

// ---------------------------------------------------------------------------
// Identifiers
// ---------------------------------------------------------------------------

inline constexpr std::string_view kCrockford = "0123456789ABCDEFGHJKMNPQRSTVWXYZ";
inline constexpr std::size_t kUlidLength = 26;

/// 26-character time-sortable ids: 48 bits of milliseconds and 80 random bits.
/// Ids from one generator increase strictly, even within a millisecond.
class UlidGenerator {
public:
    UlidGenerator() : rng_(std::random_device{}()) {}
    explicit UlidGenerator(std::uint64_t seed) : rng_(seed) {}

    std::string next(std::chrono::system_clock::time_point now = std::chrono::system_clock::now()) {
        std::lock_guard lock(mu_);
        auto ms = static_cast<std::uint64_t>(
            std::chrono::duration_cast<std::chrono::milliseconds>(now.time_since_epoch()).count());
        if (ms > last_ms_) {
            last_ms_ = ms;
            hi_ = rng_() & 0xFFFF;
            lo_ = rng_();
        } else if (++lo_ == 0 && ++hi_ > 0xFFFF) {
            ++last_ms_;
            hi_ = 0;
        }
        unsigned __int128 value = (static_cast<unsigned __int128>(last_ms_) << 80) |
                                  (static_cast<unsigned __int128>(hi_) << 64) | lo_;
        std::string out(kUlidLength, '0');
        for (std::size_t c = 0; c < kUlidLength; ++c)
            out[c] = kCrockford[static_cast<unsigned>(value >> (125 - 5 * c)) & 31u];
        return out;
    }

private:
    std::mutex mu_;
    std::mt19937_64 rng_;
    std::uint64_t last_ms_ = 0;
    std::uint64_t hi_ = 0;
    std::uint64_t lo_ = 0;
};

/// Session ids become file names, so only [0-9A-Za-z_-] is accepted.
inline bool is_valid_session_id(std::string_view id) {
    if (id.empty() || id.size() > 64) return false;
    return std::all_of(id.begin(), id.end(), [](char c) { return text::is_alnum(c) || c == '_' || c == '-'; });
}

// ---------------------------------------------------------------------------
// Store
// ---------------------------------------------------------------------------

/// One JSON file per session under `dir`, with an in-memory cache in front.
/// An empty directory path keeps sessions in memory only.
class SessionStore {
public:
    SessionStore() = default;
    explicit SessionStore(std::filesystem::path dir) : dir_(std::move(dir)) {
        if (!dir_.empty()) std::filesystem::create_directories(dir_);
    }

    void persist(const Session& s) {
        if (!is_valid_session_id(s.id)) throw Error(ErrorCode::InvalidArgument, "bad session id '" + s.id + "'");
        if (!dir_.empty()) {
            auto path = file_for(s.id);
            auto tmp = path;
            tmp += ".tmp";
            {
                std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
                if (!out) throw Error(ErrorCode::InvalidArgument, "cannot write " + tmp.string());
                out << json(s).dump(2) << '\n';
                if (!out) throw Error(ErrorCode::InvalidArgument, "write failed for " + tmp.string());
            }
            std::filesystem::rename(tmp, path);
        }
        std::lock_guard lock(mu_);
        cache_[s.id] = s;
    }

    Session restore(const std::string& id) {
        if (!is_valid_session_id(id)) throw Error(ErrorCode::UnknownSession, id);
        {
            std::lock_guard lock(mu_);
            if (auto it = cache_.find(id); it != cache_.end()) return it->second;
        }
        auto s = read_file(id);
        std::lock_guard lock(mu_);
        cache_[id] = s;
        return s;
    }

    /// Bypasses the cache; used to check what is actually on disk.
    Session read_file(const std::string& id) const {
        if (dir_.empty() || !is_valid_session_id(id)) throw Error(ErrorCode::UnknownSession, id);
        auto path = file_for(id);
        std::ifstream in(path, std::ios::binary);
        if (!in) throw Error(ErrorCode::UnknownSession, id);
        try {
            auto s = json::parse(in).get<Session>();
            if (s.id != id) throw Error(ErrorCode::CorruptSessionRecord, "id mismatch in " + path.string());
            return s;
        } catch (const json::exception& e) {
            throw Error(ErrorCode::CorruptSessionRecord, path.string() + ": " + e.what());
        } catch (const Error& e) {
            if (e.code() == ErrorCode::CorruptSessionRecord) throw;
            throw Error(ErrorCode::CorruptSessionRecord, path.string() + ": " + e.what());
        }
    }

    [[nodiscard]] const std::filesystem::path& dir() const { return dir_; }

private:
    [[nodiscard]] std::filesystem::path file_for(const std::string& id) const { return dir_ / (id + ".json"); }

    std::filesystem::path dir_;
    mutable std::mutex mu_;
    std::unordered_map<std::string, Session> cache_;
};

} // namespace vscript
