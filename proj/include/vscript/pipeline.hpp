#pragma once

// The end-to-end engine: plot -> per-sentence dialogue and scene -> assembly ->
// per-sentence clip retrieval -> music. Sessions wrap engine runs with
// persistence, a worker pool and per-session steering.

#include "vscript/backend.hpp"
#include "vscript/config.hpp"
#include "vscript/dialogue_gen.hpp"
#include "vscript/plot_gen.hpp"
#include "vscript/scene_gen.hpp"
#include "vscript/session.hpp"
#include "vscript/video_store.hpp"

#include <condition_variable>
#include <deque>
#include <functional>
#include <future>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace vscript {

class StageError : public std::runtime_error {
public:
    StageError(std::string stage, std::string cause, std::optional<ErrorCode> code = std::nullopt)
        : std::runtime_error(stage + ": " + cause), stage_(std::move(stage)), cause_(std::move(cause)), code_(code) {}

    [[nodiscard]] const std::string& stage() const { return stage_; }
    [[nodiscard]] const std::string& cause() const { return cause_; }
    [[nodiscard]] std::optional<ErrorCode> code() const { return code_; }

private:
    std::string stage_;
    std::string cause_;
    std::optional<ErrorCode> code_;
};

namespace detail {

template <class F>
auto in_stage(const char* stage, F&& f) -> decltype(f()) {
    try {
        return f();
    } catch (const StageError&) {
        throw;
    } catch (const Error& e) {
        throw StageError(stage, e.what(), e.code());
    } catch (const std::exception& e) {
        throw StageError(stage, e.what());
    }
}

} // namespace detail

struct EngineSettings {
    RescoreConfig plot;
    DecodeParams dialogue;
    DecodeParams scene;
    BanList banlist;
    MusicConfig music = default_music_config();
    bool parallel = false; // expand sentences concurrently
};

inline EngineSettings make_engine_settings(const EngineConfig& c) {
    EngineSettings s;
    s.plot = c.plot;
    s.dialogue = DecodeParams{c.plot.max_new_tokens, c.plot.top_k, c.plot.temperature};
    s.scene = s.dialogue;
    s.banlist = load_configured_banlist(c);
    if (c.music_path) s.music = load_music_config(*c.music_path);
    s.parallel = c.parallel;
    return s;
}

inline constexpr std::string_view kEmptyIndexWarning = "video index is empty; presentation slots hold no clips";

class Engine {
public:
    Engine(Backends backends, EngineSettings settings, std::shared_ptr<const VideoIndex> index = nullptr)
        : backends_(std::move(backends)), settings_(std::move(settings)), index_(std::move(index)) {
        if (!backends_.generator || !backends_.classifier || !backends_.embedder)
            throw Error(ErrorCode::InvalidArgument, "engine needs a generator, a classifier and an embedder");
    }

    [[nodiscard]] const EngineSettings& settings() const { return settings_; }
    [[nodiscard]] const Backends& backends() const { return backends_; }
    [[nodiscard]] bool has_clips() const { return index_ && !index_->empty(); }

    /// Runs the whole pipeline. Stage failures do not throw: the returned
    /// session is marked failed with the stage name and cause.
    Session run_pipeline(Genre genre, std::string starting_words, Seed seed, std::string id = "local") const {
        Session s;
        s.id = std::move(id);
        s.genre = genre;
        s.starting_words = std::move(starting_words);
        s.seed = seed;
        s.status = SessionStatus::Running;
        execute(s);
        return s;
    }

    /// Fills a running session in place and leaves it complete or failed.
    void execute(Session& s) const {
        try {
            auto selection = detail::in_stage("plot", [&] {
                return generate_plot(backends_, s.genre, s.starting_words, settings_.plot, s.seed);
            });
            s.plot = selection.plot;
            auto assembled = expand(s.plot, 0, s.seed);
            s.script = std::move(assembled.script);
            check_script(s.script);
            s.presentation = retrieve(s.script, 0, s.genre, s.warnings);
            s.music = detail::in_stage("music", [&] { return select_music(s.genre, settings_.music); });
            s.status = SessionStatus::Complete;
        } catch (const StageError& e) {
            s.status = SessionStatus::Failed;
            s.failure = StageFailure{e.stage(), e.cause()};
        }
    }

    /// Seed used for the n-th steer of a session started with `seed`.
    static Seed steer_seed(const Session& s) { return s.seed + s.history.size(); }

    /// Extends a running or complete session. Only the continuation is expanded
    /// into new scenes; existing scenes and slots are left untouched. On a stage
    /// failure the session is not modified and StageError is thrown.
    void steer(Session& s, SteerEvent event) const {
        if (!event.new_genre && !event.injected_words)
            throw Error(ErrorCode::InvalidSteer, "steer needs a genre or words");
        if (event.injected_words && text::trim_view(*event.injected_words).empty()) {
            if (!event.new_genre) throw Error(ErrorCode::InvalidSteer, "injected words are blank");
            event.injected_words.reset();
        }
        if (s.status != SessionStatus::Running && s.status != SessionStatus::Complete)
            throw Error(ErrorCode::InvalidSteer, "session is " + std::string(to_string(s.status)));
        if (event.timestamp.empty()) event.timestamp = utc_timestamp();

        Session next = s;
        next.history.push_back(event);
        Seed seed = steer_seed(next);
        Genre genre = event.new_genre.value_or(s.genre);

        std::string lead = s.plot.text;
        if (event.injected_words) lead += " " + text::normalize_whitespace(*event.injected_words);
        lead = text::normalize_whitespace(lead);

        auto text = detail::in_stage("plot", [&] {
            auto prompt = with_control_code(genre, lead);
            auto cfg = settings_.plot;
            if (genre == Genre::GenreFree) cfg.num_candidates = 1;
            auto candidates = sample_plot_candidates(*backends_.generator, genre, prompt, lead, cfg, seed);
            if (genre == Genre::GenreFree) return candidates.front().text;
            auto best = select_best_candidate(candidates, genre, *backends_.classifier);
            return candidates[best].text;
        });

        auto old_count = s.plot.sentences.size();
        auto added = detail::in_stage("plot", [&] {
            if (!std::string_view(text).starts_with(s.plot.text))
                throw Error(ErrorCode::InvalidArgument, "continuation does not extend the plot");
            auto sentences = segment_plot(std::string_view(text).substr(s.plot.text.size()));
            for (auto& sent : sentences) sent.index += old_count;
            return sentences;
        });

        next.genre = genre;
        next.plot.genre = genre;
        next.plot.text = text::normalize_whitespace(text);
        next.plot.sentences.insert(next.plot.sentences.end(), added.begin(), added.end());

        auto assembled = expand(next.plot, old_count, seed);
        next.script.genre = genre;
        next.script.plot = next.plot;
        for (auto& scene : assembled.script.scenes) next.script.scenes.push_back(std::move(scene));
        check_script(next.script);
        auto slots = retrieve(next.script, old_count, genre, next.warnings);
        next.presentation.insert(next.presentation.end(), slots.begin(), slots.end());
        next.music = detail::in_stage("music", [&] { return select_music(genre, settings_.music); });
        next.status = SessionStatus::Complete;
        s = std::move(next);
    }

private:
    struct Expansion {
        Dialogue dialogue;
        SceneDraft scene;
    };

    Expansion expand_one(const PlotSentence& sentence, Seed seed) const {
        Expansion e;
        e.dialogue = detail::in_stage("dialogue", [&] {
            return generate_dialogue(*backends_.generator, sentence, text::derive_seed(seed, "dialogue", sentence.index),
                                     settings_.dialogue);
        });
        e.scene = detail::in_stage("scene", [&] {
            return generate_scene_description(*backends_.generator, e.dialogue,
                                              text::derive_seed(seed, "scene", sentence.index), settings_.scene);
        });
        return e;
    }

    AssembledScript expand(const Plot& plot, std::size_t first, Seed seed) const {
        auto count = plot.sentences.size() - first;
        std::vector<Expansion> parts;
        parts.reserve(count);
        if (settings_.parallel && count > 1) {
            std::vector<std::future<Expansion>> futures;
            futures.reserve(count);
            for (std::size_t i = first; i < plot.sentences.size(); ++i)
                futures.push_back(std::async(std::launch::async,
                                             [this, &plot, i, seed] { return expand_one(plot.sentences[i], seed); }));
            std::optional<StageError> failure;
            for (auto& f : futures) {
                try {
                    parts.push_back(f.get());
                } catch (const StageError& e) {
                    if (!failure) failure = e;
                }
            }
            if (failure) throw *failure;
        } else {
            for (std::size_t i = first; i < plot.sentences.size(); ++i) parts.push_back(expand_one(plot.sentences[i], seed));
        }

        std::vector<Dialogue> dialogues;
        std::vector<SceneDraft> drafts;
        for (auto& p : parts) {
            dialogues.push_back(std::move(p.dialogue));
            drafts.push_back(std::move(p.scene));
        }
        return detail::in_stage("assemble", [&] {
            return assemble_script(plot, dialogues, drafts, settings_.banlist, first);
        });
    }

    static void check_script(const Script& script) {
        detail::in_stage("assemble", [&] {
            for (const auto& v : validate_script(script))
                throw Error(ErrorCode::InvalidArgument, v.invariant + ": " + v.message, v.scene_index);
        });
    }

    std::vector<PresentationSlot> retrieve(const Script& script, std::size_t first, Genre genre,
                                           std::vector<std::string>& warnings) const {
        std::vector<PresentationSlot> slots;
        if (!has_clips()) {
            for (std::size_t i = first; i < script.scenes.size(); ++i) slots.push_back(PresentationSlot{i, {}, false, 0.0, {}});
            if (std::find(warnings.begin(), warnings.end(), kEmptyIndexWarning) == warnings.end())
                warnings.emplace_back(kEmptyIndexWarning);
            return slots;
        }
        return detail::in_stage("retrieval", [&] {
            std::vector<std::string> queries;
            for (std::size_t i = first; i < script.scenes.size(); ++i) queries.push_back(script.scenes[i].source_sentence.text);
            auto embeddings = queries.empty() ? std::vector<Embedding>{} : backends_.embedder->embed_texts(queries);
            if (embeddings.size() != queries.size())
                throw Error(ErrorCode::BackendMalformedReply, "embedder returned the wrong number of vectors");
            for (std::size_t k = 0; k < queries.size(); ++k) {
                const auto& scene = script.scenes[first + k];
                auto result = retrieve_by_embedding(embeddings[k], *index_, constraints_for(scene, genre));
                PresentationSlot slot{first + k, {}, result.relaxed, 0.0, result.relaxed_filters};
                if (!result.hits.empty()) {
                    slot.clip = result.hits.front().clip;
                    slot.score = result.hits.front().score;
                }
                slots.push_back(std::move(slot));
            }
            return slots;
        });
    }

public:
    static RetrievalConstraints constraints_for(const Scene& scene, Genre genre) {
        RetrievalConstraints c;
        if (genre != Genre::GenreFree) c.genre = genre;
        if (scene.header.time_of_day != TimeOfDay::Unknown) c.time_of_day = scene.header.time_of_day;
        c.min_char_count = distinct_speakers(scene.turns);
        return c;
    }

private:
    Backends backends_;
    EngineSettings settings_;
    std::shared_ptr<const VideoIndex> index_;
};

// ---------------------------------------------------------------------------
// Sessions
// ---------------------------------------------------------------------------

/// Ordered clip references plus the music descriptor.
inline json presentation_payload(const Session& s) {
    json entries = json::array();
    if (s.status != SessionStatus::Pending) {
        for (const auto& slot : s.presentation) {
            json clip = nullptr;
            if (slot.clip)
                clip = json{{"id", slot.clip->id},
                            {"uri", slot.clip->video_uri},
                            {"start_s", slot.clip->start_s},
                            {"end_s", slot.clip->end_s},
                            {"caption", slot.clip->caption}};
            entries.push_back(json{{"scene_index", slot.scene_index},
                                   {"clip", clip},
                                   {"relaxed", slot.relaxed},
                                   {"relaxed_filters", slot.relaxed_filters},
                                   {"score", slot.score}});
        }
    }
    return json{{"id", s.id},
                {"status", s.status},
                {"entries", entries},
                {"music", s.music ? json(*s.music) : json(nullptr)}};
}

/// Full session view served to clients: the stored record plus rendered text.
inline json session_view(const Session& s) {
    json j = s;
    j["script_text"] = render_script(s.script);
    return j;
}

/// Runs sessions on a small worker pool. Work on one session (initial run or
/// steer) is serialized; reads never block on it.
class SessionManager {
public:
    SessionManager(std::shared_ptr<const Engine> engine, std::shared_ptr<SessionStore> store, std::size_t workers = 2)
        : engine_(std::move(engine)), store_(std::move(store)) {
        if (workers == 0) workers = 1;
        for (std::size_t i = 0; i < workers; ++i) threads_.emplace_back([this] { work(); });
    }

    SessionManager(const SessionManager&) = delete;
    SessionManager& operator=(const SessionManager&) = delete;

    ~SessionManager() {
        {
            std::lock_guard lock(queue_mu_);
            stopping_ = true;
        }
        queue_cv_.notify_all();
        for (auto& t : threads_) t.join();
    }

    /// Validates input, stores a pending session and queues the run.
    std::string create(Genre genre, const std::string& starting_words, std::optional<Seed> seed = std::nullopt) {
        if (text::trim_view(starting_words).empty())
            throw Error(ErrorCode::EmptyStartingWords, "starting words are blank");
        Session s;
        s.id = ids_.next();
        s.genre = genre;
        s.starting_words = starting_words;
        s.seed = seed.value_or(text::fnv1a64(s.id));
        store_->persist(s);
        {
            std::lock_guard lock(queue_mu_);
            queue_.push_back(s.id);
        }
        queue_cv_.notify_one();
        return s.id;
    }

    Session get(const std::string& id) { return store_->restore(id); }

    /// Blocks until the session is no longer pending or running.
    Session wait(const std::string& id, std::chrono::milliseconds timeout = std::chrono::seconds(60)) {
        auto deadline = std::chrono::steady_clock::now() + timeout;
        std::unique_lock lock(done_mu_);
        while (true) {
            auto s = store_->restore(id);
            if (s.status == SessionStatus::Complete || s.status == SessionStatus::Failed) return s;
            if (done_cv_.wait_until(lock, deadline) == std::cv_status::timeout) return store_->restore(id);
        }
    }

    Session steer(const std::string& id, SteerEvent event) {
        store_->restore(id);
        auto mu = session_mutex(id);
        std::lock_guard lock(*mu);
        auto s = store_->restore(id);
        try {
            engine_->steer(s, std::move(event));
        } catch (const StageError& e) {
            auto kept = store_->restore(id);
            kept.warnings.push_back("steer failed at " + e.stage() + ": " + e.cause());
            store_->persist(kept);
            throw;
        }
        store_->persist(s);
        return s;
    }

    json presentation(const std::string& id) { return presentation_payload(store_->restore(id)); }

private:
    std::shared_ptr<std::mutex> session_mutex(const std::string& id) {
        std::lock_guard lock(locks_mu_);
        auto& m = locks_[id];
        if (!m) m = std::make_shared<std::mutex>();
        return m;
    }

    void work() {
        while (true) {
            std::string id;
            {
                std::unique_lock lock(queue_mu_);
                queue_cv_.wait(lock, [this] { return stopping_ || !queue_.empty(); });
                if (stopping_ && queue_.empty()) return;
                id = std::move(queue_.front());
                queue_.pop_front();
            }
            run(id);
        }
    }

    void run(const std::string& id) {
        auto mu = session_mutex(id);
        {
            std::lock_guard lock(*mu);
            auto s = store_->restore(id);
            s.status = SessionStatus::Running;
            store_->persist(s);
            try {
                engine_->execute(s);
            } catch (const std::exception& e) {
                s.status = SessionStatus::Failed;
                s.failure = StageFailure{"pipeline", e.what()};
            }
            store_->persist(s);
        }
        std::lock_guard lock(done_mu_);
        done_cv_.notify_all();
    }

    std::shared_ptr<const Engine> engine_;
    std::shared_ptr<SessionStore> store_;
    UlidGenerator ids_;

    std::mutex queue_mu_;
    std::condition_variable queue_cv_;
    std::deque<std::string> queue_;
    bool stopping_ = false;
    std::vector<std::thread> threads_;

    std::mutex locks_mu_;
    std::map<std::string, std::shared_ptr<std::mutex>> locks_;

    std::mutex done_mu_;
    std::condition_variable done_cv_;
};

} // namespace vscript
