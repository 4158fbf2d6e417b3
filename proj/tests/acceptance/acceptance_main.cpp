// Property checks for the core library. Prints one PASS/FAIL line per check and
// exits non-zero if any check fails.

#include "vscript/vscript.hpp"

#include "oracles.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

using namespace vscript;
namespace fs = std::filesystem;

namespace {

struct Check {
    bool ok = true;
    std::string detail;

    void fail(const std::string& why) {
        if (ok) detail = why;
        ok = false;
    }
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

std::string fmt(double v) {
    std::ostringstream o;
    o.precision(6);
    o << v;
    return o.str();
}

fs::path data_dir() { return VSCRIPT_DATA_DIR; }

fs::path scratch(const std::string& name) {
    auto p = fs::temp_directory_path() / ("vscript_acc_" + std::to_string(::getpid()) + "_" + name);
    fs::remove_all(p);
    return p;
}

// ---------------------------------------------------------------------------

Check metric_oracle() {
    Check c;
    std::mt19937_64 rng(2024);
    auto start = Clock::now();
    std::vector<TokenSequence> pool;
    for (int i = 0; i < 1000; ++i) {
        std::size_t len = 1 + rng() % 50;
        std::size_t alphabet = 1 + rng() % 10;
        TokenSequence s;
        for (std::size_t k = 0; k < len; ++k) s.push_back("t" + std::to_string(rng() % alphabet));
        pool.push_back(s);

        if (repeat_rate(s) != oracle::repeat_rate(s)) c.fail("repeat_rate differs on sequence " + std::to_string(i));
        for (std::size_t n = 1; n <= 3; ++n) {
            if (s.size() < n) {
                try {
                    distinct_n({s}, n);
                    c.fail("distinct_n accepted a sequence without n-grams");
                } catch (const Error& e) {
                    if (e.code() != ErrorCode::NoNgrams) c.fail("wrong error for short sequence");
                }
                continue;
            }
            if (distinct_n({s}, n) != oracle::distinct_n({s}, n))
                c.fail("distinct_" + std::to_string(n) + " differs on sequence " + std::to_string(i));
        }
    }
    for (std::size_t b = 0; b + 10 <= pool.size(); b += 10) {
        std::vector<TokenSequence> corpus(pool.begin() + b, pool.begin() + b + 10);
        for (std::size_t n = 1; n <= 3; ++n)
            if (distinct_n(corpus, n) != oracle::distinct_n(corpus, n)) c.fail("pooled distinct differs");
    }
    double t = seconds_since(start);
    if (t >= 5.0) c.fail("took " + fmt(t) + " s");
    if (c.ok) c.detail = "1000 sequences, exact match, " + fmt(t) + " s";
    return c;
}

Check bleu() {
    Check c;
    auto tok = [](const std::string& s) { return to_tokens(s); };
    std::vector<TokenSequence> same{tok("the cat sat on the mat"), tok("a quick brown fox jumps over it")};
    double identity = corpus_bleu(same, same);
    if (identity != 1.0) c.fail("identity gave " + fmt(identity));

    double brevity = corpus_bleu({tok("a b c d")}, {tok("a b c d e")});
    if (std::abs(brevity - std::exp(-0.25)) > 1e-9) c.fail("brevity case gave " + fmt(brevity));

    std::mt19937_64 rng(7);
    std::vector<TokenSequence> cands, refs;
    for (int i = 0; i < 20; ++i) {
        TokenSequence a, b;
        for (int k = 0; k < 8; ++k) {
            a.push_back("x" + std::to_string(rng() % 50));
            b.push_back("y" + std::to_string(rng() % 50));
        }
        cands.push_back(a);
        refs.push_back(b);
    }
    double disjoint = corpus_bleu(cands, refs);
    if (!(disjoint < 0.05)) c.fail("disjoint corpus gave " + fmt(disjoint));
    // A single 8-token pair stays above the floor: (16*14*12*10)^(-1/4).
    double single = corpus_bleu({cands[0]}, {refs[0]});
    if (c.ok)
        c.detail = "identity 1, brevity " + fmt(brevity) + ", disjoint 20 pairs " + fmt(disjoint) +
                   " (single 8-token pair " + fmt(single) + ")";
    return c;
}

Check rescoring() {
    Check c;
    MockGenerator gen;
    LexiconClassifier cls;
    RescoreConfig cfg;
    const std::array<Genre, 4> genres{Genre::Crime, Genre::SciFi, Genre::War, Genre::Romance};
    const std::array<const char*, 5> starts{"The man", "She opened the door", "At midnight", "Nobody expected",
                                            "The letter"};
    std::vector<std::string> rescored, first;
    std::vector<Genre> targets;
    for (int run = 0; run < 200; ++run) {
        Genre g = genres[run % 4];
        auto candidates = generate_plot_candidates(gen, g, starts[run % 5], cfg, static_cast<Seed>(run));
        auto first_text = candidates.front().text;
        auto sel = rescore_and_select(candidates, g, cls);
        double chosen = sel.candidates[sel.selected].target_genre_prob;
        for (const auto& cand : sel.candidates) {
            if (cls.classify_genre(cand.text)[g] > chosen) c.fail("run " + std::to_string(run) + " missed a better candidate");
        }
        if (cls.classify_genre(sel.candidates[sel.selected].text)[g] != chosen) c.fail("stored probability is stale");
        rescored.push_back(sel.candidates[sel.selected].text);
        first.push_back(first_text);
        targets.push_back(g);
    }
    double acc_rescored = genre_accuracy(rescored, targets, cls);
    double acc_first = genre_accuracy(first, targets, cls);
    if (acc_rescored < acc_first) c.fail("rescored accuracy " + fmt(acc_rescored) + " < first " + fmt(acc_first));
    if (c.ok) c.detail = "200 runs, Genre-ACC rescored " + fmt(acc_rescored) + " vs first " + fmt(acc_first);
    return c;
}

VideoIndex fixture_index(std::size_t n, std::mt19937_64& rng) {
    static const std::vector<std::string> words{"detective", "alien", "soldier", "kiss",  "rain",   "door",
                                                "night",     "ship",  "gun",     "letter", "war",   "moon",
                                                "river",     "car",   "robot",   "trench", "dance", "ring"};
    std::vector<ClipRecord> clips;
    for (std::size_t i = 0; i < n; ++i) {
        ClipRecord c;
        c.id = "clip" + std::to_string(i);
        c.video_uri = "v" + std::to_string(i % 17) + ".mp4";
        c.start_s = static_cast<double>(i % 5);
        c.end_s = c.start_s + 4.0;
        // Few words so that ties in score are common.
        do {
            c.caption.clear();
            std::size_t len = 1 + rng() % 3;
            for (std::size_t k = 0; k < len; ++k) c.caption += (k ? " " : "") + words[rng() % words.size()];
        } while (HashEmbedder::embed_one(c.caption).zero_sentinel);
        if (rng() % 4) c.genre_tag = static_cast<Genre>(rng() % 4);
        c.time_of_day = static_cast<TimeOfDay>(rng() % 3);
        for (std::size_t k = rng() % 4; k > 0; --k) c.genders.push_back(static_cast<Gender>(rng() % 3));
        std::sort(c.genders.begin(), c.genders.end());
        c.char_count = c.genders.size();
        clips.push_back(c);
    }
    HashEmbedder e;
    return build_index(clips, e);
}

RetrievalConstraints random_constraints(std::mt19937_64& rng) {
    RetrievalConstraints k;
    if (rng() % 2) k.genre = static_cast<Genre>(rng() % 5);
    if (rng() % 2) k.time_of_day = static_cast<TimeOfDay>(rng() % 3);
    if (rng() % 2) k.min_char_count = rng() % 4;
    if (rng() % 3 == 0) {
        std::vector<Gender> g;
        for (std::size_t n = 1 + rng() % 2; n > 0; --n) g.push_back(static_cast<Gender>(rng() % 3));
        k.required_genders = g;
    }
    return k;
}

/// Oracle relaxation: drop constraints in reverse filter order until the scan is non-empty.
std::pair<RetrievalConstraints, std::vector<std::string>> oracle_relax(const std::vector<float>& q,
                                                                       const VideoIndex& idx,
                                                                       RetrievalConstraints k) {
    std::vector<std::string> dropped;
    if (!oracle::scan(q, idx, k).empty()) return {k, dropped};
    k.required_genders.reset();
    dropped.push_back("genders");
    if (!oracle::scan(q, idx, k).empty()) return {k, dropped};
    k.min_char_count.reset();
    dropped.push_back("char_count");
    if (!oracle::scan(q, idx, k).empty()) return {k, dropped};
    k.time_of_day.reset();
    dropped.push_back("time_of_day");
    if (!oracle::scan(q, idx, k).empty()) return {k, dropped};
    k.genre.reset();
    dropped.push_back("genre");
    return {k, dropped};
}

Check retrieval() {
    Check c;
    std::mt19937_64 rng(99);
    std::size_t queries = 0, violations = 0, self_checked = 0;
    for (std::size_t size : {1u, 10u, 250u, 1000u}) {
        auto idx = fixture_index(size, rng);
        for (int q = 0; q < 125; ++q) {
            auto k = random_constraints(rng);
            const auto& probe = idx.clips[rng() % idx.size()];
            auto query = HashEmbedder::embed_one(rng() % 2 ? probe.caption : probe.caption + " rain");
            auto got = retrieve_by_embedding(query, idx, k);
            auto [effective, dropped] = oracle_relax(query.values, idx, k);
            auto expected = oracle::scan(query.values, idx, effective);
            ++queries;
            if (got.relaxed != !dropped.empty() || got.relaxed_filters != dropped) c.fail("relaxation mismatch");
            if (got.hits.size() != expected.size()) {
                c.fail("hit count differs at index size " + std::to_string(size));
                continue;
            }
            for (std::size_t i = 0; i < expected.size(); ++i) {
                if (got.hits[i].clip.id != expected[i].first || got.hits[i].score != expected[i].second) {
                    c.fail("ranking differs at position " + std::to_string(i));
                    break;
                }
            }
            for (const auto& h : got.hits)
                if (!oracle::clip_ok(h.clip, effective)) ++violations;
            if (!got.relaxed)
                for (const auto& h : got.hits)
                    if (!oracle::clip_ok(h.clip, k)) ++violations;
        }
        for (std::size_t i = 0; i < std::min<std::size_t>(idx.size(), 50); ++i) {
            auto query = HashEmbedder::embed_one(idx.clips[i].caption);
            auto got = retrieve_by_embedding(query, idx, {});
            bool found = false;
            for (const auto& h : got.hits)
                if (h.clip.id == idx.clips[i].id) found = std::abs(h.score - 1.0) <= 1e-6;
            if (!found || std::abs(got.hits.front().score - 1.0) > 1e-6) c.fail("self-query below 1");
            ++self_checked;
        }
    }
    if (violations) c.fail(std::to_string(violations) + " filter violations");
    if (c.ok)
        c.detail = std::to_string(queries) + " constrained queries match the scan, 0 violations, " +
                   std::to_string(self_checked) + " self-queries at 1.0";
    return c;
}

Check index_persistence() {
    Check c;
    std::mt19937_64 rng(31337);
    auto dir = scratch("index");
    for (int round = 0; round < 100; ++round) {
        auto idx = fixture_index(rng() % 60 + (round == 0 ? 0 : 1), rng);
        save_index(idx, dir);
        auto back = load_index(dir);
        if (!(back == idx)) {
            c.fail("round " + std::to_string(round) + " not field-equal");
            continue;
        }
        if (idx.empty()) continue;
        for (int q = 0; q < 5; ++q) {
            auto k = random_constraints(rng);
            auto query = HashEmbedder::embed_one(idx.clips[rng() % idx.size()].caption);
            auto a = retrieve_by_embedding(query, idx, k);
            auto b = retrieve_by_embedding(query, back, k);
            if (a.hits != b.hits || a.relaxed_filters != b.relaxed_filters) c.fail("rankings differ after reload");
        }
    }

    auto expect_corrupt = [&](const std::string& what, const std::function<void()>& damage) {
        save_index(fixture_index(5, rng), dir);
        damage();
        try {
            load_index(dir);
            c.fail(what + " loaded without error");
        } catch (const Error& e) {
            if (e.code() != ErrorCode::CorruptIndex) c.fail(what + " raised " + std::string(to_string(e.code())));
        }
    };
    auto vec = dir / "vectors.vsdb";
    auto man = dir / "manifest.jsonl";
    expect_corrupt("truncated matrix", [&] { fs::resize_file(vec, fs::file_size(vec) - 3); });
    expect_corrupt("bad magic", [&] {
        std::fstream f(vec, std::ios::in | std::ios::out | std::ios::binary);
        f.write("JUNK", 4);
    });
    expect_corrupt("missing manifest", [&] { fs::remove(man); });
    expect_corrupt("short manifest", [&] { fs::resize_file(man, 10); });
    expect_corrupt("extra bytes", [&] { std::ofstream(vec, std::ios::app | std::ios::binary) << "abcd"; });
    fs::remove_all(dir);
    if (c.ok) c.detail = "100 round-trips equal with identical rankings, 5 corruption cases rejected";
    return c;
}

bool is_plot_prompt(const std::string& p) {
    return !p.ends_with(mock::kSceneCue) && p.find(mock::kDialogueCue) == std::string::npos;
}

/// Mock generator with a fixed plot continuation; records plot prompts.
class FixedPlot final : public TextGenerator {
public:
    explicit FixedPlot(std::string continuation) : continuation_(std::move(continuation)) {}

    std::vector<std::string> generate_text(const GenerationRequest& req) override {
        if (is_plot_prompt(req.prompt)) {
            std::lock_guard lock(mu_);
            plot_prompts.push_back(req.prompt);
            return std::vector<std::string>(static_cast<std::size_t>(req.num_candidates), continuation_);
        }
        return mock_.generate_text(req);
    }

    std::vector<std::string> plot_prompts;

private:
    std::mutex mu_;
    std::string continuation_;
    MockGenerator mock_;
};

EngineSettings shipped_settings() {
    EngineSettings s;
    s.banlist = load_banlist(data_dir() / "banlist.txt");
    s.music = load_music_config(data_dir() / "music.json");
    return s;
}

std::shared_ptr<const VideoIndex> demo_index() {
    return std::make_shared<const VideoIndex>(load_index(data_dir() / "demo" / "index"));
}

Check e2e_determinism() {
    Check c;
    auto start = Clock::now();
    Engine engine(make_mock_backends(), shipped_settings(), demo_index());
    std::string script0, payload0;
    for (int i = 0; i < 10; ++i) {
        auto s = engine.run_pipeline(Genre::Crime, "The detective", 7);
        if (s.status != SessionStatus::Complete) {
            c.fail("run failed: " + (s.failure ? s.failure->cause : std::string("?")));
            break;
        }
        auto script = render_script(s.script);
        auto payload = presentation_payload(s).dump();
        if (i == 0) {
            script0 = script;
            payload0 = payload;
        } else if (script != script0 || payload != payload0) {
            c.fail("rerun " + std::to_string(i) + " differs");
        }
    }

    auto backends = make_mock_backends();
    backends.generator = std::make_shared<FixedPlot>(
        "walked into the station. The captain handed him a file. He read it twice.");
    Engine fixed(backends, shipped_settings(), demo_index());
    auto s = fixed.run_pipeline(Genre::Crime, "The detective", 3);
    if (s.plot.sentences.size() != 3) c.fail("fixture plot has " + std::to_string(s.plot.sentences.size()) + " sentences");
    if (s.script.scenes.size() != 3 || s.presentation.size() != 3)
        c.fail(std::to_string(s.script.scenes.size()) + " scenes, " + std::to_string(s.presentation.size()) + " slots");

    double t = seconds_since(start);
    if (t >= 10.0) c.fail("took " + fmt(t) + " s");
    if (c.ok) c.detail = "10 identical reruns, 3 sentences -> 3 scenes and 3 slots, " + fmt(t) + " s";
    return c;
}

Check steering() {
    Check c;
    auto backends = make_mock_backends();
    auto gen = std::make_shared<FixedPlot>("entered the dark alley. A shot rang out.");
    backends.generator = gen;
    Engine engine(backends, shipped_settings(), demo_index());

    auto s = engine.run_pipeline(Genre::Crime, "The detective", 21);
    if (s.status != SessionStatus::Complete) {
        c.fail("initial run failed");
        return c;
    }
    auto scene_hashes = [](const Session& x, std::size_t n) {
        std::vector<std::uint64_t> h;
        for (std::size_t i = 0; i < n; ++i)
            h.push_back(text::fnv1a64(json(x.script.scenes[i]).dump() + json(x.presentation[i]).dump()));
        return h;
    };
    std::size_t steps = 0;
    for (auto event : {SteerEvent{"", Genre::War, std::nullopt}, SteerEvent{"", std::nullopt, "The rain stopped."},
                       SteerEvent{"", Genre::Romance, "She smiled."}}) {
        auto n = s.script.scenes.size();
        auto before = scene_hashes(s, n);
        auto old_prompts = gen->plot_prompts.size();
        Genre expected_genre = event.new_genre.value_or(s.genre);
        engine.steer(s, event);
        ++steps;
        if (s.script.scenes.size() < n + 1) c.fail("steer " + std::to_string(steps) + " added no scene");
        if (scene_hashes(s, n) != before) c.fail("steer " + std::to_string(steps) + " changed a prior scene");
        if (gen->plot_prompts.size() != old_prompts + 1) {
            c.fail("unexpected plot prompt count");
            continue;
        }
        const auto& prompt = gen->plot_prompts.back();
        auto code = control_code(expected_genre) + " ";
        if (!prompt.starts_with(code)) c.fail("steer prompt lacks '" + code + "'");
    }
    if (gen->plot_prompts.front().starts_with(control_code(Genre::War))) c.fail("initial prompt already war");
    if (c.ok) c.detail = "3 steers appended scenes, prior hashes stable, control code switched";
    return c;
}

/// Sprinkles banned terms into every backend reply.
class InjectingGenerator final : public TextGenerator {
public:
    InjectingGenerator(std::vector<std::string> terms, std::uint64_t salt) : terms_(std::move(terms)), salt_(salt) {}

    std::vector<std::string> generate_text(const GenerationRequest& req) override {
        auto replies = mock_.generate_text(req);
        std::mt19937_64 rng(req.seed ^ salt_ ^ text::fnv1a64(req.prompt));
        for (auto& r : replies) r = inject(r, rng);
        return replies;
    }

private:
    std::string variant(std::mt19937_64& rng) {
        auto t = terms_[rng() % terms_.size()];
        switch (rng() % 3) {
        case 0: return text::to_upper(t);
        case 1: t[0] = text::upper(t[0]); return t;
        default: return t;
        }
    }

    std::string inject(const std::string& reply, std::mt19937_64& rng) {
        std::string out;
        std::size_t i = 0;
        while (i < reply.size()) {
            // Insert before a word start with probability 1/4.
            bool word_start = text::is_alnum(reply[i]) && (i == 0 || !text::is_alnum(reply[i - 1]));
            if (word_start && rng() % 4 == 0) {
                static const std::array<const char*, 4> tails{" ", ", ", "! ", "... "};
                out += variant(rng) + tails[rng() % tails.size()];
            }
            out.push_back(reply[i++]);
        }
        if (rng() % 2) out += " " + variant(rng) + ".";
        return out;
    }

    std::vector<std::string> terms_;
    std::uint64_t salt_;
    MockGenerator mock_;
};

/// Whole-word, case-insensitive search written independently of the filter.
std::size_t count_banned(const std::string& rendered, const std::vector<std::string>& terms) {
    std::string low;
    for (unsigned char ch : rendered) low.push_back(static_cast<char>(std::tolower(ch)));
    auto boundary = [&](std::size_t pos) {
        if (pos >= low.size()) return true;
        unsigned char ch = static_cast<unsigned char>(low[pos]);
        return !(std::isalnum(ch) || ch >= 0x80 || ch == '_');
    };
    std::size_t hits = 0;
    for (const auto& t : terms) {
        for (auto p = low.find(t); p != std::string::npos; p = low.find(t, p + 1)) {
            bool left = p == 0 || boundary(p - 1);
            if (left && boundary(p + t.size())) ++hits;
        }
    }
    return hits;
}

Check content_filter() {
    Check c;
    std::vector<std::string> terms{"damn", "bastard", "crap"};
    auto settings = shipped_settings();
    std::size_t leaks = 0, scripts = 0, redactions = 0;
    for (int i = 0; i < 500; ++i) {
        auto backends = make_mock_backends();
        backends.generator = std::make_shared<InjectingGenerator>(terms, static_cast<std::uint64_t>(i));
        Engine engine(backends, settings, nullptr);
        auto s = engine.run_pipeline(static_cast<Genre>(i % 5), "The stranger", static_cast<Seed>(i));
        if (s.status != SessionStatus::Complete) {
            c.fail("script " + std::to_string(i) + " failed: " + (s.failure ? s.failure->cause : ""));
            continue;
        }
        ++scripts;
        auto rendered = render_script(s.script);
        leaks += count_banned(rendered, terms);
        for (std::size_t p = rendered.find(kRedactionGlyph); p != std::string::npos;
             p = rendered.find(kRedactionGlyph, p + 1))
            ++redactions;
    }
    if (leaks) c.fail(std::to_string(leaks) + " banned terms in rendered output");
    if (redactions == 0) c.fail("nothing was injected");
    if (c.ok)
        c.detail = std::to_string(scripts) + " scripts, " + std::to_string(redactions) + " redactions, 0 leaks";
    return c;
}

std::vector<FrameAnnotation> frames(std::int64_t n) {
    std::vector<FrameAnnotation> v;
    for (std::int64_t s = 0; s < n; ++s) v.push_back(FrameAnnotation{s, {}, "", TimeOfDay::Unknown});
    return v;
}

Check speaker_filter() {
    Check c;
    auto face = [](double x, double area) { return FaceBox{x, 0.5, area, Gender::M}; };
    struct Case {
        std::string name;
        std::vector<FrameAnnotation> input;
        std::vector<TimeRange> expected;
    };
    std::vector<Case> cases;

    auto run = [&](std::int64_t from, std::vector<FaceBox> faces) {
        auto v = frames(10);
        for (std::size_t k = 0; k < faces.size(); ++k) v[from + k].faces = {faces[k]};
        return v;
    };
    cases.push_back({"run of 2", run(4, {face(0.5, 0.2), face(0.5, 0.2)}), {{0, 10}}});
    cases.push_back({"run of 3", run(4, {face(0.5, 0.2), face(0.5, 0.2), face(0.5, 0.2)}), {{0, 4}, {7, 10}}});
    cases.push_back({"drift 0.049", run(2, {face(0.5, 0.2), face(0.5245, 0.2), face(0.549, 0.2)}), {{0, 2}, {5, 10}}});
    cases.push_back({"drift 0.051", run(2, {face(0.5, 0.2), face(0.5255, 0.2), face(0.551, 0.2)}), {{0, 10}}});
    cases.push_back({"area 0.04", run(0, {face(0.5, 0.04), face(0.5, 0.04), face(0.5, 0.04)}), {{0, 10}}});
    cases.push_back({"area 0.05", run(0, {face(0.5, 0.05), face(0.5, 0.05), face(0.5, 0.05)}), {{3, 10}}});
    cases.push_back({"run ends at clip end", run(7, {face(0.5, 0.3), face(0.5, 0.3), face(0.5, 0.3)}), {{0, 7}}});

    for (const auto& k : cases) {
        auto got = filter_speaker_segments(k.input);
        if (got != k.expected) c.fail(k.name + " gave unexpected ranges");
    }
    if (c.ok) c.detail = std::to_string(cases.size()) + " boundary fixtures exact";
    return c;
}

} // namespace

int main() {
    std::vector<std::pair<std::string, std::function<Check()>>> checks{
        {"metric-oracle", metric_oracle},       {"bleu", bleu},
        {"rescoring-argmax", rescoring},        {"retrieval", retrieval},
        {"index-persistence", index_persistence}, {"e2e-determinism", e2e_determinism},
        {"steering", steering},                 {"content-filter", content_filter},
        {"speaker-filter", speaker_filter},
    };
    int failed = 0;
    for (const auto& [name, fn] : checks) {
        Check r;
        try {
            r = fn();
        } catch (const std::exception& e) {
            r.fail(std::string("exception: ") + e.what());
        }
        std::cout << (r.ok ? "PASS " : "FAIL ") << name << ": " << r.detail << std::endl;
        if (!r.ok) ++failed;
    }
    std::cout << (failed ? "FAILED " : "ALL PASSED ") << (checks.size() - failed) << "/" << checks.size() << std::endl;
    return failed ? 1 : 0;
}
