#pragma once

// Deterministic stand-ins for the four model roles. Every output is a pure
// function of the request (prompt, seed, decoding parameters); no member state
// is mutated after construction, so one instance can serve concurrent callers.

#include "vscript/backend.hpp"
#include "vscript/lexicon.hpp"
#include "vscript/text.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace vscript {

namespace mock {

inline constexpr std::string_view kSceneCue = "Scene:\n";
inline constexpr std::string_view kDialogueCue = "Dialogue:\n";

inline const std::vector<std::string>& neutral_nouns() {
    static const std::vector<std::string> v{
        "city",  "house",  "road",   "friend", "family",     "door",    "town",
        "letter", "secret", "truth", "river",  "morning",    "stranger", "brother",
        "car",   "window", "market", "photograph", "promise", "storm"};
    return v;
}

struct LocationEntry {
    std::string_view name;
    std::string_view setting;
};

inline const std::array<std::vector<LocationEntry>, 5>& locations() {
    static const std::array<std::vector<LocationEntry>, 5> v{{
        {{"POLICE STATION", "INT."}, {"BACK ALLEY", "EXT."}, {"INTERROGATION ROOM", "INT."},
         {"NIGHTCLUB", "INT."}, {"PARKING GARAGE", "INT./EXT."}},
        {{"SPACE STATION", "INT."}, {"LABORATORY", "INT."}, {"CONTROL ROOM", "INT."},
         {"CARGO BAY", "INT."}, {"LAUNCH PAD", "EXT."}},
        {{"TRENCH", "EXT."}, {"FIELD HOSPITAL", "INT."}, {"COMMAND TENT", "INT."},
         {"BOMBED VILLAGE", "EXT."}, {"BUNKER", "INT."}},
        {{"CAFE", "INT."}, {"BEACH", "EXT."}, {"APARTMENT", "INT."}, {"BALLROOM", "INT."},
         {"ROSE GARDEN", "EXT."}},
        {{"KITCHEN", "INT."}, {"STREET", "EXT."}, {"OFFICE", "INT."}, {"CAR", "INT./EXT."},
         {"LIVING ROOM", "INT."}},
    }};
    return v;
}

inline const std::vector<std::string>& speaker_names() {
    static const std::vector<std::string> v{"Amy",   "Ben",  "Carla", "Dev",   "Elena",
                                            "Frank", "Grace", "Hugo", "Iris",  "Jonah"};
    return v;
}

/// Cuts `s` after its first `max_words` whitespace-separated words.
inline std::string truncate_words(const std::string& s, int max_words) {
    int words = 0;
    bool in_word = false;
    for (std::size_t i = 0; i < s.size(); ++i) {
        bool space = text::is_space(s[i]);
        if (!space && !in_word) {
            if (words == max_words) return std::string(text::trim_view(std::string_view(s).substr(0, i)));
            ++words;
        }
        in_word = !space;
    }
    return s;
}

} // namespace mock

/// Lexicon-count genre classifier: p(g) = (count_g + eps) / sum_h (count_h + eps).
class LexiconClassifier final : public GenreClassifier {
public:
    explicit LexiconClassifier(LexiconSet lexicons = builtin_lexicons(), double epsilon = 0.1)
        : lexicons_(std::move(lexicons)), epsilon_(epsilon) {
        for (std::size_t g = 0; g < 4; ++g)
            for (const auto& t : lexicons_.tokens[g]) lookup_[g].insert(t);
    }

    [[nodiscard]] std::array<std::size_t, 4> lexicon_counts(std::string_view s) const {
        std::array<std::size_t, 4> counts{};
        for (const auto& tok : text::word_tokens(s))
            for (std::size_t g = 0; g < 4; ++g)
                if (lookup_[g].count(tok)) ++counts[g];
        return counts;
    }

    GenreDistribution classify_genre(const std::string& s) override {
        if (text::trim_view(s).empty()) throw Error(ErrorCode::EmptyText, "classify_genre");
        auto counts = lexicon_counts(s);
        double total = 0.0;
        for (auto c : counts) total += static_cast<double>(c) + epsilon_;
        GenreDistribution d;
        for (std::size_t g = 0; g < 4; ++g) d.probs[g] = (static_cast<double>(counts[g]) + epsilon_) / total;
        return d;
    }

private:
    LexiconSet lexicons_;
    double epsilon_;
    std::array<std::unordered_set<std::string>, 4> lookup_;
};

inline constexpr std::size_t kMockEmbeddingDim = 256;

/// Signed feature hashing of word tokens into 256 buckets, L2-normalized.
class HashEmbedder final : public Embedder {
public:
    [[nodiscard]] static Embedding embed_one(std::string_view s) {
        std::vector<double> acc(kMockEmbeddingDim, 0.0);
        for (const auto& tok : text::word_tokens(s)) {
            auto h = text::fnv1a64(tok);
            acc[h % kMockEmbeddingDim] += (h >> 63) ? 1.0 : -1.0;
        }
        double norm = 0.0;
        for (double x : acc) norm += x * x;
        norm = std::sqrt(norm);
        Embedding e;
        e.values.assign(kMockEmbeddingDim, 0.0f);
        if (norm == 0.0) {
            e.zero_sentinel = true;
            return e;
        }
        for (std::size_t i = 0; i < kMockEmbeddingDim; ++i) e.values[i] = static_cast<float>(acc[i] / norm);
        return e;
    }

    std::vector<Embedding> embed_texts(const std::vector<std::string>& texts) override {
        if (texts.empty()) throw Error(ErrorCode::InvalidArgument, "embed_texts needs at least one text");
        std::vector<Embedding> out;
        out.reserve(texts.size());
        for (const auto& t : texts) out.push_back(embed_one(t));
        return out;
    }
};

/// Hash-derived perplexity for plumbing tests. Carries no linguistic meaning.
class HashPerplexityScorer final : public PerplexityScorer {
public:
    PerplexityScore score_perplexity(const std::string& s) override {
        auto tokens = text::tokenize(s);
        if (tokens.empty()) throw Error(ErrorCode::EmptyText, "score_perplexity");
        double unit = static_cast<double>(text::fnv1a64(s) % 1000000ULL) / 1e6;
        return PerplexityScore{1.0 + 4.0 * unit, tokens.size()};
    }
};

/// Template-filling generator. Recognizes three prompt shapes: scene prompts
/// (ending "Scene:\n"), dialogue prompts ("Summary: ...\nDialogue:\n") and plot
/// prompts (everything else, optionally led by a genre control code).
class MockGenerator final : public TextGenerator {
public:
    explicit MockGenerator(LexiconSet lexicons = builtin_lexicons())
        : lexicons_(std::move(lexicons)), classifier_(lexicons_) {}

    std::vector<std::string> generate_text(const GenerationRequest& req) override {
        validate(req);
        std::uint64_t base = text::splitmix64(req.seed) ^ text::fnv1a64(req.prompt);
        base = text::derive_seed(base, "params",
                                 static_cast<std::uint64_t>(req.top_k) * 1000003ULL +
                                     static_cast<std::uint64_t>(req.max_new_tokens) * 7919ULL +
                                     static_cast<std::uint64_t>(std::llround(req.temperature * 1e6)));

        std::vector<std::string> out;
        out.reserve(static_cast<std::size_t>(req.num_candidates));
        for (int i = 0; i < req.num_candidates; ++i) {
            std::string candidate;
            for (std::uint64_t attempt = 0; attempt < 16; ++attempt) {
                text::SplitMix64 rng(text::derive_seed(base, "candidate",
                                                       static_cast<std::uint64_t>(i) * 64 + attempt));
                candidate = finish(compose(req.prompt, rng), req);
                if (std::find(out.begin(), out.end(), candidate) == out.end()) break;
            }
            out.push_back(std::move(candidate));
        }
        return out;
    }

private:
    static std::string finish(std::string s, const GenerationRequest& req) {
        if (req.stop_marker && !req.stop_marker->empty()) {
            auto pos = s.find(*req.stop_marker);
            if (pos != std::string::npos) s.resize(pos);
        }
        return mock::truncate_words(s, req.max_new_tokens);
    }

    std::string compose(const std::string& prompt, text::SplitMix64& rng) const {
        if (prompt.ends_with(mock::kSceneCue)) return compose_scene(prompt, rng);
        if (prompt.ends_with(mock::kDialogueCue) && prompt.find("Summary:") != std::string::npos)
            return compose_dialogue(prompt, rng);
        return compose_plot(prompt, rng);
    }

    // Genre whose lexicon dominates `s`; GenreFree (slot 4) when nothing matches.
    [[nodiscard]] std::size_t dominant_slot(std::string_view s) const {
        auto counts = classifier_.lexicon_counts(s);
        std::size_t best = 4;
        std::size_t best_count = 0;
        for (std::size_t g = 0; g < 4; ++g)
            if (counts[g] > best_count) {
                best = g;
                best_count = counts[g];
            }
        return best;
    }

    static std::optional<Genre> control_code_genre(std::string_view prompt) {
        constexpr std::string_view lead = "This is a ";
        if (!prompt.starts_with(lead)) return std::nullopt;
        auto rest = prompt.substr(lead.size());
        auto end = rest.find(" plot.");
        if (end == std::string_view::npos) return std::nullopt;
        return parse_genre(rest.substr(0, end));
    }

    std::string pick_noun(text::SplitMix64& rng, std::optional<Genre> genre, double focus) const {
        double u = rng.uniform();
        if (genre && u < focus) return rng.pick(lexicons_.of(*genre));
        if (u < focus + 0.15) return rng.pick(lexicons_.tokens[rng.below(4)]);
        return rng.pick(mock::neutral_nouns());
    }

    std::string predicate(text::SplitMix64& rng, std::optional<Genre> genre, double focus) const {
        static const std::vector<std::string> verbs{
            "finds",   "discovers", "follows",  "hides",     "fights", "chases",    "meets",
            "loses",   "protects",  "questions", "remembers", "betrays", "confronts", "searches for"};
        static const std::vector<std::string> adjectives{"secret", "broken", "distant", "quiet",
                                                         "strange", "dangerous", "last", "hidden"};
        static const std::vector<std::string> preps{"near", "behind", "inside", "beyond",
                                                    "after", "before", "with"};
        return rng.pick(verbs) + " the " + rng.pick(adjectives) + " " + pick_noun(rng, genre, focus) +
               " " + rng.pick(preps) + " the " + pick_noun(rng, genre, focus) + ".";
    }

    std::string compose_plot(const std::string& prompt, text::SplitMix64& rng) const {
        static const std::vector<std::string> subjects{"He", "She", "They", "The stranger",
                                                       "Her brother", "His partner", "An old friend"};
        auto genre = control_code_genre(prompt);
        double focus = genre ? 0.15 + 0.7 * rng.uniform() : 0.1;

        std::string out;
        auto tail = text::trim_view(prompt);
        bool needs_completion = !tail.empty() && tail.back() != '.' && tail.back() != '!' &&
                                tail.back() != '?';
        if (needs_completion) out += " " + predicate(rng, genre, focus);
        for (int s = 0; s < 2; ++s) out += " " + rng.pick(subjects) + " " + predicate(rng, genre, focus);
        return out;
    }

    std::string compose_dialogue(const std::string& prompt, text::SplitMix64& rng) const {
        static const std::vector<std::string> topical{
            "We need to talk about the {w}.",     "I never trusted the {w}.",
            "Where were you when the {w} started?", "Forget the {w}, we have to move.",
            "You think the {w} matters now?",     "I saw the {w} with my own eyes.",
            "Tell me everything about the {w}."};
        static const std::vector<std::string> filler{"Then we finish this tonight.",
                                                     "Nobody can know about this.",
                                                     "I am not leaving without you.",
                                                     "Keep your voice down."};
        static const std::unordered_set<std::string> stop{"they", "them", "their", "there", "with",
                                                          "that", "this", "from", "after", "before",
                                                          "behind", "inside", "beyond", "near", "the"};

        auto summary_begin = prompt.find("Summary:");
        auto summary_end = prompt.rfind(mock::kDialogueCue);
        auto summary = prompt.substr(summary_begin + 8, summary_end - summary_begin - 8);
        std::vector<std::string> topics;
        for (auto& w : text::word_tokens(summary))
            if (w.size() >= 4 && !stop.count(w)) topics.push_back(w);
        if (topics.empty()) topics = {"plan"};

        auto names = mock::speaker_names();
        std::vector<std::string> cast;
        std::size_t cast_size = rng.below(4) == 0 ? 3 : 2;
        while (cast.size() < cast_size) {
            auto n = rng.pick(names);
            if (std::find(cast.begin(), cast.end(), n) == cast.end()) cast.push_back(n);
        }

        std::size_t turns = 2 + rng.below(3);
        std::string out;
        for (std::size_t t = 0; t < turns; ++t) {
            std::string line = rng.below(3) == 0 ? rng.pick(filler) : rng.pick(topical);
            if (auto p = line.find("{w}"); p != std::string::npos) line.replace(p, 3, rng.pick(topics));
            out += cast[t % cast.size()] + ": " + line + "\n";
        }
        out += "\n" + std::string("Summary: ");
        return out;
    }

    std::string compose_scene(const std::string& prompt, text::SplitMix64& rng) const {
        static const std::vector<std::string> moods{"cold", "crowded", "silent", "dim", "bright",
                                                    "cramped"};
        static const std::vector<std::string> actions{"waits by the door", "paces the floor",
                                                      "stares out of the window",
                                                      "leans against the wall", "sits down slowly"};

        auto slot = dominant_slot(prompt);
        const auto& loc = rng.pick(mock::locations()[slot]);
        std::string time = rng.below(2) == 0 ? "DAY" : "NIGHT";

        std::vector<std::string> speakers;
        for (const auto& line : text::split_lines(prompt)) {
            auto colon = line.find(':');
            if (colon == std::string::npos || colon == 0) continue;
            auto name = line.substr(0, colon);
            if (name == "Dialogue" || name == "Scene") continue;
            if (std::find(speakers.begin(), speakers.end(), name) == speakers.end())
                speakers.push_back(name);
        }
        std::string who = speakers.empty() ? "Someone" : speakers.front();

        return std::string(loc.setting) + " " + std::string(loc.name) + " - " + time + "\n" +
               "The " + text::to_lower(loc.name) + " is " + rng.pick(moods) + ". " + who + " " +
               rng.pick(actions) + ".";
    }

    LexiconSet lexicons_;
    LexiconClassifier classifier_;
};

inline Backends make_mock_backends(const LexiconSet& lexicons = builtin_lexicons()) {
    return Backends{std::make_shared<MockGenerator>(lexicons),
                    std::make_shared<LexiconClassifier>(lexicons),
                    std::make_shared<HashEmbedder>(), std::make_shared<HashPerplexityScorer>()};
}

} // namespace vscript
