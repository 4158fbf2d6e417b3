#pragma once

#include "vscript/backend.hpp"
#include "vscript/domain.hpp"
#include "vscript/segment.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace vscript {

/// Sampling settings for plot candidates. Defaults: ten candidates drawn with
/// top-k sampling at k = 4.
struct RescoreConfig {
    int num_candidates = 10;
    int top_k = 4;
    int max_new_tokens = 200;
    double temperature = 1.0;

    [[nodiscard]] DecodeParams decode() const { return {max_new_tokens, top_k, temperature}; }

    bool operator==(const RescoreConfig&) const = default;
};

/// The genre control code, e.g. "This is a crime plot."; empty for GenreFree.
inline std::string control_code(Genre genre) {
    switch (genre) {
    case Genre::Crime: return "This is a crime plot.";
    case Genre::SciFi: return "This is a sci-fi plot.";
    case Genre::War: return "This is a war plot.";
    case Genre::Romance: return "This is a romance plot.";
    case Genre::GenreFree: return {};
    }
    return {};
}

inline std::string with_control_code(Genre genre, std::string_view body) {
    auto code = control_code(genre);
    return code.empty() ? std::string(body) : code + " " + std::string(body);
}

inline std::string build_plot_prompt(Genre genre, std::string_view starting_words) {
    if (text::trim_view(starting_words).empty())
        throw Error(ErrorCode::EmptyStartingWords, "starting words are blank");
    return with_control_code(genre, starting_words);
}

namespace detail {

/// Joins the text the prompt ended with and a backend completion. Echoed
/// prompts and bare control codes are stripped from the completion first.
inline std::string join_continuation(std::string_view prompt, std::string_view lead,
                                     std::string_view completion, Genre genre) {
    if (completion.starts_with(prompt)) completion.remove_prefix(prompt.size());
    auto trimmed = text::trim_view(completion);
    auto code = control_code(genre);
    if (!code.empty() && trimmed.starts_with(code)) trimmed = text::trim_view(trimmed.substr(code.size()));
    std::string out(text::trim_view(lead));
    if (!trimmed.empty()) {
        bool attach = trimmed.front() == ',' || trimmed.front() == '.' || trimmed.front() == ';' ||
                      trimmed.front() == '!' || trimmed.front() == '?';
        if (!attach && !out.empty()) out += ' ';
        out += trimmed;
    }
    return text::normalize_whitespace(out);
}

} // namespace detail

/// Samples `cfg.num_candidates` continuations of `prompt`; each candidate's text
/// is `lead` followed by its continuation. Used both for fresh plots (lead =
/// starting words) and for steering (lead = existing plot + injected words).
inline std::vector<PlotCandidate> sample_plot_candidates(TextGenerator& generator, Genre genre,
                                                         const std::string& prompt, std::string_view lead,
                                                         const RescoreConfig& cfg, Seed seed) {
    auto completions =
        generator.generate_text(make_request(prompt, cfg.decode(), seed, cfg.num_candidates));
    std::vector<PlotCandidate> out;
    bool any_content = false;
    for (std::size_t i = 0; i < completions.size(); ++i) {
        std::string_view c = completions[i];
        if (c.starts_with(prompt)) c.remove_prefix(prompt.size());
        if (!text::trim_view(c).empty()) any_content = true;
        out.push_back(PlotCandidate{detail::join_continuation(prompt, lead, completions[i], genre), i, 0.0, false});
    }
    if (!any_content) throw Error(ErrorCode::AllCandidatesEmpty, "every completion was blank");
    return out;
}

inline std::vector<PlotCandidate> generate_plot_candidates(TextGenerator& generator, Genre genre,
                                                           std::string_view starting_words,
                                                           const RescoreConfig& cfg, Seed seed) {
    auto prompt = build_plot_prompt(genre, starting_words);
    return sample_plot_candidates(generator, genre, prompt, starting_words, cfg, seed);
}

struct PlotSelection {
    Plot plot;
    std::vector<PlotCandidate> candidates;
    std::size_t selected = 0;
};

/// Classifies every candidate (filling target_genre_prob) and returns the
/// position of the one most likely to belong to `genre`; ties go to the lowest
/// candidate index. Candidates whose classification fails are skipped.
inline std::size_t select_best_candidate(std::vector<PlotCandidate>& candidates, Genre genre,
                                         GenreClassifier& classifier) {
    if (genre == Genre::GenreFree)
        throw Error(ErrorCode::InvalidArgument, "GenreFree plots are not rescored");
    if (candidates.empty()) throw Error(ErrorCode::InvalidArgument, "no candidates to rescore");

    std::optional<std::size_t> best;
    std::string last_failure;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        auto& c = candidates[i];
        try {
            c.target_genre_prob = classifier.classify_genre(c.text)[genre];
            c.scored = true;
        } catch (const Error& e) {
            c.scored = false;
            last_failure = e.what();
            continue;
        }
        if (!best) {
            best = i;
            continue;
        }
        const auto& b = candidates[*best];
        if (c.target_genre_prob > b.target_genre_prob ||
            (c.target_genre_prob == b.target_genre_prob && c.candidate_index < b.candidate_index))
            best = i;
    }
    if (!best) throw Error(ErrorCode::NoScorableCandidate, last_failure);
    return *best;
}

inline PlotSelection rescore_and_select(std::vector<PlotCandidate> candidates, Genre genre,
                                        GenreClassifier& classifier) {
    PlotSelection out;
    out.selected = select_best_candidate(candidates, genre, classifier);
    out.plot.genre = genre;
    out.plot.sentences = segment_plot(candidates[out.selected].text);
    out.plot.text = text::normalize_whitespace(candidates[out.selected].text);
    out.candidates = std::move(candidates);
    return out;
}

inline Plot make_plot(std::string_view text, Genre genre) {
    Plot p;
    p.genre = genre;
    p.sentences = segment_plot(text);
    p.text = text::normalize_whitespace(text);
    return p;
}

/// Full plot stage: prompt, sample, and rescore. GenreFree draws a single
/// sample without a control code and skips rescoring.
inline PlotSelection generate_plot(const Backends& backends, Genre genre, std::string_view starting_words,
                                   const RescoreConfig& cfg, Seed seed) {
    if (genre == Genre::GenreFree) {
        auto single = cfg;
        single.num_candidates = 1;
        auto candidates = generate_plot_candidates(*backends.generator, genre, starting_words, single, seed);
        PlotSelection out;
        out.plot = make_plot(candidates.front().text, genre);
        out.candidates = std::move(candidates);
        return out;
    }
    auto candidates = generate_plot_candidates(*backends.generator, genre, starting_words, cfg, seed);
    return rescore_and_select(std::move(candidates), genre, *backends.classifier);
}

} // namespace vscript
