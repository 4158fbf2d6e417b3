#pragma once

// Automatic metrics for generated text: Distinct-n, Repeat@8, corpus BLEU,
// sentence-embedding similarity, genre accuracy and perplexity. All of them
// share one tokenizer (text::tokenize).

#include "vscript/backend.hpp"
#include "vscript/domain.hpp"
#include "vscript/json_io.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace vscript {

using TokenSequence = std::vector<std::string>;

inline TokenSequence to_tokens(std::string_view s) { return text::tokenize(s); }

namespace detail {

inline std::vector<std::string> ngrams(const TokenSequence& seq, std::size_t n) {
    std::vector<std::string> out;
    if (seq.size() < n) return out;
    for (std::size_t i = 0; i + n <= seq.size(); ++i) {
        std::string key;
        for (std::size_t k = 0; k < n; ++k) {
            if (k) key.push_back('\x1f');
            key += seq[i + k];
        }
        out.push_back(std::move(key));
    }
    return out;
}

} // namespace detail

/// Unique n-grams over total n-gram occurrences, pooled over the corpus.
inline double distinct_n(const std::vector<TokenSequence>& corpus, std::size_t n) {
    if (n < 1 || n > 3) throw Error(ErrorCode::InvalidArgument, "distinct_n supports n in {1, 2, 3}");
    std::set<std::string> unique;
    std::size_t total = 0;
    for (const auto& seq : corpus) {
        for (auto& g : detail::ngrams(seq, n)) {
            unique.insert(std::move(g));
            ++total;
        }
    }
    if (total == 0) throw Error(ErrorCode::NoNgrams, "every sequence is shorter than n=" + std::to_string(n));
    return static_cast<double>(unique.size()) / static_cast<double>(total);
}

inline constexpr std::size_t kRepeatWindow = 8;

/// Percentage of tokens that already occurred among the 8 tokens before them.
/// The first token is never a repeat; the denominator is the full length.
inline double repeat_rate(const TokenSequence& seq) {
    if (seq.empty()) throw Error(ErrorCode::EmptySequence, "repeat_rate");
    std::map<std::string, std::size_t> last_seen;
    std::size_t repeats = 0;
    for (std::size_t i = 0; i < seq.size(); ++i) {
        auto it = last_seen.find(seq[i]);
        if (it != last_seen.end() && i - it->second <= kRepeatWindow) ++repeats;
        last_seen[seq[i]] = i;
    }
    return 100.0 * static_cast<double>(repeats) / static_cast<double>(seq.size());
}

inline constexpr std::size_t kBleuOrder = 4;

/// Corpus BLEU-4 with clipped n-gram precision. A zero match count at order n
/// is replaced by 1 / (2 * candidate n-gram count); the brevity penalty uses
/// pooled candidate and reference lengths.
inline double corpus_bleu(const std::vector<TokenSequence>& candidates, const std::vector<TokenSequence>& references) {
    if (candidates.size() != references.size())
        throw Error(ErrorCode::LengthMismatch, std::to_string(candidates.size()) + " candidates vs " +
                                                   std::to_string(references.size()) + " references");
    if (candidates.empty()) throw Error(ErrorCode::EmptyCandidate, "empty corpus");

    std::array<std::size_t, kBleuOrder> matched{};
    std::array<std::size_t, kBleuOrder> total{};
    std::size_t c_len = 0;
    std::size_t r_len = 0;
    for (std::size_t s = 0; s < candidates.size(); ++s) {
        const auto& cand = candidates[s];
        const auto& ref = references[s];
        if (cand.empty()) throw Error(ErrorCode::EmptyCandidate, "candidate is empty", s);
        c_len += cand.size();
        r_len += ref.size();
        for (std::size_t n = 1; n <= kBleuOrder; ++n) {
            std::map<std::string, std::size_t> ref_counts;
            for (auto& g : detail::ngrams(ref, n)) ++ref_counts[g];
            std::map<std::string, std::size_t> cand_counts;
            for (auto& g : detail::ngrams(cand, n)) ++cand_counts[g];
            for (const auto& [g, count] : cand_counts) {
                auto it = ref_counts.find(g);
                matched[n - 1] += std::min(count, it == ref_counts.end() ? std::size_t{0} : it->second);
                total[n - 1] += count;
            }
        }
    }

    double log_sum = 0.0;
    for (std::size_t n = 0; n < kBleuOrder; ++n) {
        double denominator = static_cast<double>(std::max<std::size_t>(total[n], 1));
        double p = matched[n] == 0 ? 1.0 / (2.0 * denominator) : static_cast<double>(matched[n]) / denominator;
        log_sum += std::log(p);
    }
    double c = static_cast<double>(c_len);
    double r = static_cast<double>(r_len);
    double bp = c > r ? 1.0 : std::exp(1.0 - r / c);
    return bp * std::exp(log_sum / static_cast<double>(kBleuOrder));
}

struct SimilarityValue {
    double value = 0.0;
    bool degenerate = false; // one side embedded to the zero sentinel
};

inline SimilarityValue cosine_similarity(const Embedding& a, const Embedding& b) {
    if (a.zero_sentinel || b.zero_sentinel) return {0.0, true};
    return {cosine(a.values, b.values), false};
}

inline SimilarityValue sentence_similarity(const std::string& a, const std::string& b, Embedder& embedder) {
    if (text::trim_view(a).empty() || text::trim_view(b).empty())
        throw Error(ErrorCode::EmptyText, "sentence_similarity");
    auto e = embedder.embed_texts({a, b});
    return cosine_similarity(e[0], e[1]);
}

/// Share of texts whose unique classifier argmax equals the target genre.
inline double genre_accuracy(const std::vector<std::string>& texts, const std::vector<Genre>& targets,
                             GenreClassifier& classifier) {
    if (texts.size() != targets.size())
        throw Error(ErrorCode::LengthMismatch, std::to_string(texts.size()) + " texts vs " +
                                                   std::to_string(targets.size()) + " targets");
    if (texts.empty()) throw Error(ErrorCode::InvalidArgument, "genre_accuracy needs at least one text");
    std::size_t hits = 0;
    for (std::size_t i = 0; i < texts.size(); ++i) {
        if (targets[i] == Genre::GenreFree)
            throw Error(ErrorCode::InvalidArgument, "GenreFree is not a classifiable target", i);
        auto top = classifier.classify_genre(texts[i]).strict_argmax();
        if (top && *top == targets[i]) ++hits;
    }
    return static_cast<double>(hits) / static_cast<double>(texts.size());
}

/// Token-weighted corpus perplexity: exp(sum(nll_i * n_i) / sum(n_i)).
inline double pooled_perplexity(const std::vector<PerplexityScore>& scores) {
    if (scores.empty()) throw Error(ErrorCode::InvalidArgument, "no perplexity scores");
    double nll = 0.0;
    double tokens = 0.0;
    for (const auto& s : scores) {
        nll += s.mean_nll_per_token * static_cast<double>(s.token_count);
        tokens += static_cast<double>(s.token_count);
    }
    return std::exp(nll / tokens);
}

inline double mean_perplexity(const std::vector<std::string>& texts, PerplexityScorer& scorer) {
    if (texts.empty()) throw Error(ErrorCode::InvalidArgument, "mean_perplexity needs at least one text");
    std::vector<PerplexityScore> scores;
    scores.reserve(texts.size());
    for (const auto& t : texts) scores.push_back(scorer.score_perplexity(t));
    return pooled_perplexity(scores);
}

struct MetricReport {
    std::map<int, double> distinct;
    std::optional<double> repeat_pct;
    std::optional<double> bleu;
    std::optional<double> sent_sim;
    std::optional<double> genre_acc;
    std::optional<double> ppl;
};

/// `scale` multiplies the [0,1] fractions for display (100 shows percentages).
inline json report_to_json(const MetricReport& r, double scale = 1.0) {
    json j = json::object();
    json distinct = json::object();
    for (const auto& [n, v] : r.distinct) distinct[std::to_string(n)] = v * scale;
    j["distinct"] = distinct;
    auto opt = [&](const char* key, const std::optional<double>& v, double s) {
        j[key] = v ? json(*v * s) : json(nullptr);
    };
    opt("repeat_pct", r.repeat_pct, 1.0);
    opt("bleu", r.bleu, scale);
    opt("sent_sim", r.sent_sim, scale);
    opt("genre_acc", r.genre_acc, scale);
    opt("ppl", r.ppl, 1.0);
    return j;
}

} // namespace vscript
