#pragma once

#include "vscript/domain.hpp"
#include "vscript/error.hpp"

#include <array>
#include <cmath>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace vscript {

inline constexpr int kMaxCandidatesPerRequest = 64;

struct GenerationRequest {
    std::string prompt;
    int max_new_tokens = 200;
    int top_k = 4;
    double temperature = 1.0;
    int num_candidates = 1;
    Seed seed = 0;
    std::optional<std::string> stop_marker;

    bool operator==(const GenerationRequest&) const = default;
};

/// Decoding parameters shared by every generation stage.
struct DecodeParams {
    int max_new_tokens = 200;
    int top_k = 4;
    double temperature = 1.0;

    bool operator==(const DecodeParams&) const = default;
};

inline GenerationRequest make_request(std::string prompt, const DecodeParams& params, Seed seed,
                                      int num_candidates = 1,
                                      std::optional<std::string> stop_marker = std::nullopt) {
    GenerationRequest r;
    r.prompt = std::move(prompt);
    r.max_new_tokens = params.max_new_tokens;
    r.top_k = params.top_k;
    r.temperature = params.temperature;
    r.num_candidates = num_candidates;
    r.seed = seed;
    r.stop_marker = std::move(stop_marker);
    return r;
}

inline void validate(const GenerationRequest& r) {
    if (r.max_new_tokens <= 0) throw Error(ErrorCode::InvalidArgument, "max_new_tokens must be > 0");
    if (r.top_k < 1) throw Error(ErrorCode::InvalidArgument, "top_k must be >= 1");
    if (!(r.temperature > 0.0)) throw Error(ErrorCode::InvalidArgument, "temperature must be > 0");
    if (r.num_candidates < 1 || r.num_candidates > kMaxCandidatesPerRequest)
        throw Error(ErrorCode::InvalidArgument, "num_candidates must be in [1, 64]");
}

/// Probabilities over the four classifiable genres, indexed by genre_slot().
struct GenreDistribution {
    std::array<double, 4> probs{0.25, 0.25, 0.25, 0.25};

    [[nodiscard]] double operator[](Genre g) const {
        if (g == Genre::GenreFree) throw Error(ErrorCode::InvalidArgument, "GenreFree has no probability");
        return probs[genre_slot(g)];
    }

    /// Unique maximum, or nullopt when the top probability is shared.
    [[nodiscard]] std::optional<Genre> strict_argmax() const {
        std::size_t best = 0;
        for (std::size_t i = 1; i < probs.size(); ++i)
            if (probs[i] > probs[best]) best = i;
        for (std::size_t i = 0; i < probs.size(); ++i)
            if (i != best && probs[i] == probs[best]) return std::nullopt;
        return kClassGenres[best];
    }

    /// First maximum in canonical genre order.
    [[nodiscard]] Genre argmax() const {
        std::size_t best = 0;
        for (std::size_t i = 1; i < probs.size(); ++i)
            if (probs[i] > probs[best]) best = i;
        return kClassGenres[best];
    }

    bool operator==(const GenreDistribution&) const = default;
};

inline bool is_normalized(const GenreDistribution& d, double tol = 1e-9) {
    double sum = 0.0;
    for (double p : d.probs) {
        if (!(p >= 0.0 && p <= 1.0)) return false;
        sum += p;
    }
    return std::abs(sum - 1.0) <= tol;
}

/// A unit vector, or the zero sentinel returned for text without tokens.
struct Embedding {
    std::vector<float> values;
    bool zero_sentinel = false;

    [[nodiscard]] std::size_t dim() const { return values.size(); }

    bool operator==(const Embedding&) const = default;
};

inline double l2_norm(std::span<const float> v) {
    double s = 0.0;
    for (float x : v) s += static_cast<double>(x) * static_cast<double>(x);
    return std::sqrt(s);
}

/// Cosine similarity in double precision; 0 when either side has zero norm.
inline double cosine(std::span<const float> a, std::span<const float> b) {
    if (a.size() != b.size()) throw Error(ErrorCode::InvalidArgument, "dimension mismatch");
    double dot = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) dot += static_cast<double>(a[i]) * static_cast<double>(b[i]);
    double na = l2_norm(a);
    double nb = l2_norm(b);
    if (na == 0.0 || nb == 0.0) return 0.0;
    return dot / (na * nb);
}

struct PerplexityScore {
    double mean_nll_per_token = 0.0;
    std::size_t token_count = 1;

    [[nodiscard]] double perplexity() const { return std::exp(mean_nll_per_token); }

    bool operator==(const PerplexityScore&) const = default;
};

class TextGenerator {
public:
    virtual ~TextGenerator() = default;
    /// Returns exactly `request.num_candidates` completions (continuations of the prompt).
    virtual std::vector<std::string> generate_text(const GenerationRequest& request) = 0;
};

class GenreClassifier {
public:
    virtual ~GenreClassifier() = default;
    virtual GenreDistribution classify_genre(const std::string& text) = 0;
};

class Embedder {
public:
    virtual ~Embedder() = default;
    virtual std::vector<Embedding> embed_texts(const std::vector<std::string>& texts) = 0;
};

class PerplexityScorer {
public:
    virtual ~PerplexityScorer() = default;
    virtual PerplexityScore score_perplexity(const std::string& text) = 0;
};

/// The four model roles the pipeline needs. Shared ownership so a bundle can
/// outlive the configuration that built it and be handed to server threads.
struct Backends {
    std::shared_ptr<TextGenerator> generator;
    std::shared_ptr<GenreClassifier> classifier;
    std::shared_ptr<Embedder> embedder;
    std::shared_ptr<PerplexityScorer> scorer;
};

} // namespace vscript
