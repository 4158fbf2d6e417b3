#pragma once

// HTTP clients for externally hosted models. Endpoints:
//   POST /v1/generate  GenerationRequest          -> {"completions": [string]}
//   POST /v1/classify  {"text"}                   -> {"probs": {genre: p}}
//   POST /v1/embed     {"texts": [string]}        -> {"embeddings": [{"dim", "values"}]}
//   POST /v1/score     {"text"}                   -> {"mean_nll_per_token", "token_count"}

#include "vscript/backend.hpp"
#include "vscript/config.hpp"
#include "vscript/json_io.hpp"
#include "vscript/mock_backend.hpp"

#include <httplib.h>

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <optional>
#include <string>
#include <thread>

namespace vscript {

struct RemoteOptions {
    std::chrono::milliseconds timeout{30000};
    int retries = 1;
    std::chrono::milliseconds backoff{500};
    std::string bearer_token;
};

class RemoteEndpoint {
public:
    RemoteEndpoint(std::string base_url, RemoteOptions options)
        : options_(std::move(options)) {
        auto scheme = base_url.find("://");
        auto path_begin = base_url.find('/', scheme == std::string::npos ? 0 : scheme + 3);
        if (path_begin == std::string::npos) {
            origin_ = base_url;
        } else {
            origin_ = base_url.substr(0, path_begin);
            prefix_ = base_url.substr(path_begin);
            while (!prefix_.empty() && prefix_.back() == '/') prefix_.pop_back();
        }
    }

    [[nodiscard]] const std::string& origin() const { return origin_; }

    /// POSTs `body` and returns the parsed reply. Transport failures are retried
    /// `retries` times with a fixed backoff; HTTP errors are not retried.
    json post(const std::string& path, const json& body) const {
        std::string payload = body.dump();
        std::string last_error;
        for (int attempt = 0; attempt <= options_.retries; ++attempt) {
            if (attempt > 0) std::this_thread::sleep_for(options_.backoff);
            httplib::Client client(origin_);
            auto secs = std::chrono::duration_cast<std::chrono::seconds>(options_.timeout);
            auto usecs = std::chrono::duration_cast<std::chrono::microseconds>(options_.timeout - secs);
            client.set_connection_timeout(secs.count(), usecs.count());
            client.set_read_timeout(secs.count(), usecs.count());
            client.set_write_timeout(secs.count(), usecs.count());
            if (!options_.bearer_token.empty()) client.set_bearer_token_auth(options_.bearer_token);

            auto res = client.Post(prefix_ + path, payload, "application/json");
            if (!res) {
                last_error = "transport failure (" + httplib::to_string(res.error()) + ") calling " +
                             origin_ + prefix_ + path;
                continue;
            }
            if (res->status < 200 || res->status >= 300)
                throw Error(ErrorCode::BackendUnavailable,
                            "HTTP " + std::to_string(res->status) + " from " + path + ": " + res->body);
            try {
                return json::parse(res->body);
            } catch (const json::exception&) {
                throw Error(ErrorCode::BackendMalformedReply, res->body);
            }
        }
        throw Error(ErrorCode::BackendUnavailable, last_error);
    }

private:
    std::string origin_;
    std::string prefix_;
    RemoteOptions options_;
};

namespace detail {

template <class F>
auto decode_reply(const json& reply, F&& f) -> decltype(f()) {
    try {
        return f();
    } catch (const json::exception&) {
        throw Error(ErrorCode::BackendMalformedReply, reply.dump());
    } catch (const Error& e) {
        if (e.code() == ErrorCode::InvalidArgument) throw Error(ErrorCode::BackendMalformedReply, reply.dump());
        throw;
    }
}

} // namespace detail

class RemoteGenerator final : public TextGenerator {
public:
    RemoteGenerator(std::string url, RemoteOptions options = {}) : endpoint_(std::move(url), std::move(options)) {}

    std::vector<std::string> generate_text(const GenerationRequest& request) override {
        validate(request);
        auto reply = endpoint_.post("/v1/generate", json(request));
        auto completions = detail::decode_reply(
            reply, [&] { return reply.at("completions").get<std::vector<std::string>>(); });
        if (completions.size() != static_cast<std::size_t>(request.num_candidates))
            throw Error(ErrorCode::BackendMalformedReply,
                        "expected " + std::to_string(request.num_candidates) + " completions: " + reply.dump());
        return completions;
    }

private:
    RemoteEndpoint endpoint_;
};

class RemoteClassifier final : public GenreClassifier {
public:
    RemoteClassifier(std::string url, RemoteOptions options = {}) : endpoint_(std::move(url), std::move(options)) {}

    GenreDistribution classify_genre(const std::string& s) override {
        if (text::trim_view(s).empty()) throw Error(ErrorCode::EmptyText, "classify_genre");
        auto reply = endpoint_.post("/v1/classify", json{{"text", s}});
        auto dist = detail::decode_reply(reply, [&] { return reply.get<GenreDistribution>(); });
        if (!is_normalized(dist)) throw Error(ErrorCode::BackendMalformedReply, "unnormalized: " + reply.dump());
        return dist;
    }

private:
    RemoteEndpoint endpoint_;
};

class RemoteEmbedder final : public Embedder {
public:
    RemoteEmbedder(std::string url, RemoteOptions options = {}) : endpoint_(std::move(url), std::move(options)) {}

    std::vector<Embedding> embed_texts(const std::vector<std::string>& texts) override {
        if (texts.empty()) throw Error(ErrorCode::InvalidArgument, "embed_texts needs at least one text");
        auto reply = endpoint_.post("/v1/embed", json{{"texts", texts}});
        auto out = detail::decode_reply(reply, [&] {
            std::vector<Embedding> v;
            for (const auto& item : reply.at("embeddings")) {
                Embedding e;
                item.at("values").get_to(e.values);
                if (item.contains("dim") && item.at("dim").get<std::size_t>() != e.values.size())
                    throw Error(ErrorCode::InvalidArgument, "dim");
                v.push_back(std::move(e));
            }
            return v;
        });
        if (out.size() != texts.size())
            throw Error(ErrorCode::BackendMalformedReply, "embedding count mismatch: " + reply.dump());
        for (auto& e : out) {
            if (e.values.empty() || e.values.size() != out.front().values.size())
                throw Error(ErrorCode::BackendMalformedReply, "inconsistent dimensions");
            double norm = l2_norm(e.values);
            if (norm == 0.0)
                e.zero_sentinel = true;
            else if (std::abs(norm - 1.0) > 1e-6)
                throw Error(ErrorCode::BackendMalformedReply, "embedding is not unit length");
        }
        return out;
    }

private:
    RemoteEndpoint endpoint_;
};

class RemoteScorer final : public PerplexityScorer {
public:
    RemoteScorer(std::string url, RemoteOptions options = {}) : endpoint_(std::move(url), std::move(options)) {}

    PerplexityScore score_perplexity(const std::string& s) override {
        if (text::trim_view(s).empty()) throw Error(ErrorCode::EmptyText, "score_perplexity");
        auto reply = endpoint_.post("/v1/score", json{{"text", s}});
        auto score = detail::decode_reply(reply, [&] { return reply.get<PerplexityScore>(); });
        if (!(score.mean_nll_per_token >= 0.0) || !std::isfinite(score.mean_nll_per_token) ||
            score.token_count < 1)
            throw Error(ErrorCode::BackendMalformedReply, reply.dump());
        return score;
    }

private:
    RemoteEndpoint endpoint_;
};

struct BackendUrls {
    std::optional<std::string> generate;
    std::optional<std::string> classify;
    std::optional<std::string> embed;
    std::optional<std::string> score;
};

inline std::optional<std::string> env_url(const char* name) {
    const char* v = std::getenv(name);
    if (v == nullptr || *v == '\0') return std::nullopt;
    return std::string(v);
}

/// VSCRIPT_GEN_URL / VSCRIPT_CLS_URL / VSCRIPT_EMB_URL / VSCRIPT_SCORE_URL, each
/// overriding the matching configured URL.
inline BackendUrls urls_from_env(BackendUrls base = {}) {
    if (auto v = env_url("VSCRIPT_GEN_URL")) base.generate = v;
    if (auto v = env_url("VSCRIPT_CLS_URL")) base.classify = v;
    if (auto v = env_url("VSCRIPT_EMB_URL")) base.embed = v;
    if (auto v = env_url("VSCRIPT_SCORE_URL")) base.score = v;
    return base;
}

/// Remote client for every role with a URL, the deterministic mock otherwise.
inline Backends make_backends(const BackendUrls& urls, const RemoteOptions& options = {},
                              const LexiconSet& lexicons = builtin_lexicons()) {
    auto b = make_mock_backends(lexicons);
    if (urls.generate) b.generator = std::make_shared<RemoteGenerator>(*urls.generate, options);
    if (urls.classify) b.classifier = std::make_shared<RemoteClassifier>(*urls.classify, options);
    if (urls.embed) b.embedder = std::make_shared<RemoteEmbedder>(*urls.embed, options);
    if (urls.score) b.scorer = std::make_shared<RemoteScorer>(*urls.score, options);
    return b;
}

inline RemoteOptions remote_options(const BackendConfig& b) {
    RemoteOptions o;
    o.timeout = std::chrono::milliseconds(b.timeout_ms);
    o.retries = b.retries;
    o.backoff = std::chrono::milliseconds(b.backoff_ms);
    o.bearer_token = b.bearer_token;
    return o;
}

/// Backends for an engine config; environment URLs take precedence.
inline Backends make_backends(const EngineConfig& c) {
    BackendUrls urls{c.backends.generate_url, c.backends.classify_url, c.backends.embed_url, c.backends.score_url};
    auto lexicons = c.lexicon_dir ? load_lexicons(*c.lexicon_dir) : builtin_lexicons();
    return make_backends(urls_from_env(urls), remote_options(c.backends), lexicons);
}

} // namespace vscript
