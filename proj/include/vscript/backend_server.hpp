#pragma once

// Serves a Backends bundle over the model wire protocol. `vscript serve-backends`
// uses it to expose the mocks; tests use it to exercise the remote clients.

#include "vscript/backend.hpp"
#include "vscript/json_io.hpp"

#include <httplib.h>

namespace vscript {

namespace detail {

inline void reply_json(httplib::Response& res, int status, const json& body) {
    res.status = status;
    res.set_content(body.dump(), "application/json");
}

template <class F>
void guarded(httplib::Response& res, F&& f) {
    try {
        f();
    } catch (const Error& e) {
        int status = (e.code() == ErrorCode::EmptyText || e.code() == ErrorCode::InvalidArgument) ? 400 : 500;
        reply_json(res, status, json{{"error", std::string(to_string(e.code()))}, {"detail", e.detail()}});
    } catch (const json::exception& e) {
        reply_json(res, 400, json{{"error", "InvalidArgument"}, {"detail", e.what()}});
    }
}

} // namespace detail

inline void mount_backend_routes(httplib::Server& server, Backends backends) {
    server.Post("/v1/generate", [b = backends](const httplib::Request& req, httplib::Response& res) {
        detail::guarded(res, [&] {
            auto request = json::parse(req.body).get<GenerationRequest>();
            detail::reply_json(res, 200, json{{"completions", b.generator->generate_text(request)}});
        });
    });
    server.Post("/v1/classify", [b = backends](const httplib::Request& req, httplib::Response& res) {
        detail::guarded(res, [&] {
            auto body = json::parse(req.body);
            detail::reply_json(res, 200, json(b.classifier->classify_genre(body.at("text").get<std::string>())));
        });
    });
    server.Post("/v1/embed", [b = backends](const httplib::Request& req, httplib::Response& res) {
        detail::guarded(res, [&] {
            auto body = json::parse(req.body);
            json out = json::array();
            for (const auto& e : b.embedder->embed_texts(body.at("texts").get<std::vector<std::string>>()))
                out.push_back(json{{"dim", e.dim()}, {"values", e.values}});
            detail::reply_json(res, 200, json{{"embeddings", out}});
        });
    });
    server.Post("/v1/score", [b = backends](const httplib::Request& req, httplib::Response& res) {
        detail::guarded(res, [&] {
            auto body = json::parse(req.body);
            detail::reply_json(res, 200, json(b.scorer->score_perplexity(body.at("text").get<std::string>())));
        });
    });
}

} // namespace vscript
