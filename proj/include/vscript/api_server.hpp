#pragma once

// Session HTTP API:
//   POST /v1/sessions                {genre, starting_words, seed?} -> 201 {id}
//   GET  /v1/sessions/{id}           full session view
//   POST /v1/sessions/{id}/steer     {genre?, words?}
//   GET  /v1/sessions/{id}/script    rendered script (text/plain)
//   GET  /v1/sessions/{id}/presentation
// Errors are {error, stage} with status 400, 404 or 502.

#include "vscript/backend_server.hpp"
#include "vscript/pipeline.hpp"

#include <httplib.h>

#include <filesystem>
#include <memory>
#include <string>

namespace vscript {

namespace detail {

inline void reply_error(httplib::Response& res, int status, const std::string& error, const json& stage,
                        const std::string& detail) {
    reply_json(res, status, json{{"error", error}, {"stage", stage}, {"detail", detail}});
}

inline int http_status_for(ErrorCode code) {
    switch (code) {
    case ErrorCode::UnknownSession: return 404;
    case ErrorCode::BackendUnavailable:
    case ErrorCode::BackendMalformedReply: return 502;
    case ErrorCode::CorruptSessionRecord: return 500;
    default: return 400;
    }
}

template <class F>
void api_guarded(httplib::Response& res, F&& f) {
    try {
        f();
    } catch (const StageError& e) {
        reply_error(res, 502, e.code() ? std::string(to_string(*e.code())) : "StageFailed", e.stage(), e.cause());
    } catch (const Error& e) {
        reply_error(res, http_status_for(e.code()), std::string(to_string(e.code())), nullptr, e.detail());
    } catch (const json::exception& e) {
        reply_error(res, 400, "InvalidArgument", nullptr, e.what());
    }
}

inline json parse_body(const httplib::Request& req) {
    auto body = req.body.empty() ? json::object() : json::parse(req.body);
    if (!body.is_object()) throw Error(ErrorCode::InvalidArgument, "request body must be an object");
    return body;
}

inline Genre genre_field(const json& body, const char* key) {
    auto it = body.find(key);
    if (it == body.end() || !it->is_string()) throw Error(ErrorCode::InvalidArgument, std::string(key) + " is required");
    auto g = parse_genre(it->get<std::string>());
    if (!g) throw Error(ErrorCode::InvalidArgument, "unknown genre '" + it->get<std::string>() + "'");
    return *g;
}

} // namespace detail

struct ApiOptions {
    std::optional<std::filesystem::path> static_dir;
};

inline void mount_api_routes(httplib::Server& server, std::shared_ptr<SessionManager> manager, ApiOptions options = {}) {
    server.set_post_routing_handler([](const httplib::Request&, httplib::Response& res) {
        res.set_header("Access-Control-Allow-Origin", "*");
        res.set_header("Access-Control-Allow-Headers", "Content-Type");
        res.set_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS");
    });
    server.Options(R"(/v1/.*)", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });

    server.Get("/healthz", [](const httplib::Request&, httplib::Response& res) {
        detail::reply_json(res, 200, json{{"ok", true}});
    });
    server.Get("/v1/config", [](const httplib::Request&, httplib::Response& res) {
        detail::reply_json(res, 200, json{{"api_base", ""}, {"genres", {"Crime", "Sci-Fi", "War", "Romance", "Genre-Free"}}});
    });

    server.Post("/v1/sessions", [manager](const httplib::Request& req, httplib::Response& res) {
        detail::api_guarded(res, [&] {
            auto body = detail::parse_body(req);
            auto genre = detail::genre_field(body, "genre");
            auto words = body.at("starting_words").get<std::string>();
            std::optional<Seed> seed;
            if (auto it = body.find("seed"); it != body.end() && !it->is_null()) seed = it->get<Seed>();
            auto id = manager->create(genre, words, seed);
            detail::reply_json(res, 201, json{{"id", id}});
        });
    });

    server.Get(R"(/v1/sessions/([0-9A-Za-z_-]+))", [manager](const httplib::Request& req, httplib::Response& res) {
        detail::api_guarded(res, [&] { detail::reply_json(res, 200, session_view(manager->get(req.matches[1]))); });
    });

    server.Get(R"(/v1/sessions/([0-9A-Za-z_-]+)/script)", [manager](const httplib::Request& req, httplib::Response& res) {
        detail::api_guarded(res, [&] {
            auto s = manager->get(req.matches[1]);
            res.status = 200;
            res.set_content(render_script(s.script), "text/plain; charset=utf-8");
        });
    });

    server.Get(R"(/v1/sessions/([0-9A-Za-z_-]+)/presentation)",
               [manager](const httplib::Request& req, httplib::Response& res) {
                   detail::api_guarded(res, [&] { detail::reply_json(res, 200, manager->presentation(req.matches[1])); });
               });

    server.Post(R"(/v1/sessions/([0-9A-Za-z_-]+)/steer)", [manager](const httplib::Request& req, httplib::Response& res) {
        detail::api_guarded(res, [&] {
            auto body = detail::parse_body(req);
            SteerEvent event;
            if (auto it = body.find("genre"); it != body.end() && !it->is_null())
                event.new_genre = detail::genre_field(body, "genre");
            if (auto it = body.find("words"); it != body.end() && !it->is_null())
                event.injected_words = it->get<std::string>();
            auto s = manager->steer(req.matches[1], std::move(event));
            detail::reply_json(res, 200, session_view(s));
        });
    });

    if (options.static_dir) server.set_mount_point("/", options.static_dir->string());
}

} // namespace vscript
