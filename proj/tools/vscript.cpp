#include "vscript/api_server.hpp"
#include "vscript/remote_backend.hpp"
#include "vscript/vscript.hpp"

#include <CLI11.hpp>

#include <csignal>
#include <fstream>
#include <iostream>

using namespace vscript;
namespace fs = std::filesystem;

namespace {

EngineConfig load_or_default(const std::string& path) { return path.empty() ? EngineConfig{} : load_config(path); }

std::shared_ptr<const VideoIndex> open_index(const std::optional<fs::path>& path) {
    if (!path) return nullptr;
    return std::make_shared<VideoIndex>(load_index(*path));
}

std::vector<std::string> read_lines(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::InvalidArgument, "cannot read " + path.string());
    std::vector<std::string> out;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        out.push_back(line);
    }
    while (!out.empty() && text::trim_view(out.back()).empty()) out.pop_back();
    return out;
}

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::InvalidArgument, "cannot write " + path.string());
    out << content;
}

Genre require_genre(const std::string& name) {
    auto g = parse_genre(name);
    if (!g) throw Error(ErrorCode::InvalidArgument, "unknown genre '" + name + "'");
    return *g;
}

httplib::Server* g_server = nullptr;
void stop_server(int) {
    if (g_server) g_server->stop();
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"vscript: genre-controlled script generation with clip retrieval"};
    app.require_subcommand(1);
    std::string config_path;
    app.add_option("--config", config_path, "engine config (JSON)")->check(CLI::ExistingFile);

    // generate
    auto* gen = app.add_subcommand("generate", "generate a script and its presentation");
    std::string genre_name, start;
    Seed seed = 0;
    std::string out_dir, index_dir;
    bool as_json = false;
    gen->add_option("--genre", genre_name, "Crime, Sci-Fi, War, Romance or Genre-Free")->required();
    gen->add_option("--start", start, "starting words")->required();
    gen->add_option("--seed", seed, "random seed");
    gen->add_option("--out", out_dir, "write script.txt, session.json and presentation.json here");
    gen->add_option("--index", index_dir, "video index directory");
    gen->add_flag("--json", as_json, "print the session as JSON instead of the script");

    // db
    auto* db = app.add_subcommand("db", "video database");
    db->require_subcommand(1);
    auto* build = db->add_subcommand("build", "build an index from annotation and caption files");
    std::string ann_dir, cap_dir, db_out, banlist_path;
    build->add_option("--annotations", ann_dir)->required()->check(CLI::ExistingDirectory);
    build->add_option("--captions", cap_dir)->required()->check(CLI::ExistingDirectory);
    build->add_option("--out", db_out)->required();
    build->add_option("--banlist", banlist_path)->check(CLI::ExistingFile);

    auto* query = db->add_subcommand("query", "rank clips for a sentence");
    std::string query_index, query_text, query_genre, query_time;
    std::size_t query_top = 5;
    std::optional<std::size_t> query_chars;
    query->add_option("--index", query_index)->required()->check(CLI::ExistingDirectory);
    query->add_option("--text", query_text)->required();
    query->add_option("--genre", query_genre);
    query->add_option("--time", query_time, "DAY or NIGHT");
    query->add_option("--min-chars", query_chars);
    query->add_option("--top", query_top);

    // eval
    auto* eval = app.add_subcommand("eval", "automatic metrics over one text per line");
    std::string cand_file, ref_file, metrics_list = "distinct,repeat", eval_genre;
    bool percent = false;
    eval->add_option("--candidates", cand_file)->required()->check(CLI::ExistingFile);
    eval->add_option("--references", ref_file)->check(CLI::ExistingFile);
    eval->add_option("--metrics", metrics_list, "comma list of distinct,repeat,bleu,sentsim,genre,ppl");
    eval->add_option("--genre", eval_genre, "target genre for the genre metric");
    eval->add_flag("--percent", percent, "report fractions as percentages");

    // serve
    auto* serve = app.add_subcommand("serve", "run the session API");
    int port = 8080;
    std::string host = "127.0.0.1", static_dir, serve_index;
    std::size_t workers = 2;
    serve->add_option("--port", port);
    serve->add_option("--host", host);
    serve->add_option("--index", serve_index)->check(CLI::ExistingDirectory);
    serve->add_option("--static", static_dir, "directory served at /")->check(CLI::ExistingDirectory);
    serve->add_option("--workers", workers);

    auto* serve_backends = app.add_subcommand("serve-backends", "serve the mock model backends over HTTP");
    int backend_port = 8090;
    serve_backends->add_option("--port", backend_port);
    serve_backends->add_option("--host", host);

    // corpus
    auto* corpus = app.add_subcommand("corpus", "training data");
    corpus->require_subcommand(1);
    auto* invert = corpus->add_subcommand("invert", "turn summarization records into dialogue training text");
    std::string corpus_in, corpus_out;
    invert->add_option("--input", corpus_in, "JSONL with summary and dialogue fields")->required()->check(CLI::ExistingFile);
    invert->add_option("--out", corpus_out)->required();

    CLI11_PARSE(app, argc, argv);

    try {
        auto cfg = load_or_default(config_path);

        if (*gen) {
            Engine engine(make_backends(cfg), make_engine_settings(cfg),
                          open_index(index_dir.empty() ? cfg.index_path : std::optional<fs::path>(index_dir)));
            auto session = engine.run_pipeline(require_genre(genre_name), start, seed);
            if (!out_dir.empty()) {
                fs::create_directories(out_dir);
                write_file(fs::path(out_dir) / "script.txt", render_script(session.script) + "\n");
                write_file(fs::path(out_dir) / "session.json", json(session).dump(2) + "\n");
                write_file(fs::path(out_dir) / "presentation.json", presentation_payload(session).dump(2) + "\n");
            }
            if (as_json) std::cout << session_view(session).dump(2) << "\n";
            else if (session.status == SessionStatus::Complete) std::cout << render_script(session.script) << "\n";
            for (const auto& w : session.warnings) std::cerr << "warning: " << w << "\n";
            if (session.failure) {
                std::cerr << "failed at " << session.failure->stage << ": " << session.failure->cause << "\n";
                return 2;
            }
            return 0;
        }

        if (*build) {
            auto backends = make_backends(cfg);
            auto banlist = banlist_path.empty() ? load_configured_banlist(cfg) : load_banlist(banlist_path, cfg.banlist_mode);
            auto result = build_database(ann_dir, cap_dir, *backends.classifier, *backends.embedder, banlist);
            save_index(result.index, db_out);
            std::cout << "indexed " << result.index.size() << " clips, rejected " << result.rejected.size() << "\n";
            for (const auto& r : result.rejected) std::cout << "  rejected " << r.id << ": " << r.reason << "\n";
            return 0;
        }

        if (*query) {
            auto backends = make_backends(cfg);
            auto index = load_index(query_index);
            RetrievalConstraints c;
            if (!query_genre.empty()) c.genre = require_genre(query_genre);
            if (!query_time.empty()) {
                auto t = parse_time_name(query_time);
                if (!t) throw Error(ErrorCode::InvalidArgument, "unknown time '" + query_time + "'");
                c.time_of_day = *t;
            }
            c.min_char_count = query_chars;
            auto result = retrieve_clip(query_text, index, c, *backends.embedder);
            json hits = json::array();
            for (std::size_t i = 0; i < result.hits.size() && i < query_top; ++i)
                hits.push_back(json{{"score", result.hits[i].score}, {"clip", result.hits[i].clip}});
            std::cout << json{{"relaxed", result.relaxed}, {"relaxed_filters", result.relaxed_filters}, {"hits", hits}}.dump(2)
                      << "\n";
            return 0;
        }

        if (*eval) {
            auto backends = make_backends(cfg);
            auto candidates = read_lines(cand_file);
            std::vector<std::string> references;
            if (!ref_file.empty()) references = read_lines(ref_file);
            std::vector<TokenSequence> cand_tokens;
            for (const auto& c : candidates) cand_tokens.push_back(to_tokens(c));

            MetricReport report;
            auto names = metrics_list;
            std::replace(names.begin(), names.end(), ',', ' ');
            for (const auto& m : text::split_whitespace(names)) {
                if (m == "distinct") {
                    for (int n = 1; n <= 3; ++n) report.distinct[n] = distinct_n(cand_tokens, static_cast<std::size_t>(n));
                } else if (m == "repeat") {
                    double sum = 0.0;
                    std::size_t count = 0;
                    for (const auto& t : cand_tokens) {
                        if (t.empty()) continue;
                        sum += repeat_rate(t);
                        ++count;
                    }
                    if (count == 0) throw Error(ErrorCode::EmptySequence, "no non-empty candidates");
                    report.repeat_pct = sum / static_cast<double>(count);
                } else if (m == "bleu" || m == "sentsim") {
                    if (references.empty()) throw Error(ErrorCode::InvalidArgument, m + " needs --references");
                    if (m == "bleu") {
                        std::vector<TokenSequence> refs;
                        for (const auto& r : references) refs.push_back(to_tokens(r));
                        report.bleu = corpus_bleu(cand_tokens, refs);
                    } else {
                        if (references.size() != candidates.size())
                            throw Error(ErrorCode::LengthMismatch, "candidates and references differ in length");
                        double sum = 0.0;
                        for (std::size_t i = 0; i < candidates.size(); ++i)
                            sum += sentence_similarity(candidates[i], references[i], *backends.embedder).value;
                        report.sent_sim = sum / static_cast<double>(candidates.size());
                    }
                } else if (m == "genre") {
                    if (eval_genre.empty()) throw Error(ErrorCode::InvalidArgument, "genre needs --genre");
                    std::vector<Genre> targets(candidates.size(), require_genre(eval_genre));
                    report.genre_acc = genre_accuracy(candidates, targets, *backends.classifier);
                } else if (m == "ppl") {
                    report.ppl = mean_perplexity(candidates, *backends.scorer);
                } else {
                    throw Error(ErrorCode::InvalidArgument, "unknown metric '" + m + "'");
                }
            }
            std::cout << report_to_json(report, percent ? 100.0 : 1.0).dump(2) << "\n";
            return 0;
        }

        if (*serve) {
            auto engine = std::make_shared<Engine>(
                make_backends(cfg), make_engine_settings(cfg),
                open_index(serve_index.empty() ? cfg.index_path : std::optional<fs::path>(serve_index)));
            auto store = std::make_shared<SessionStore>(cfg.session_dir);
            auto manager = std::make_shared<SessionManager>(engine, store, workers);
            httplib::Server server;
            ApiOptions options;
            if (!static_dir.empty()) options.static_dir = fs::path(static_dir);
            mount_api_routes(server, manager, options);
            g_server = &server;
            std::signal(SIGINT, stop_server);
            std::signal(SIGTERM, stop_server);
            std::cerr << "listening on http://" << host << ":" << port << "\n";
            if (!server.listen(host, port)) {
                std::cerr << "cannot bind " << host << ":" << port << "\n";
                return 1;
            }
            return 0;
        }

        if (*serve_backends) {
            httplib::Server server;
            mount_backend_routes(server, make_mock_backends(cfg.lexicon_dir ? load_lexicons(*cfg.lexicon_dir) : builtin_lexicons()));
            g_server = &server;
            std::signal(SIGINT, stop_server);
            std::signal(SIGTERM, stop_server);
            std::cerr << "mock backends on http://" << host << ":" << backend_port << "/v1\n";
            return server.listen(host, backend_port) ? 0 : 1;
        }

        if (*invert) {
            std::ifstream in(corpus_in);
            auto records = load_summarization_records(in);
            auto examples = invert_summarization_corpus(records);
            std::ofstream out(corpus_out, std::ios::binary);
            if (!out) throw Error(ErrorCode::InvalidArgument, "cannot write " + corpus_out);
            write_training_corpus(out, examples);
            std::cout << "wrote " << examples.size() << " training examples\n";
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
