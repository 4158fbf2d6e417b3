#pragma once

#include "vscript/backend.hpp"
#include "vscript/error.hpp"

#include <gtest/gtest.h>

#include <deque>
#include <functional>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

namespace testing_support {

template <class F>
vscript::ErrorCode code_of(F&& f) {
    try {
        f();
    } catch (const vscript::Error& e) {
        return e.code();
    }
    ADD_FAILURE() << "expected vscript::Error";
    return vscript::ErrorCode::StageFailed;
}

/// Replies from a queue; once empty, repeats the last reply.
class ScriptedGenerator final : public vscript::TextGenerator {
public:
    ScriptedGenerator(std::initializer_list<std::vector<std::string>> replies) : replies_(replies.begin(), replies.end()) {}

    std::vector<std::string> generate_text(const vscript::GenerationRequest& req) override {
        std::lock_guard lock(mu_);
        requests.push_back(req);
        if (replies_.size() > 1) {
            auto r = replies_.front();
            replies_.pop_front();
            return r;
        }
        return replies_.front();
    }

    std::vector<vscript::GenerationRequest> requests;

private:
    std::mutex mu_;
    std::deque<std::vector<std::string>> replies_;
};

/// Forwards to another generator and keeps every request.
class RecordingGenerator final : public vscript::TextGenerator {
public:
    explicit RecordingGenerator(std::shared_ptr<vscript::TextGenerator> inner) : inner_(std::move(inner)) {}

    std::vector<std::string> generate_text(const vscript::GenerationRequest& req) override {
        {
            std::lock_guard lock(mu_);
            requests.push_back(req);
        }
        if (hook) hook(req);
        return inner_->generate_text(req);
    }

    std::vector<std::string> prompts() {
        std::lock_guard lock(mu_);
        std::vector<std::string> out;
        for (const auto& r : requests) out.push_back(r.prompt);
        return out;
    }

    std::function<void(const vscript::GenerationRequest&)> hook;
    std::vector<vscript::GenerationRequest> requests;

private:
    std::mutex mu_;
    std::shared_ptr<vscript::TextGenerator> inner_;
};

/// Classifier returning a fixed target probability per exact text.
class TableClassifier final : public vscript::GenreClassifier {
public:
    std::function<vscript::GenreDistribution(const std::string&)> fn;
    vscript::GenreDistribution classify_genre(const std::string& t) override { return fn(t); }
};

} // namespace testing_support
