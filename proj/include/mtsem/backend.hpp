#pragma once

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <memory>
#include <mutex>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "httplib.h"

namespace mtsem {

struct CompletionRequest {
    std::string prompt;
    std::string model;
    double temperature = 0.0;
    int max_tokens = 1024;
    std::chrono::milliseconds timeout = std::chrono::seconds(30);
};

struct TokenUsage {
    long long prompt_tokens = 0;
    long long completion_tokens = 0;
};

struct CompletionResult {
    std::string text;
    std::optional<TokenUsage> usage;
    std::chrono::milliseconds latency{0};
    int attempts = 1;
};

class BackendError : public std::runtime_error {
  public:
    enum class Kind {
        InvalidRequest,
        Transport,
        HttpStatus,
        Timeout,
        MalformedEnvelope,
        Unscripted,
    };

    BackendError(Kind kind, std::string message)
        : std::runtime_error(message), kind_(kind) {}

    Kind kind() const { return kind_; }

  private:
    Kind kind_;
};

/// Completion service. Implementations must be safe for concurrent calls.
class Backend {
  public:
    virtual ~Backend() = default;
    virtual CompletionResult complete(const CompletionRequest& request) = 0;

  protected:
    static void validate(const CompletionRequest& request) {
        if (request.temperature < 0.0 || request.temperature > 2.0)
            throw BackendError(BackendError::Kind::InvalidRequest,
                               "temperature must be within [0, 2]");
        if (request.max_tokens < 1)
            throw BackendError(BackendError::Kind::InvalidRequest, "max_tokens must be >= 1");
    }
};

inline std::string fnv1a_hex(std::string_view data) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return std::string(buf);
}

/// Scripted backend for tests and offline runs. Scripts are matched in order;
/// "exact" compares the whole prompt, "contains" looks for a substring. The
/// script table is immutable after construction; received prompts are recorded.
class MockBackend : public Backend {
  public:
    struct Script {
        enum class Match { Exact, Contains };
        Match match = Match::Contains;
        std::string pattern;
        std::string reply;
    };

    explicit MockBackend(std::vector<Script> scripts) : scripts_(std::move(scripts)) {}

    static std::vector<Script> load_scripts(const std::string& path) {
        std::ifstream in(path, std::ios::binary);
        if (!in) throw BackendError(BackendError::Kind::InvalidRequest,
                                    "cannot open mock script file '" + path + "'");
        nlohmann::json doc;
        try {
            in >> doc;
        } catch (const nlohmann::json::exception& e) {
            throw BackendError(BackendError::Kind::InvalidRequest,
                               "malformed mock script file '" + path + "': " + e.what());
        }
        std::vector<Script> scripts;
        for (const auto& item : doc) {
            Script s;
            std::string match = item.value("match", "contains");
            if (match == "exact") {
                s.match = Script::Match::Exact;
            } else if (match == "contains") {
                s.match = Script::Match::Contains;
            } else {
                throw BackendError(BackendError::Kind::InvalidRequest,
                                   "unknown mock match kind '" + match + "'");
            }
            s.pattern = item.at("pattern").get<std::string>();
            s.reply = item.at("reply").get<std::string>();
            scripts.push_back(std::move(s));
        }
        return scripts;
    }

    CompletionResult complete(const CompletionRequest& request) override {
        validate(request);
        {
            std::lock_guard<std::mutex> lock(mutex_);
            recorded_.push_back(request.prompt);
        }
        for (const Script& script : scripts_) {
            bool hit = script.match == Script::Match::Exact
                           ? request.prompt == script.pattern
                           : request.prompt.find(script.pattern) != std::string::npos;
            if (hit) {
                CompletionResult result;
                result.text = script.reply;
                return result;
            }
        }
        throw BackendError(BackendError::Kind::Unscripted,
                           "unscripted prompt (hash " + fnv1a_hex(request.prompt) + ")");
    }

    std::vector<std::string> recorded_prompts() const {
        std::lock_guard<std::mutex> lock(mutex_);
        return recorded_;
    }

  private:
    std::vector<Script> scripts_;
    mutable std::mutex mutex_;
    std::vector<std::string> recorded_;
};

/// Client for OpenAI-compatible chat-completion services. Sends the rendered
/// prompt as a single user message; the prompt carries its own system section.
class HttpBackend : public Backend {
  public:
    struct Config {
        std::string base_url;  // e.g. http://127.0.0.1:8080
        std::string api_key;
        int max_attempts = 3;            // total tries for 429/5xx responses
        std::chrono::milliseconds backoff{500};  // doubled after each retry
    };

    explicit HttpBackend(Config config) : config_(std::move(config)) {
        if (config_.base_url.empty())
            throw BackendError(BackendError::Kind::InvalidRequest,
                               "no API base URL configured (set MTSEM_API_BASE)");
    }

    static HttpBackend from_env() {
        Config config;
        if (const char* base = std::getenv("MTSEM_API_BASE")) config.base_url = base;
        if (const char* key = std::getenv("MTSEM_API_KEY")) config.api_key = key;
        return HttpBackend(std::move(config));
    }

    CompletionResult complete(const CompletionRequest& request) override {
        validate(request);
        nlohmann::json body;
        body["model"] = request.model;
        body["temperature"] = request.temperature;
        body["max_tokens"] = request.max_tokens;
        body["messages"] = nlohmann::json::array(
            {nlohmann::json{{"role", "user"}, {"content", request.prompt}}});
        const std::string payload = body.dump();

        auto start = std::chrono::steady_clock::now();
        std::chrono::milliseconds backoff = config_.backoff;
        int attempt = 0;
        while (true) {
            ++attempt;
            httplib::Client client(config_.base_url);
            auto secs = std::chrono::duration_cast<std::chrono::seconds>(request.timeout);
            client.set_connection_timeout(secs.count(), 0);
            client.set_read_timeout(secs.count(), 0);
            client.set_write_timeout(secs.count(), 0);
            httplib::Headers headers;
            if (!config_.api_key.empty())
                headers.emplace("Authorization", "Bearer " + config_.api_key);

            auto res = client.Post("/v1/chat/completions", headers, payload, "application/json");
            if (!res) {
                auto err = res.error();
                if (err == httplib::Error::ConnectionTimeout || err == httplib::Error::Read ||
                    err == httplib::Error::Write) {
                    throw BackendError(BackendError::Kind::Timeout,
                                       "request timed out: " + httplib::to_string(err));
                }
                throw BackendError(BackendError::Kind::Transport,
                                   "transport failure: " + httplib::to_string(err));
            }
            if (res->status == 429 || res->status >= 500) {
                if (attempt < config_.max_attempts) {
                    std::this_thread::sleep_for(backoff);
                    backoff *= 2;
                    continue;
                }
                throw BackendError(BackendError::Kind::HttpStatus,
                                   "HTTP " + std::to_string(res->status) + " after " +
                                       std::to_string(attempt) + " attempts: " +
                                       excerpt(res->body));
            }
            if (res->status < 200 || res->status >= 300) {
                throw BackendError(BackendError::Kind::HttpStatus,
                                   "HTTP " + std::to_string(res->status) + ": " +
                                       excerpt(res->body));
            }
            return parse_envelope(res->body, start, attempt);
        }
    }

  private:
    static std::string excerpt(const std::string& body) {
        constexpr std::size_t kMax = 200;
        if (body.size() <= kMax) return body;
        return body.substr(0, kMax) + "...";
    }

    static CompletionResult parse_envelope(const std::string& body,
                                           std::chrono::steady_clock::time_point start,
                                           int attempts) {
        nlohmann::json doc = nlohmann::json::parse(body, nullptr, false);
        if (doc.is_discarded() || !doc.contains("choices") || !doc["choices"].is_array() ||
            doc["choices"].empty() || !doc["choices"][0].contains("message") ||
            !doc["choices"][0]["message"].contains("content") ||
            !doc["choices"][0]["message"]["content"].is_string()) {
            throw BackendError(BackendError::Kind::MalformedEnvelope,
                               "malformed completion envelope: " + excerpt(body));
        }
        CompletionResult result;
        result.text = doc["choices"][0]["message"]["content"].get<std::string>();
        if (doc.contains("usage") && doc["usage"].is_object()) {
            TokenUsage usage;
            usage.prompt_tokens = doc["usage"].value("prompt_tokens", 0LL);
            usage.completion_tokens = doc["usage"].value("completion_tokens", 0LL);
            result.usage = usage;
        }
        result.latency = std::chrono::duration_cast<std::chrono::milliseconds>(
            std::chrono::steady_clock::now() - start);
        result.attempts = attempts;
        return result;
    }

    Config config_;
};

}  // namespace mtsem
