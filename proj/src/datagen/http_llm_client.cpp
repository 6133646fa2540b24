#include <chrono>
#include <cstdlib>
#include <thread>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "nl2gql/datagen.hpp"
#include "nl2gql/error.hpp"

namespace nl2gql {

HttpLlmClient::HttpLlmClient(HttpLlmOptions options) : options_(std::move(options)) {
    const std::size_t scheme = options_.base_url.find("://");
    if (scheme == std::string::npos) throw ConfigError("llm base_url needs a scheme: " + options_.base_url);
    const std::size_t slash = options_.base_url.find('/', scheme + 3);
    origin_ = options_.base_url.substr(0, slash);
    path_ = slash == std::string::npos ? "" : options_.base_url.substr(slash);
    while (!path_.empty() && path_.back() == '/') path_.pop_back();
    path_ += "/chat/completions";
    if (options_.model.empty()) throw ConfigError("llm model is not set");
    if (!options_.api_key_env.empty()) {
        const char* key = std::getenv(options_.api_key_env.c_str());
        if (!key || !*key) throw ConfigError("environment variable " + options_.api_key_env + " is not set");
        api_key_ = key;
    }
}

std::string HttpLlmClient::complete(const PromptSpec& prompt) {
    nlohmann::json body = {
        {"model", options_.model},
        {"messages", nlohmann::json::array({{{"role", "user"}, {"content", prompt.render()}}})},
        {"temperature", 0},
    };
    const std::string payload = body.dump();

    httplib::Headers headers;
    if (!api_key_.empty()) headers.emplace("Authorization", "Bearer " + api_key_);

    std::string last_error;
    for (int attempt = 0; attempt <= options_.retries; ++attempt) {
        if (attempt > 0) std::this_thread::sleep_for(std::chrono::milliseconds(200 * attempt));
        httplib::Client client(origin_);
        const auto timeout = std::chrono::duration<double>(options_.timeout_seconds);
        const auto sec = std::chrono::duration_cast<std::chrono::seconds>(timeout);
        const auto usec = std::chrono::duration_cast<std::chrono::microseconds>(timeout - sec);
        client.set_connection_timeout(sec.count(), usec.count());
        client.set_read_timeout(sec.count(), usec.count());
        client.set_write_timeout(sec.count(), usec.count());

        auto res = client.Post(path_, headers, payload, "application/json");
        if (!res) {
            last_error = "request failed: " + httplib::to_string(res.error());
            continue;
        }
        if (res->status == 429 || res->status >= 500) {
            last_error = "server returned " + std::to_string(res->status);
            continue;
        }
        if (res->status != 200) throw Error("llm endpoint returned " + std::to_string(res->status) + ": " + res->body);
        try {
            const auto j = nlohmann::json::parse(res->body);
            return j.at("choices").at(0).at("message").at("content").get<std::string>();
        } catch (const nlohmann::json::exception& ex) {
            throw Error(std::string("malformed llm response: ") + ex.what());
        }
    }
    throw Error("llm endpoint unavailable after " + std::to_string(options_.retries + 1) + " attempts: " + last_error);
}

} // namespace nl2gql
