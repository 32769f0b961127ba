#include "cdi/http_backend.hpp"

#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>
#include <json.hpp>

#include "cdi/error.hpp"

namespace cdi {

HttpChatBackend::HttpChatBackend(HttpBackendConfig config) : config_(std::move(config)) {
    const auto& url = config_.base_url;
    auto scheme_end = url.find("://");
    if (scheme_end == std::string::npos) {
        throw ParseError("backend URL must start with http:// or https://: " + url);
    }
    auto path_start = url.find('/', scheme_end + 3);
    origin_ = url.substr(0, path_start);
    path_prefix_ = path_start == std::string::npos ? "" : url.substr(path_start);
    while (!path_prefix_.empty() && path_prefix_.back() == '/') {
        path_prefix_.pop_back();
    }
}

std::string HttpChatBackend::complete(const ChatRequest& request) {
    httplib::Client client(origin_);
    client.set_connection_timeout(config_.timeout);
    client.set_read_timeout(config_.timeout);
    client.set_write_timeout(config_.timeout);

    httplib::Headers headers;
    if (!config_.api_key.empty()) {
        headers.emplace("Authorization", "Bearer " + config_.api_key);
    }
    nlohmann::json body;
    body["model"] = request.model;
    body["temperature"] = request.temperature;
    body["messages"] = nlohmann::json::array({{{"role", "user"}, {"content", request.prompt}}});

    auto res = client.Post(path_prefix_ + "/chat/completions", headers, body.dump(), "application/json");
    if (!res) {
        throw TransportError("request to " + origin_ + " failed: " + httplib::to_string(res.error()));
    }
    if (res->status == 429 || res->status >= 500) {
        throw TransportError("backend returned HTTP " + std::to_string(res->status));
    }
    if (res->status != 200) {
        throw CompileError("backend returned HTTP " + std::to_string(res->status), res->body);
    }
    try {
        auto doc = nlohmann::json::parse(res->body);
        return doc.at("choices").at(0).at("message").at("content").get<std::string>();
    } catch (const nlohmann::json::exception& e) {
        throw CompileError(std::string("unexpected chat-completion body: ") + e.what(), res->body);
    }
}

} // namespace cdi
