#ifndef CDI_HTTP_BACKEND_HPP
#define CDI_HTTP_BACKEND_HPP

#include <chrono>
#include <string>

#include "cdi/llm.hpp"

namespace cdi {

struct HttpBackendConfig {
    // Everything before "/chat/completions", e.g. "https://api.openai.com/v1".
    std::string base_url = "https://api.openai.com/v1";
    std::string api_key;
    std::chrono::seconds timeout{120};
};

/// Client for the JSON chat-completions API. Connection failures, 429 and
/// 5xx responses raise TransportError; other non-200 statuses and
/// malformed bodies raise CompileError.
class HttpChatBackend : public ChatBackend {
public:
    explicit HttpChatBackend(HttpBackendConfig config);
    std::string complete(const ChatRequest& request) override;

private:
    HttpBackendConfig config_;
    std::string origin_;
    std::string path_prefix_;
};

} // namespace cdi

#endif // CDI_HTTP_BACKEND_HPP
