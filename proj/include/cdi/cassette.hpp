#ifndef CDI_CASSETTE_HPP
#define CDI_CASSETTE_HPP

#include <cstddef>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>

#include "cdi/llm.hpp"

namespace cdi {

// SHA-256 (hex) over model, temperature, sample ordinal and prompt.
std::string request_digest(const ChatRequest& request);

struct CassetteEntry {
    std::string digest;
    std::string model;
    std::size_t sample = 0;
    std::string response;
};

/// Recorded request/response pairs keyed by request digest.
///
/// Entries are written sorted by (sample, digest) so a recording made with
/// concurrent requests still produces a stable file.
class Cassette {
public:
    Cassette() = default;
    Cassette(const Cassette& other);
    Cassette& operator=(const Cassette& other);

    static Cassette parse(std::string_view text);
    static Cassette load(const std::string& path);

    std::string serialize() const;
    void save(const std::string& path) const;

    std::optional<std::string> lookup(const ChatRequest& request) const;

    // Returns false (and keeps the existing entry) if the digest is present.
    bool add(const ChatRequest& request, std::string response);

    std::size_t size() const;

private:
    mutable std::mutex mutex_;
    std::map<std::string, CassetteEntry> entries_;
};

class CassetteMiss : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Serves responses from a cassette; unknown requests raise CassetteMiss,
/// which is not retried.
class ReplayBackend : public ChatBackend {
public:
    explicit ReplayBackend(const Cassette& cassette) : cassette_(cassette) {}
    std::string complete(const ChatRequest& request) override;

private:
    const Cassette& cassette_;
};

// Forwards to another backend and appends every response to a cassette.
class RecordingBackend : public ChatBackend {
public:
    RecordingBackend(ChatBackend& inner, Cassette& cassette) : inner_(inner), cassette_(cassette) {}
    std::string complete(const ChatRequest& request) override;

private:
    ChatBackend& inner_;
    Cassette& cassette_;
};

} // namespace cdi

#endif // CDI_CASSETTE_HPP
