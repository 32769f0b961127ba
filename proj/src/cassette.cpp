#include "cdi/cassette.hpp"

#include <algorithm>
#include <vector>

#include <json.hpp>
#include <openssl/evp.h>

#include "cdi/error.hpp"
#include "cdi/io.hpp"

namespace cdi {

namespace {

std::string sha256_hex(std::string_view data) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
        throw std::runtime_error("SHA-256 failed");
    }
    static constexpr char hex[] = "0123456789abcdef";
    std::string out;
    out.reserve(2 * len);
    for (unsigned int i = 0; i < len; ++i) {
        out += hex[digest[i] >> 4];
        out += hex[digest[i] & 0xf];
    }
    return out;
}

} // namespace

std::string request_digest(const ChatRequest& request) {
    nlohmann::ordered_json key;
    key["model"] = request.model;
    key["temperature"] = format_real(request.temperature);
    key["sample"] = request.sample;
    key["prompt"] = request.prompt;
    return sha256_hex(key.dump());
}

Cassette::Cassette(const Cassette& other) {
    std::lock_guard lock(other.mutex_);
    entries_ = other.entries_;
}

Cassette& Cassette::operator=(const Cassette& other) {
    if (this != &other) {
        std::scoped_lock lock(mutex_, other.mutex_);
        entries_ = other.entries_;
    }
    return *this;
}

Cassette Cassette::parse(std::string_view text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("cassette is not valid JSON: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("entries") || !doc["entries"].is_array()) {
        throw ParseError("cassette needs an 'entries' array");
    }
    Cassette c;
    for (const auto& e : doc["entries"]) {
        if (!e.is_object() || !e.contains("digest") || !e.contains("response") || !e["digest"].is_string() ||
            !e["response"].is_string()) {
            throw ParseError("cassette entries need string 'digest' and 'response'");
        }
        CassetteEntry entry;
        entry.digest = e["digest"].get<std::string>();
        entry.response = e["response"].get<std::string>();
        entry.model = e.value("model", "");
        entry.sample = e.value("sample", std::size_t{0});
        if (!c.entries_.emplace(entry.digest, entry).second) {
            throw ParseError("duplicate cassette digest " + entry.digest);
        }
    }
    return c;
}

Cassette Cassette::load(const std::string& path) {
    try {
        return parse(read_file(path));
    } catch (const ParseError& e) {
        throw ParseError(path + ": " + e.what());
    }
}

std::string Cassette::serialize() const {
    std::vector<CassetteEntry> sorted;
    {
        std::lock_guard lock(mutex_);
        for (const auto& [_, e] : entries_) {
            sorted.push_back(e);
        }
    }
    std::stable_sort(sorted.begin(), sorted.end(),
                     [](const CassetteEntry& a, const CassetteEntry& b) { return a.sample < b.sample; });
    nlohmann::ordered_json doc;
    doc["version"] = 1;
    auto entries = nlohmann::ordered_json::array();
    for (const auto& e : sorted) {
        nlohmann::ordered_json j;
        j["digest"] = e.digest;
        j["model"] = e.model;
        j["sample"] = e.sample;
        j["response"] = e.response;
        entries.push_back(std::move(j));
    }
    doc["entries"] = std::move(entries);
    return doc.dump(2) + "\n";
}

void Cassette::save(const std::string& path) const {
    write_file(path, serialize());
}

std::optional<std::string> Cassette::lookup(const ChatRequest& request) const {
    const auto digest = request_digest(request);
    std::lock_guard lock(mutex_);
    auto it = entries_.find(digest);
    if (it == entries_.end()) {
        return std::nullopt;
    }
    return it->second.response;
}

bool Cassette::add(const ChatRequest& request, std::string response) {
    CassetteEntry entry{request_digest(request), request.model, request.sample, std::move(response)};
    std::lock_guard lock(mutex_);
    return entries_.emplace(entry.digest, std::move(entry)).second;
}

std::size_t Cassette::size() const {
    std::lock_guard lock(mutex_);
    return entries_.size();
}

std::string ReplayBackend::complete(const ChatRequest& request) {
    auto hit = cassette_.lookup(request);
    if (!hit) {
        throw CassetteMiss("no cassette entry for sample " + std::to_string(request.sample) + " (digest " +
                           request_digest(request).substr(0, 12) + ")");
    }
    return *hit;
}

std::string RecordingBackend::complete(const ChatRequest& request) {
    std::string response = inner_.complete(request);
    cassette_.add(request, response);
    return response;
}

} // namespace cdi
