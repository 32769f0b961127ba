#ifndef CDI_LLM_HPP
#define CDI_LLM_HPP

#include <chrono>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "cdi/graph.hpp"
#include "cdi/proposition.hpp"

namespace cdi {

// Instruction block sent ahead of every proposition list.
extern const std::string_view kCoherenceInstruction;

std::string build_prompt(const std::vector<Proposition>& props);

struct RatedEdge {
    std::string u;
    std::string v;
    int rating = 0;

    bool operator==(const RatedEdge&) const = default;
};

/// Extracts the first well-formed `[('pA', 'pB', r), ...]` list in a chat
/// response. Prose and code fences around the list are skipped. Edges come
/// back with u before v in label order, in the order they were listed.
///
/// Throws ParseError when no list is found, a label is unknown, an edge is
/// a self-loop or repeats a pair, or a rating is not an integer in 0..10.
std::vector<RatedEdge> parse_rated_edges(std::string_view response, const LabelSet& known_labels);

// Renders edges back into the response list syntax.
std::string format_rated_edges(const std::vector<RatedEdge>& edges);

/// Affine map of the 0..10 consistency scale onto [-1, 1].
double rating_to_weight(int rating);

struct ChatRequest {
    std::string model;
    double temperature = 1.0;
    std::string prompt;
    // Ordinal of this request among repeated samples of the same prompt.
    std::size_t sample = 0;
};

/// A chat-completion endpoint. Implementations must be safe to call from
/// several threads at once.
class ChatBackend {
public:
    virtual ~ChatBackend() = default;
    virtual std::string complete(const ChatRequest& request) = 0;
};

// Network-level failure; worth retrying.
class TransportError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A sample that could not be turned into a graph. Carries whatever the
// model said so the caller can inspect it.
class CompileError : public std::runtime_error {
public:
    CompileError(const std::string& what, std::string raw_response)
        : std::runtime_error(what), raw_response_(std::move(raw_response)) {}

    const std::string& raw_response() const { return raw_response_; }

private:
    std::string raw_response_;
};

struct RetryPolicy {
    int transport_attempts = 3;
    // Parse failures say something about the model, so by default they are
    // not retried.
    int parse_attempts = 1;
    std::chrono::milliseconds base_delay{500};
    double backoff = 2.0;
};

struct CompileOptions {
    // Sampling parameters are configurable; these are
    // only defaults.
    std::string model = "o1-mini";
    double temperature = 1.0;
    RetryPolicy retry;
    std::size_t max_parallel = 1;
    std::size_t min_successes = 1;
};

CoherenceGraph compile_graph(const std::vector<Proposition>& props, ChatBackend& backend,
                             const CompileOptions& options = {}, std::size_t sample = 0);

struct SampleFailure {
    std::size_t sample = 0;
    std::string message;
    std::string raw_response;
};

struct SampleSet {
    std::vector<CoherenceGraph> graphs;
    // Sample ordinal of each entry in `graphs`.
    std::vector<std::size_t> samples;
    std::vector<SampleFailure> failures;
};

/// Runs `n` independent compilations (sample ordinals 0..n-1) and returns
/// the successes in ordinal order. Throws CompileError when fewer than
/// options.min_successes succeed.
SampleSet sample_graphs(const std::vector<Proposition>& props, ChatBackend& backend, std::size_t n,
                        const CompileOptions& options = {});

} // namespace cdi

#endif // CDI_LLM_HPP
