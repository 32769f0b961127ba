#include "cdi/llm.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <mutex>
#include <optional>
#include <set>
#include <thread>
#include <utility>

#include "cdi/error.hpp"

namespace cdi {

const std::string_view kCoherenceInstruction =
    "Imagine that you are a perfectly objective arbitrator with impeccable judgment and integrity. "
    "In response to a prompt of the form 'buildCoherence: ' below followed by a list of labeled "
    "propositions, please do the following: First, determine which pairs of propositions are "
    "substantively related. Second, for each related pair of propositions, determine their logical "
    "relationship, assuming that at least one is true, whether or not either actually is. I want you to "
    "ignore the truth, falsity or basis in fact of either claim. Third, based on your determination just "
    "above, numerically rate the relative consistency of the two propositions. Do not pay attention to or "
    "comment on the truth or basis in fact of either proposition independent of the other. Your rating of "
    "relative consistency should be on a scale from 0 to 10, with a value of 0 for a pair of propositions "
    "that are not at all consistent and a value of 10 for a pair of propositions that are totally "
    "consistent. I cannot emphasize enough that for your rating, I want you to ignore the truth or basis "
    "in fact of either proposition, since anything that is not consistent with reality cannot be true. If "
    "you determine that propositions are unrelated despite previously determining otherwise, omit that "
    "pair. To be clear, a pair of false but consistent claims should also be rated a 10. Meanwhile, a pair "
    "of propositions of which one is true and the other is false, should be rated a 0. Finally, construct "
    "a NetworkX graph where propositions are vertices and edges correspond to substantively related pairs "
    "of propositions, with weights given by the consistency ratings just above. Only return the edge list "
    "with proposition labels for vertices. i.e., return responses in this format (here 'p2', 'p3', 'p4', "
    "and 'p5' are labels): [('p2', 'p3', 0), ('p2', 'p5', 10), ('p3', 'p4', 9), ('p3', 'p5', 2)]. Order "
    "vertices (in edges) and edges (in the graph) lexicographically.";

std::string build_prompt(const std::vector<Proposition>& props) {
    if (props.size() < 2) {
        throw DomainError("a coherence prompt needs at least two propositions");
    }
    validate_propositions(props);
    std::string prompt(kCoherenceInstruction);
    prompt += "\n\nbuildCoherence: \n";
    prompt += format_propositions(props);
    return prompt;
}

namespace {

struct RawTuple {
    std::string u;
    std::string v;
    std::string rating;
};

class ListScanner {
public:
    explicit ListScanner(std::string_view s, std::size_t pos) : s_(s), pos_(pos) {}

    // Parses a bracketed tuple list starting at the current '['.
    std::optional<std::vector<RawTuple>> list() {
        if (!eat('[')) {
            return std::nullopt;
        }
        std::vector<RawTuple> out;
        skip_ws();
        if (eat(']')) {
            return out;
        }
        while (true) {
            auto t = tuple();
            if (!t) {
                return std::nullopt;
            }
            out.push_back(std::move(*t));
            skip_ws();
            if (eat(']')) {
                return out;
            }
            if (!eat(',')) {
                return std::nullopt;
            }
            skip_ws();
            if (eat(']')) {  // trailing comma
                return out;
            }
        }
    }

private:
    std::optional<RawTuple> tuple() {
        skip_ws();
        if (!eat('(')) {
            return std::nullopt;
        }
        RawTuple t;
        auto u = label();
        if (!u || !comma()) {
            return std::nullopt;
        }
        auto v = label();
        if (!v || !comma()) {
            return std::nullopt;
        }
        auto r = number();
        if (!r) {
            return std::nullopt;
        }
        skip_ws();
        if (!eat(')')) {
            return std::nullopt;
        }
        return RawTuple{std::move(*u), std::move(*v), std::move(*r)};
    }

    bool comma() {
        skip_ws();
        return eat(',');
    }

    std::optional<std::string> label() {
        skip_ws();
        if (pos_ >= s_.size()) {
            return std::nullopt;
        }
        const char q = s_[pos_];
        if (q == '\'' || q == '"') {
            auto end = s_.find(q, pos_ + 1);
            if (end == std::string_view::npos) {
                return std::nullopt;
            }
            std::string out(s_.substr(pos_ + 1, end - pos_ - 1));
            pos_ = end + 1;
            return out;
        }
        std::size_t start = pos_;
        while (pos_ < s_.size() && std::isalnum(static_cast<unsigned char>(s_[pos_]))) {
            ++pos_;
        }
        if (pos_ == start) {
            return std::nullopt;
        }
        return std::string(s_.substr(start, pos_ - start));
    }

    std::optional<std::string> number() {
        skip_ws();
        std::size_t start = pos_;
        if (pos_ < s_.size() && (s_[pos_] == '-' || s_[pos_] == '+')) {
            ++pos_;
        }
        std::size_t digits = 0;
        while (pos_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '.')) {
            ++pos_;
            ++digits;
        }
        if (digits == 0) {
            return std::nullopt;
        }
        return std::string(s_.substr(start, pos_ - start));
    }

    void skip_ws() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) {
            ++pos_;
        }
    }

    bool eat(char c) {
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    std::string_view s_;
    std::size_t pos_;
};

int parse_rating(const std::string& token) {
    // Accept "7" and "7.0"; anything fractional is not on the scale.
    std::string_view t = token;
    bool negative = false;
    if (!t.empty() && (t.front() == '-' || t.front() == '+')) {
        negative = t.front() == '-';
        t.remove_prefix(1);
    }
    auto dot = t.find('.');
    std::string_view whole = t.substr(0, dot);
    if (dot != std::string_view::npos) {
        auto frac = t.substr(dot + 1);
        if (!std::all_of(frac.begin(), frac.end(), [](char c) { return c == '0'; })) {
            throw ParseError("rating '" + token + "' is not an integer");
        }
    }
    if (whole.empty() || whole.size() > 6) {
        throw ParseError("rating '" + token + "' is outside 0..10");
    }
    int value = std::stoi(std::string(whole));
    if (negative) {
        value = -value;
    }
    if (value < 0 || value > 10) {
        throw ParseError("rating " + token + " is outside 0..10");
    }
    return value;
}

} // namespace

std::vector<RatedEdge> parse_rated_edges(std::string_view response, const LabelSet& known_labels) {
    std::optional<std::vector<RawTuple>> found;
    for (auto pos = response.find('['); pos != std::string_view::npos; pos = response.find('[', pos + 1)) {
        ListScanner scanner(response, pos);
        found = scanner.list();
        if (found) {
            break;
        }
    }
    if (!found) {
        throw ParseError("no edge list of the form [('pA', 'pB', rating), ...] found in response");
    }
    std::vector<RatedEdge> edges;
    std::set<std::pair<std::string, std::string>> seen;
    for (auto& t : *found) {
        for (const auto* l : {&t.u, &t.v}) {
            if (!known_labels.count(*l)) {
                throw ParseError("unknown label '" + *l + "' in edge list");
            }
        }
        if (t.u == t.v) {
            throw ParseError("self-loop on '" + t.u + "' in edge list");
        }
        RatedEdge e;
        e.rating = parse_rating(t.rating);
        if (LabelLess{}(t.v, t.u)) {
            std::swap(t.u, t.v);
        }
        e.u = t.u;
        e.v = t.v;
        if (!seen.emplace(e.u, e.v).second) {
            throw ParseError("duplicate edge (" + e.u + ", " + e.v + ") in edge list");
        }
        edges.push_back(std::move(e));
    }
    return edges;
}

std::string format_rated_edges(const std::vector<RatedEdge>& edges) {
    std::string out = "[";
    for (std::size_t i = 0; i < edges.size(); ++i) {
        if (i > 0) {
            out += ", ";
        }
        out += "('" + edges[i].u + "', '" + edges[i].v + "', " + std::to_string(edges[i].rating) + ")";
    }
    return out + "]";
}

double rating_to_weight(int rating) {
    if (rating < 0 || rating > 10) {
        throw DomainError("rating " + std::to_string(rating) + " is outside 0..10");
    }
    // (r - 5) is exact, so each weight is the correctly rounded r/5 - 1.
    return static_cast<double>(rating - 5) / 5.0;
}

namespace {

std::string request_with_retry(ChatBackend& backend, const ChatRequest& request, const RetryPolicy& retry) {
    auto delay = retry.base_delay;
    const int attempts = std::max(1, retry.transport_attempts);
    for (int attempt = 1;; ++attempt) {
        try {
            return backend.complete(request);
        } catch (const TransportError& e) {
            if (attempt >= attempts) {
                throw CompileError("backend failed after " + std::to_string(attempt) + " attempt(s): " + e.what(),
                                   "");
            }
        }
        if (delay.count() > 0) {
            std::this_thread::sleep_for(delay);
        }
        delay = std::chrono::milliseconds(static_cast<long long>(static_cast<double>(delay.count()) * retry.backoff));
    }
}

} // namespace

CoherenceGraph compile_graph(const std::vector<Proposition>& props, ChatBackend& backend,
                             const CompileOptions& options, std::size_t sample) {
    ChatRequest request{options.model, options.temperature, build_prompt(props), sample};
    std::vector<std::string> labels;
    labels.reserve(props.size());
    for (const auto& p : props) {
        labels.push_back(p.id);
    }
    const LabelSet known(labels.begin(), labels.end());
    const int attempts = std::max(1, options.retry.parse_attempts);
    for (int attempt = 1;; ++attempt) {
        std::string response = request_with_retry(backend, request, options.retry);
        try {
            std::vector<Edge> edges;
            for (const auto& e : parse_rated_edges(response, known)) {
                edges.push_back({e.u, e.v, rating_to_weight(e.rating)});
            }
            return CoherenceGraph(labels, edges);
        } catch (const ParseError& e) {
            if (attempt >= attempts) {
                throw CompileError(std::string("could not parse response: ") + e.what(), std::move(response));
            }
        }
    }
}

SampleSet sample_graphs(const std::vector<Proposition>& props, ChatBackend& backend, std::size_t n,
                        const CompileOptions& options) {
    if (n == 0) {
        throw DomainError("sample count must be at least 1");
    }
    struct Slot {
        std::optional<CoherenceGraph> graph;
        std::optional<SampleFailure> failure;
    };
    std::vector<Slot> slots(n);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < n; i = next++) {
            try {
                slots[i].graph = compile_graph(props, backend, options, i);
            } catch (const CompileError& e) {
                slots[i].failure = SampleFailure{i, e.what(), e.raw_response()};
            } catch (const std::runtime_error& e) {
                slots[i].failure = SampleFailure{i, e.what(), ""};
            }
        }
    };
    const std::size_t threads = std::clamp<std::size_t>(options.max_parallel, 1, n);
    if (threads == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t t = 0; t < threads; ++t) {
            pool.emplace_back(worker);
        }
    }
    SampleSet out;
    for (std::size_t i = 0; i < n; ++i) {
        if (slots[i].graph) {
            out.graphs.push_back(std::move(*slots[i].graph));
            out.samples.push_back(i);
        } else {
            out.failures.push_back(std::move(*slots[i].failure));
        }
    }
    const std::size_t needed = std::max<std::size_t>(1, options.min_successes);
    if (out.graphs.size() < needed) {
        std::string last = out.failures.empty() ? std::string() : out.failures.back().raw_response;
        throw CompileError(std::to_string(out.graphs.size()) + " of " + std::to_string(n) +
                               " samples succeeded; need at least " + std::to_string(needed) +
                               (out.failures.empty() ? "" : " (last failure: " + out.failures.back().message + ")"),
                           std::move(last));
    }
    return out;
}

} // namespace cdi
