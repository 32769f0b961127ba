#include "cdi/solver.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <optional>
#include <queue>
#include <thread>

#include <json.hpp>

#include "cdi/error.hpp"
#include "cdi/random.hpp"

namespace cdi {

namespace {

constexpr double kScale = 0x1.0p40;

using Mask = std::uint64_t;

// Vertices renumbered in label order so that bit order matches the
// canonical part order.
struct Problem {
    std::size_t n = 0;
    std::vector<std::string> labels;        // label order
    std::vector<std::int64_t> q;            // fixed-point weights, n x n
    Mask pinned_accepted = 0;
    Mask pinned_rejected = 0;
    std::vector<std::pair<std::size_t, std::size_t>> pairs;

    std::int64_t w(std::size_t i, std::size_t j) const { return q[i * n + j]; }

    std::size_t index(const std::string& label) const {
        auto it = std::lower_bound(labels.begin(), labels.end(), label, LabelLess{});
        return static_cast<std::size_t>(it - labels.begin());
    }
};

Problem make_problem(const CoherenceGraph& graph, const ConstraintSet& constraints) {
    check_constraints(graph, constraints);
    Problem p;
    p.n = graph.size();
    p.labels = graph.labels();
    std::sort(p.labels.begin(), p.labels.end(), LabelLess{});
    std::vector<std::size_t> src(p.n);
    for (std::size_t k = 0; k < p.n; ++k) {
        src[k] = *graph.index_of(p.labels[k]);
    }
    p.q.assign(p.n * p.n, 0);
    for (std::size_t i = 0; i < p.n; ++i) {
        for (std::size_t j = 0; j < p.n; ++j) {
            p.q[i * p.n + j] = std::llround(graph.weight(src[i], src[j]) * kScale);
        }
    }
    for (const auto& l : constraints.pinned_accepted) {
        p.pinned_accepted |= Mask{1} << p.index(l);
    }
    for (const auto& l : constraints.pinned_rejected) {
        p.pinned_rejected |= Mask{1} << p.index(l);
    }
    for (const auto& [a, b] : constraints.exclusive_pairs) {
        p.pairs.emplace_back(p.index(a), p.index(b));
    }
    return p;
}

bool mask_less(Mask a, Mask b) {
    const int ca = std::popcount(a);
    const int cb = std::popcount(b);
    if (ca != cb) {
        return ca < cb;
    }
    if (a == b) {
        return false;
    }
    // Equal sizes: the part holding the lowest differing vertex comes first.
    const Mask low = (a ^ b) & (~(a ^ b) + 1);
    return (a & low) != 0;
}

struct Scored {
    std::int64_t key;
    Mask rejected;
};

// Strict total order: better cuts first.
bool better(const Scored& a, const Scored& b) {
    if (a.key != b.key) {
        return a.key > b.key;
    }
    return mask_less(a.rejected, b.rejected);
}

Cut to_cut(const Problem& p, const Scored& s) {
    Cut c;
    for (std::size_t i = 0; i < p.n; ++i) {
        if (s.rejected >> i & 1) {
            c.rejected.insert(p.labels[i]);
        }
    }
    return c;
}

// Chooses the rejected side of bipartition {part, full ^ part}, if any
// orientation satisfies the constraints.
std::optional<Mask> orient(const Problem& p, Mask part, Mask full, bool allow_trivial) {
    for (const auto& [a, b] : p.pairs) {
        if (((part >> a) & 1) == ((part >> b) & 1)) {
            return std::nullopt;
        }
    }
    const Mask other = full ^ part;
    if (!allow_trivial && (part == 0 || other == 0)) {
        return std::nullopt;
    }
    auto ok = [&](Mask rejected) {
        return (p.pinned_accepted & rejected) == 0 && (p.pinned_rejected & ~rejected) == 0;
    };
    const bool first = ok(part);
    const bool second = ok(other);
    if (first && second) {
        return mask_less(part, other) ? part : other;
    }
    if (first) {
        return part;
    }
    if (second) {
        return other;
    }
    return std::nullopt;
}

struct Collector {
    explicit Collector(std::size_t limit) : limit(limit), heap(better) {}

    void offer(const Scored& s) {
        ++feasible;
        if (heap.size() < limit) {
            heap.push(s);
        } else if (better(s, heap.top())) {
            heap.pop();
            heap.push(s);
        }
    }

    std::size_t limit;
    // Top of the heap is the worst kept cut.
    std::priority_queue<Scored, std::vector<Scored>, decltype(&better)> heap;
    std::uint64_t feasible = 0;
};

std::int64_t crossing_of(const Problem& p, Mask part) {
    std::int64_t total = 0;
    for (std::size_t i = 0; i < p.n; ++i) {
        for (std::size_t j = i + 1; j < p.n; ++j) {
            if (((part >> i) & 1) != ((part >> j) & 1)) {
                total += p.w(i, j);
            }
        }
    }
    return total;
}

// Gray-code walk over bipartition indices [begin, end). The last vertex
// never moves, which identifies each bipartition with its complement.
void scan_range(const Problem& p, Mask begin, Mask end, bool allow_trivial, Collector& out) {
    const Mask full = p.n == 64 ? ~Mask{0} : (Mask{1} << p.n) - 1;
    Mask gray = begin ^ (begin >> 1);
    std::int64_t crossing = crossing_of(p, gray);
    for (Mask i = begin;;) {
        if (auto rejected = orient(p, gray, full, allow_trivial)) {
            out.offer({-crossing, *rejected});
        }
        if (++i >= end) {
            break;
        }
        const auto v = static_cast<std::size_t>(std::countr_zero(i));
        const bool v_in = (gray >> v) & 1;
        std::int64_t delta = 0;
        for (std::size_t u = 0; u < p.n; ++u) {
            if (u == v) {
                continue;
            }
            const bool u_in = (gray >> u) & 1;
            delta += u_in == v_in ? p.w(v, u) : -p.w(v, u);
        }
        crossing += delta;
        gray ^= Mask{1} << v;
    }
}

} // namespace

ConstraintSet infer_constraints(const std::vector<Proposition>& props,
                                std::vector<std::pair<std::string, std::string>> exclusive_pairs) {
    ConstraintSet c;
    for (const auto& p : props) {
        if (p.category != Category::hypothesis) {
            c.pinned_accepted.insert(p.id);
        }
    }
    c.exclusive_pairs = std::move(exclusive_pairs);
    return c;
}

void check_constraints(const CoherenceGraph& graph, const ConstraintSet& constraints) {
    const std::size_t n = graph.size();
    auto idx = [&](const std::string& l) {
        auto i = graph.index_of(l);
        if (!i) {
            throw DomainError("constraint names unknown label '" + l + "'");
        }
        return *i;
    };
    // Union-find with parity; node n stands for "accepted".
    std::vector<std::size_t> parent(n + 1);
    std::vector<int> parity(n + 1, 0);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](std::size_t x) {
        int par = 0;
        std::size_t r = x;
        while (parent[r] != r) {
            par ^= parity[r];
            r = parent[r];
        }
        return std::pair{r, par};
    };
    auto relate = [&](std::size_t a, std::size_t b, int differ, const std::string& what) {
        auto [ra, pa] = find(a);
        auto [rb, pb] = find(b);
        if (ra == rb) {
            if ((pa ^ pb) != differ) {
                throw UnsatisfiableError("unsatisfiable constraint: " + what);
            }
            return;
        }
        parent[ra] = rb;
        parity[ra] = pa ^ pb ^ differ;
    };
    for (const auto& l : constraints.pinned_accepted) {
        if (constraints.pinned_rejected.count(l)) {
            throw UnsatisfiableError("unsatisfiable constraint: '" + l + "' is pinned both accepted and rejected");
        }
        relate(idx(l), n, 0, "pin accepted '" + l + "'");
    }
    for (const auto& l : constraints.pinned_rejected) {
        relate(idx(l), n, 1, "pin rejected '" + l + "'");
    }
    for (const auto& [a, b] : constraints.exclusive_pairs) {
        const std::string what = "exclusive pair {" + a + ", " + b + "}";
        if (a == b) {
            throw UnsatisfiableError("unsatisfiable constraint: " + what + " names one label twice");
        }
        relate(idx(a), idx(b), 1, what);
    }
}

bool part_less(const LabelSet& a, const LabelSet& b) {
    if (a.size() != b.size()) {
        return a.size() < b.size();
    }
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end(), LabelLess{});
}

RankedCuts enumerate_cuts(const CoherenceGraph& graph, const ConstraintSet& constraints, std::size_t limit,
                          const SolveOptions& options) {
    if (graph.size() == 0) {
        throw DomainError("cannot cut an empty graph");
    }
    if (graph.size() > options.exact_cap || graph.size() > 63) {
        throw DomainError("graph has " + std::to_string(graph.size()) + " vertices, above the exact-mode cap of " +
                          std::to_string(std::min<std::size_t>(options.exact_cap, 63)) + "; use annealing");
    }
    if (limit == 0) {
        throw DomainError("cut limit must be at least 1");
    }
    const Problem p = make_problem(graph, constraints);
    const Mask total = Mask{1} << (p.n - 1);

    unsigned threads = options.threads ? options.threads : std::max(1u, std::thread::hardware_concurrency());
    if (total < (Mask{1} << 14)) {
        threads = 1;
    }
    std::vector<Collector> parts(threads, Collector(limit));
    if (threads == 1) {
        scan_range(p, 0, total, options.allow_trivial, parts[0]);
    } else {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < threads; ++t) {
            const Mask begin = total / threads * t;
            const Mask end = t + 1 == threads ? total : total / threads * (t + 1);
            pool.emplace_back([&, t, begin, end] { scan_range(p, begin, end, options.allow_trivial, parts[t]); });
        }
    }

    std::vector<Scored> kept;
    RankedCuts out;
    for (auto& c : parts) {
        out.feasible += c.feasible;
        while (!c.heap.empty()) {
            kept.push_back(c.heap.top());
            c.heap.pop();
        }
    }
    if (kept.empty()) {
        throw UnsatisfiableError("no bipartition satisfies the constraints" +
                                 std::string(options.allow_trivial ? "" : " (trivial cut excluded)"));
    }
    std::sort(kept.begin(), kept.end(), better);
    if (kept.size() > limit) {
        kept.resize(limit);
    }
    // Report the plain coherence sum; tied keys share the value of the first cut.
    for (std::size_t i = 0; i < kept.size(); ++i) {
        Cut c = to_cut(p, kept[i]);
        c.coherence = i > 0 && kept[i].key == kept[i - 1].key ? out.cuts.back().coherence
                                                                : coherence(graph, c.rejected);
        out.cuts.push_back(std::move(c));
    }
    out.exhaustive = true;
    return out;
}

std::vector<Cut> optimal_cuts(const CoherenceGraph& graph, const ConstraintSet& constraints,
                              const SolveOptions& options) {
    // Ties can be numerous, so rank everything and cut at the first drop.
    auto ranked = enumerate_cuts(graph, constraints, kAllCuts, options);
    std::vector<Cut> best;
    for (auto& c : ranked.cuts) {
        if (c.coherence != ranked.cuts.front().coherence) {
            break;
        }
        best.push_back(std::move(c));
    }
    return best;
}

Cut anneal_max_cut(const CoherenceGraph& graph, const ConstraintSet& constraints, const AnnealParams& params,
                   std::uint64_t seed, const SolveOptions& options) {
    if (graph.size() == 0) {
        throw DomainError("cannot cut an empty graph");
    }
    check_constraints(graph, constraints);
    const std::size_t n = graph.size();
    std::vector<std::string> labels = graph.labels();
    std::sort(labels.begin(), labels.end(), LabelLess{});
    std::vector<std::int64_t> q(n * n);
    {
        std::vector<std::size_t> src(n);
        for (std::size_t k = 0; k < n; ++k) {
            src[k] = *graph.index_of(labels[k]);
        }
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                q[i * n + j] = std::llround(graph.weight(src[i], src[j]) * kScale);
            }
        }
    }
    auto index = [&](const std::string& l) {
        return static_cast<std::size_t>(std::lower_bound(labels.begin(), labels.end(), l, LabelLess{}) -
                                        labels.begin());
    };

    // Components of the pair graph move as units; node n is "accepted".
    std::vector<std::vector<std::pair<std::size_t, int>>> adj(n + 1);
    for (const auto& l : constraints.pinned_accepted) {
        adj[index(l)].emplace_back(n, 0);
        adj[n].emplace_back(index(l), 0);
    }
    for (const auto& l : constraints.pinned_rejected) {
        adj[index(l)].emplace_back(n, 1);
        adj[n].emplace_back(index(l), 1);
    }
    for (const auto& [a, b] : constraints.exclusive_pairs) {
        adj[index(a)].emplace_back(index(b), 1);
        adj[index(b)].emplace_back(index(a), 1);
    }
    std::vector<int> rel(n + 1, -1);
    std::vector<char> side(n, 0);  // 1 = rejected
    std::vector<std::vector<std::size_t>> units;
    auto flood = [&](std::size_t root) {
        std::vector<std::size_t> members;
        std::vector<std::size_t> stack{root};
        rel[root] = 0;
        while (!stack.empty()) {
            auto x = stack.back();
            stack.pop_back();
            if (x < n) {
                members.push_back(x);
            }
            for (auto [y, d] : adj[x]) {
                if (rel[y] < 0) {
                    rel[y] = rel[x] ^ d;
                    stack.push_back(y);
                }
            }
        }
        return members;
    };
    const bool pinned = !adj[n].empty();
    for (auto x : flood(n)) {
        side[x] = static_cast<char>(rel[x]);
    }
    for (std::size_t v = 0; v < n; ++v) {
        if (rel[v] < 0) {
            auto members = flood(v);
            for (auto x : members) {
                side[x] = static_cast<char>(rel[x]);
            }
            units.push_back(std::move(members));
        }
    }

    auto key_of = [&](const std::vector<char>& s) {
        std::int64_t crossing = 0;
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i + 1; j < n; ++j) {
                if (s[i] != s[j]) {
                    crossing += q[i * n + j];
                }
            }
        }
        return -crossing;
    };
    auto rejected_count = [](const std::vector<char>& s) {
        return static_cast<std::size_t>(std::count(s.begin(), s.end(), 1));
    };
    auto trivial = [&](std::size_t r) { return r == 0 || r == n; };
    auto to_set = [&](const std::vector<char>& s, char which) {
        LabelSet out;
        for (std::size_t i = 0; i < n; ++i) {
            if (s[i] == which) {
                out.insert(labels[i]);
            }
        }
        return out;
    };
    auto finish = [&](const std::vector<char>& s, std::int64_t key) {
        Cut c;
        c.rejected = to_set(s, 1);
        if (!pinned) {
            auto other = to_set(s, 0);
            if (part_less(other, c.rejected)) {
                c.rejected = std::move(other);
            }
        }
        c.coherence = static_cast<double>(key);  // replaced by the plain sum once chosen
        return c;
    };

    std::vector<char> mark(n, 0);
    auto flip_delta = [&](const std::vector<char>& s, const std::vector<std::size_t>& unit) {
        for (auto v : unit) {
            mark[v] = 1;
        }
        std::int64_t dcross = 0;
        for (auto v : unit) {
            for (std::size_t u = 0; u < n; ++u) {
                if (!mark[u]) {
                    dcross += s[u] == s[v] ? q[v * n + u] : -q[v * n + u];
                }
            }
        }
        for (auto v : unit) {
            mark[v] = 0;
        }
        return -dcross;
    };

    std::optional<std::pair<std::int64_t, Cut>> best;
    auto consider = [&](const std::vector<char>& s, std::int64_t key) {
        if (!options.allow_trivial && trivial(rejected_count(s))) {
            return;
        }
        Cut c = finish(s, key);
        if (!best || key > best->first || (key == best->first && part_less(c.rejected, best->second.rejected))) {
            best.emplace(key, std::move(c));
        }
    };

    if (units.empty()) {
        consider(side, key_of(side));
        if (!best) {
            throw UnsatisfiableError("the only feasible cut is trivial and trivial cuts are excluded");
        }
        best->second.coherence = coherence(graph, best->second.rejected);
        return best->second;
    }

    const std::size_t restarts = std::max<std::size_t>(1, params.restarts);
    const std::size_t sweeps = std::max<std::size_t>(1, params.sweeps);
    for (std::size_t r = 0; r < restarts; ++r) {
        Rng rng(seed, r);
        std::vector<char> s = side;
        for (const auto& unit : units) {
            if (rng.below(2) == 1) {
                for (auto v : unit) {
                    s[v] ^= 1;
                }
            }
        }
        std::size_t rejected = rejected_count(s);
        if (!options.allow_trivial && trivial(rejected)) {
            for (auto v : units.front()) {
                s[v] ^= 1;
            }
            rejected = rejected_count(s);
            if (trivial(rejected)) {
                throw UnsatisfiableError("no non-trivial feasible cut exists");
            }
        }
        std::int64_t key = key_of(s);
        consider(s, key);
        const double cooling = sweeps > 1 ? std::pow(params.t_end / params.t_start, 1.0 / double(sweeps - 1)) : 1.0;
        double temperature = params.t_start;
        for (std::size_t sweep = 0; sweep < sweeps; ++sweep, temperature *= cooling) {
            for (std::size_t step = 0; step < units.size(); ++step) {
                const auto& unit = units[rng.below(units.size())];
                std::size_t flipped = rejected;
                for (auto v : unit) {
                    flipped += s[v] ? std::size_t(-1) : 1;
                }
                if (!options.allow_trivial && trivial(flipped)) {
                    continue;
                }
                const std::int64_t delta = flip_delta(s, unit);
                const double gain = static_cast<double>(delta) / kScale;
                if (delta >= 0 || rng.unit() < std::exp(gain / temperature)) {
                    for (auto v : unit) {
                        s[v] ^= 1;
                    }
                    key += delta;
                    rejected = flipped;
                    if (delta > 0 && (!best || key >= best->first)) {
                        consider(s, key);
                    }
                }
            }
        }
        consider(s, key);
    }
    best->second.coherence = coherence(graph, best->second.rejected);
    return best->second;
}

Decision accepted_rejected(const Cut& cut, const ConstraintSet& constraints, const CoherenceGraph& graph) {
    LabelSet part;
    LabelSet other;
    for (const auto& l : cut.rejected) {
        if (!graph.index_of(l)) {
            throw DomainError("cut names unknown label '" + l + "'");
        }
        part.insert(l);
    }
    for (const auto& l : graph.labels()) {
        if (!part.count(l)) {
            other.insert(l);
        }
    }
    auto touches = [](const LabelSet& pins, const LabelSet& side) {
        return std::any_of(pins.begin(), pins.end(), [&](const std::string& l) { return side.count(l) == 1; });
    };
    const bool acc_part = touches(constraints.pinned_accepted, part);
    const bool acc_other = touches(constraints.pinned_accepted, other);
    const bool rej_part = touches(constraints.pinned_rejected, part);
    const bool rej_other = touches(constraints.pinned_rejected, other);
    if ((acc_part && acc_other) || (rej_part && rej_other)) {
        throw DomainError("cut " + format_part(part) + " puts pinned labels on both sides");
    }
    const bool reject_other = acc_part || rej_other;
    const bool reject_part = acc_other || rej_part;
    if (reject_other && reject_part) {
        throw DomainError("cut " + format_part(part) + " puts accepted and rejected pins on one side");
    }
    for (const auto& [a, b] : constraints.exclusive_pairs) {
        if (part.count(a) == part.count(b)) {
            throw DomainError("cut " + format_part(part) + " keeps exclusive pair {" + a + ", " + b +
                              "} on one side");
        }
    }
    Decision d;
    if (reject_other || (!reject_part && part_less(other, part))) {
        d.rejected = std::move(other);
        d.accepted = std::move(part);
    } else {
        d.rejected = std::move(part);
        d.accepted = std::move(other);
    }
    return d;
}

namespace {

nlohmann::ordered_json constraints_json(const ConstraintSet& c) {
    nlohmann::ordered_json j;
    j["pinned_accepted"] = std::vector<std::string>(c.pinned_accepted.begin(), c.pinned_accepted.end());
    j["pinned_rejected"] = std::vector<std::string>(c.pinned_rejected.begin(), c.pinned_rejected.end());
    auto pairs = nlohmann::ordered_json::array();
    for (const auto& [a, b] : c.exclusive_pairs) {
        pairs.push_back({a, b});
    }
    j["exclusive_pairs"] = std::move(pairs);
    return j;
}

LabelSet label_array(const nlohmann::json& j, const char* field) {
    LabelSet out;
    if (!j.contains(field)) {
        return out;
    }
    if (!j[field].is_array()) {
        throw ParseError(std::string("'") + field + "' must be an array of labels");
    }
    for (const auto& l : j[field]) {
        if (!l.is_string()) {
            throw ParseError(std::string("'") + field + "' must contain strings");
        }
        out.insert(l.get<std::string>());
    }
    return out;
}

ConstraintSet constraints_from_json(const nlohmann::json& j) {
    if (!j.is_object()) {
        throw ParseError("constraints must be a JSON object");
    }
    ConstraintSet c;
    c.pinned_accepted = label_array(j, "pinned_accepted");
    c.pinned_rejected = label_array(j, "pinned_rejected");
    if (j.contains("exclusive_pairs")) {
        if (!j["exclusive_pairs"].is_array()) {
            throw ParseError("'exclusive_pairs' must be an array of [label, label] pairs");
        }
        for (const auto& pr : j["exclusive_pairs"]) {
            if (!pr.is_array() || pr.size() != 2 || !pr[0].is_string() || !pr[1].is_string()) {
                throw ParseError("'exclusive_pairs' entries must be [label, label]");
            }
            c.exclusive_pairs.emplace_back(pr[0].get<std::string>(), pr[1].get<std::string>());
        }
    }
    return c;
}

nlohmann::json parse_json(std::string_view text, const char* what) {
    try {
        return nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string(what) + " is not valid JSON: " + e.what());
    }
}

} // namespace

std::string serialize_constraints(const ConstraintSet& constraints) {
    return constraints_json(constraints).dump(2) + "\n";
}

ConstraintSet parse_constraints(std::string_view text) {
    return constraints_from_json(parse_json(text, "constraints document"));
}

std::string serialize_cuts(const CoherenceGraph& graph, const RankedCuts& ranked, const ConstraintSet& constraints) {
    nlohmann::ordered_json doc;
    doc["labels"] = graph.labels();
    doc["exhaustive"] = ranked.exhaustive;
    doc["feasible"] = ranked.feasible;
    doc["constraints"] = constraints_json(constraints);
    auto cuts = nlohmann::ordered_json::array();
    std::size_t rank = 1;
    for (const auto& c : ranked.cuts) {
        LabelSet accepted;
        for (const auto& l : graph.labels()) {
            if (!c.rejected.count(l)) {
                accepted.insert(l);
            }
        }
        nlohmann::ordered_json j;
        j["rank"] = rank++;
        j["rejected"] = std::vector<std::string>(c.rejected.begin(), c.rejected.end());
        j["accepted"] = std::vector<std::string>(accepted.begin(), accepted.end());
        j["coherence"] = c.coherence;
        cuts.push_back(std::move(j));
    }
    doc["cuts"] = std::move(cuts);
    return doc.dump(2) + "\n";
}

CutsDocument parse_cuts(std::string_view text) {
    const auto doc = parse_json(text, "cuts document");
    if (!doc.is_object() || !doc.contains("cuts") || !doc["cuts"].is_array()) {
        throw ParseError("cuts document needs a 'cuts' array");
    }
    CutsDocument out;
    if (doc.contains("labels")) {
        for (const auto& l : doc["labels"]) {
            out.labels.push_back(l.get<std::string>());
        }
    }
    if (doc.contains("constraints")) {
        out.constraints = constraints_from_json(doc["constraints"]);
    }
    out.ranked.exhaustive = doc.value("exhaustive", false);
    out.ranked.feasible = doc.value("feasible", std::uint64_t{0});
    for (const auto& c : doc["cuts"]) {
        if (!c.is_object() || !c.contains("rejected") || !c.contains("coherence") || !c["coherence"].is_number()) {
            throw ParseError("each cut needs 'rejected' and numeric 'coherence'");
        }
        Cut cut;
        cut.rejected = label_array(c, "rejected");
        cut.coherence = c["coherence"].get<double>();
        out.ranked.cuts.push_back(std::move(cut));
    }
    return out;
}

} // namespace cdi
