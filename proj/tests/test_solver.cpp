#include <doctest.h>

#include <random>

#include "cdi/error.hpp"
#include "cdi/io.hpp"
#include "cdi/proposition.hpp"
#include "cdi/solver.hpp"
#include "support.hpp"

using namespace cdi;
using testsupport::fixture;

namespace {

ConstraintSet random_constraints(std::mt19937_64& rng, const CoherenceGraph& g) {
    ConstraintSet c;
    const std::size_t n = g.size();
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) {
        order[i] = i;
    }
    std::shuffle(order.begin(), order.end(), rng);
    std::size_t k = 0;
    if (n >= 3) {
        c.exclusive_pairs.emplace_back(g.labels()[order[k]], g.labels()[order[k + 1]]);
        k += 2;
    }
    const std::size_t pins = rng() % 3;
    for (std::size_t p = 0; p < pins && k < n; ++p, ++k) {
        if (rng() % 4 == 0) {
            c.pinned_rejected.insert(g.labels()[order[k]]);
        } else {
            c.pinned_accepted.insert(g.labels()[order[k]]);
        }
    }
    // Occasionally pin a pair member too, which can make the set unsatisfiable.
    if (n >= 3 && rng() % 3 == 0) {
        (rng() % 2 ? c.pinned_rejected : c.pinned_accepted).insert(g.labels()[order[rng() % 2]]);
    }
    return c;
}

bool satisfies(const Cut& cut, const ConstraintSet& c) {
    for (const auto& l : c.pinned_accepted) {
        if (cut.rejected.count(l)) {
            return false;
        }
    }
    for (const auto& l : c.pinned_rejected) {
        if (!cut.rejected.count(l)) {
            return false;
        }
    }
    for (const auto& [a, b] : c.exclusive_pairs) {
        if (cut.rejected.count(a) == cut.rejected.count(b)) {
            return false;
        }
    }
    return true;
}

}  // namespace

TEST_CASE("the triangle has the unique optimum {c}") {
    const auto g = load_graph(fixture("triangle_graph.json"));
    const auto ranked = enumerate_cuts(g, {}, kAllCuts);
    REQUIRE(ranked.cuts.size() == 4);
    CHECK(ranked.cuts[0].rejected == LabelSet{"c"});
    CHECK(ranked.cuts[0].coherence == 2.0);
    CHECK(ranked.cuts[1].coherence < 2.0);
    CHECK(optimal_cuts(g, {}).size() == 1);
    CHECK(ranked.exhaustive);
    CHECK(ranked.feasible == 4);
}

TEST_CASE("ties on the all-zero graph") {
    CoherenceGraph g({"a", "b", "c"}, {});
    const auto best = optimal_cuts(g, {});
    REQUIRE(best.size() == 4);
    CHECK(best[0].rejected.empty());
    CHECK(best[1].rejected == LabelSet{"a"});
    CHECK(best[2].rejected == LabelSet{"b"});
    CHECK(best[3].rejected == LabelSet{"c"});
}

TEST_CASE("two vertices joined by an inconsistency") {
    std::vector<Edge> edges{{"p1", "p2", -1.0}};
    CoherenceGraph g({"p1", "p2"}, edges);
    const auto ranked = enumerate_cuts(g, {}, kAllCuts);
    REQUIRE(ranked.cuts.size() == 2);
    CHECK(ranked.cuts[0].rejected == LabelSet{"p1"});
    CHECK(ranked.cuts[0].coherence == 1.0);
    CHECK(ranked.cuts[1].rejected.empty());
    CHECK(ranked.cuts[1].coherence == 0.0);
}

TEST_CASE("canonical part order") {
    CHECK(part_less({}, {"a"}));
    CHECK(part_less({"c"}, {"a", "b"}));
    CHECK(part_less({"p2", "p9"}, {"p2", "p10"}));
    CHECK_FALSE(part_less({"a"}, {"a"}));
}

TEST_CASE("toy problem with pins and exclusive pairs") {
    const auto g = load_graph(fixture("wifi_graph.json"));
    const auto props = load_propositions(fixture("wifi.md"));
    const auto c = infer_constraints(props, {{"p5", "p6"}, {"p7", "p8"}});
    CHECK(c.pinned_accepted == LabelSet{"p1", "p2", "p3", "p4"});
    const auto ranked = enumerate_cuts(g, c, kAllCuts);
    CHECK(ranked.feasible == 4);
    REQUIRE(ranked.cuts.size() == 4);
    CHECK(ranked.cuts[0].rejected == LabelSet{"p5", "p8"});
    CHECK(ranked.cuts[0].coherence == doctest::Approx(2.8));
    const auto d = accepted_rejected(ranked.cuts[0], c, g);
    CHECK(d.rejected == LabelSet{"p5", "p8"});
    CHECK(d.accepted == LabelSet{"p1", "p2", "p3", "p4", "p6", "p7"});
}

TEST_CASE("eighteen-vertex alternate graph has three tied optima") {
    const auto g = load_graph(fixture("wifi_large_alt_graph.json"));
    const auto best = optimal_cuts(g, {});
    REQUIRE(best.size() == 3);
    CHECK(best[0].rejected.empty());
    CHECK(best[1].rejected == LabelSet{"p16"});
    CHECK(best[2].rejected == LabelSet{"p16", "p17"});
    const auto ranked = enumerate_cuts(g, {}, 16);
    CHECK(ranked.cuts.size() == 16);
    CHECK(ranked.cuts[3].coherence < -0.5);
    CHECK(ranked.feasible == (1u << 17));
}

TEST_CASE("exact solver agrees with brute force on random graphs") {
    std::mt19937_64 rng(1234);
    for (int trial = 0; trial < 60; ++trial) {
        const std::size_t n = 1 + trial % 10;
        const auto g = testsupport::random_graph(rng, n);
        const auto oracle = testsupport::oracle_ranked(g, {});
        const auto ranked = enumerate_cuts(g, {}, kAllCuts);
        REQUIRE(ranked.cuts.size() == oracle.size());
        for (std::size_t i = 0; i < oracle.size(); ++i) {
            CHECK(ranked.cuts[i].rejected == testsupport::to_labels(g, oracle[i].rejected));
            CHECK(ranked.cuts[i].coherence == oracle[i].coherence);
        }
        // A truncated list is a prefix of the full one.
        const auto top = enumerate_cuts(g, {}, 3);
        for (std::size_t i = 0; i < top.cuts.size(); ++i) {
            CHECK(top.cuts[i] == ranked.cuts[i]);
        }
    }
}

TEST_CASE("constrained enumeration equals filtering the unconstrained list") {
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 60; ++trial) {
        const std::size_t n = 3 + trial % 8;
        const auto g = testsupport::random_graph(rng, n);
        const auto c = random_constraints(rng, g);
        const auto oracle = testsupport::oracle_ranked(g, c);
        if (oracle.empty()) {
            CHECK_THROWS_AS(enumerate_cuts(g, c, kAllCuts), UnsatisfiableError);
            continue;
        }
        const auto ranked = enumerate_cuts(g, c, kAllCuts);
        REQUIRE(ranked.cuts.size() == oracle.size());
        for (std::size_t i = 0; i < oracle.size(); ++i) {
            CHECK(ranked.cuts[i].rejected == testsupport::to_labels(g, oracle[i].rejected));
            CHECK(ranked.cuts[i].coherence == oracle[i].coherence);
            CHECK(satisfies(ranked.cuts[i], c));
        }
    }
}

TEST_CASE("trivial cuts can be excluded") {
    std::mt19937_64 rng(8);
    for (int trial = 0; trial < 20; ++trial) {
        const auto g = testsupport::random_graph(rng, 2 + trial % 6);
        SolveOptions opts;
        opts.allow_trivial = false;
        const auto oracle = testsupport::oracle_ranked(g, {}, false);
        const auto ranked = enumerate_cuts(g, {}, kAllCuts, opts);
        REQUIRE(ranked.cuts.size() == oracle.size());
        for (const auto& cut : ranked.cuts) {
            CHECK_FALSE(cut.rejected.empty());
        }
    }
    CHECK_THROWS_AS(
        [] {
            SolveOptions opts;
            opts.allow_trivial = false;
            return enumerate_cuts(CoherenceGraph({"a"}, {}), {}, kAllCuts, opts);
        }(),
        UnsatisfiableError);
}

TEST_CASE("unsatisfiable and invalid constraints") {
    const auto g = load_graph(fixture("triangle_graph.json"));
    ConstraintSet both;
    both.pinned_accepted = {"a"};
    both.pinned_rejected = {"a"};
    CHECK_THROWS_AS(enumerate_cuts(g, both, kAllCuts), UnsatisfiableError);

    ConstraintSet odd;
    odd.exclusive_pairs = {{"a", "b"}, {"b", "c"}, {"a", "c"}};
    CHECK_THROWS_AS(enumerate_cuts(g, odd, kAllCuts), UnsatisfiableError);

    ConstraintSet pinned_pair;
    pinned_pair.pinned_accepted = {"a", "b"};
    pinned_pair.exclusive_pairs = {{"a", "b"}};
    CHECK_THROWS_AS(enumerate_cuts(g, pinned_pair, kAllCuts), UnsatisfiableError);

    ConstraintSet unknown;
    unknown.pinned_accepted = {"z"};
    CHECK_THROWS_AS(enumerate_cuts(g, unknown, kAllCuts), DomainError);

    CHECK_THROWS_AS(enumerate_cuts(CoherenceGraph(), {}, kAllCuts), DomainError);
    CHECK_THROWS_AS(enumerate_cuts(g, {}, 0), DomainError);

    SolveOptions tiny;
    tiny.exact_cap = 2;
    CHECK_THROWS_AS(enumerate_cuts(g, {}, kAllCuts, tiny), DomainError);
}

TEST_CASE("positive scaling preserves the ranking") {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 20; ++trial) {
        const auto g = testsupport::random_graph(rng, 3 + trial % 7);
        std::vector<Edge> half;
        for (auto e : g.edges()) {
            e.w *= 0.5;
            half.push_back(e);
        }
        const CoherenceGraph h(g.labels(), half);
        const auto a = enumerate_cuts(g, {}, kAllCuts);
        const auto b = enumerate_cuts(h, {}, kAllCuts);
        REQUIRE(a.cuts.size() == b.cuts.size());
        for (std::size_t i = 0; i < a.cuts.size(); ++i) {
            CHECK(a.cuts[i].rejected == b.cuts[i].rejected);
            CHECK(b.cuts[i].coherence == 0.5 * a.cuts[i].coherence);
        }
    }
}

TEST_CASE("multi-threaded enumeration matches single-threaded") {
    std::mt19937_64 rng(31);
    const auto g = testsupport::random_graph(rng, 16);
    SolveOptions one;
    one.threads = 1;
    SolveOptions four;
    four.threads = 4;
    const auto a = enumerate_cuts(g, {}, 50, one);
    const auto b = enumerate_cuts(g, {}, 50, four);
    REQUIRE(a.cuts.size() == b.cuts.size());
    for (std::size_t i = 0; i < a.cuts.size(); ++i) {
        CHECK(a.cuts[i] == b.cuts[i]);
    }
    CHECK(a.feasible == b.feasible);
}

TEST_CASE("annealer finds the exact optimum") {
    std::mt19937_64 rng(4242);
    int matches = 0;
    for (int trial = 0; trial < 100; ++trial) {
        const auto g = testsupport::random_graph(rng, 4 + trial % 9);
        const double best = enumerate_cuts(g, {}, 1).cuts[0].coherence;
        const auto cut = anneal_max_cut(g, {}, {}, 7);
        CHECK(cut.coherence == doctest::Approx(coherence(g, cut.rejected)));
        matches += std::abs(cut.coherence - best) < 1e-9;
    }
    CHECK(matches >= 99);
}

TEST_CASE("annealer respects constraints") {
    std::mt19937_64 rng(77);
    int matches = 0;
    int feasible = 0;
    for (int trial = 0; trial < 60; ++trial) {
        const auto g = testsupport::random_graph(rng, 4 + trial % 8);
        const auto c = random_constraints(rng, g);
        if (testsupport::oracle_ranked(g, c).empty()) {
            CHECK_THROWS_AS(anneal_max_cut(g, c, {}, 1), UnsatisfiableError);
            continue;
        }
        ++feasible;
        const auto cut = anneal_max_cut(g, c, {}, 1);
        CHECK(satisfies(cut, c));
        matches += std::abs(cut.coherence - enumerate_cuts(g, c, 1).cuts[0].coherence) < 1e-9;
    }
    CHECK(matches >= feasible - 1);
}

TEST_CASE("annealer is deterministic for a seed and handles full pinning") {
    const auto g = load_graph(fixture("wifi_large_alt_graph.json"));
    const auto a = anneal_max_cut(g, {}, {}, 3);
    const auto b = anneal_max_cut(g, {}, {}, 3);
    CHECK(a == b);
    CHECK(a.coherence == 0.0);

    const auto tri = load_graph(fixture("triangle_graph.json"));
    ConstraintSet all;
    all.pinned_accepted = {"a", "b"};
    all.pinned_rejected = {"c"};
    const auto pinned = anneal_max_cut(tri, all, {}, 0);
    CHECK(pinned.rejected == LabelSet{"c"});
    CHECK(pinned.coherence == 2.0);
}

TEST_CASE("accepted/rejected split") {
    const auto g = load_graph(fixture("triangle_graph.json"));
    Cut cut{{"c"}, 2.0};
    auto d = accepted_rejected(cut, {}, g);
    CHECK(d.rejected == LabelSet{"c"});
    CHECK(d.accepted == LabelSet{"a", "b"});

    ConstraintSet pins;
    pins.pinned_accepted = {"c"};
    d = accepted_rejected(cut, pins, g);
    CHECK(d.rejected == LabelSet{"a", "b"});

    ConstraintSet split;
    split.pinned_accepted = {"a", "c"};
    CHECK_THROWS_AS(accepted_rejected(cut, split, g), DomainError);

    ConstraintSet pair;
    pair.exclusive_pairs = {{"a", "b"}};
    CHECK_THROWS_AS(accepted_rejected(cut, pair, g), DomainError);
}

TEST_CASE("constraints and cuts documents round-trip") {
    const auto g = load_graph(fixture("wifi_graph.json"));
    const auto c = parse_constraints(read_file(fixture("wifi_constraints.json")));
    CHECK(c.exclusive_pairs.size() == 2);
    CHECK(parse_constraints(serialize_constraints(c)).pinned_accepted == c.pinned_accepted);
    CHECK(parse_constraints(serialize_constraints(c)).exclusive_pairs == c.exclusive_pairs);
    const auto ranked = enumerate_cuts(g, c, kAllCuts);
    const auto doc = parse_cuts(serialize_cuts(g, ranked, c));
    CHECK(doc.labels == g.labels());
    REQUIRE(doc.ranked.cuts.size() == ranked.cuts.size());
    for (std::size_t i = 0; i < ranked.cuts.size(); ++i) {
        CHECK(doc.ranked.cuts[i] == ranked.cuts[i]);
    }
    CHECK(doc.ranked.feasible == ranked.feasible);
    CHECK(doc.constraints.exclusive_pairs == c.exclusive_pairs);
    CHECK_THROWS_AS(parse_constraints(R"({"pinned_accepted": "p1"})"), ParseError);
}
