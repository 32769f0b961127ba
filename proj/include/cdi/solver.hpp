#ifndef CDI_SOLVER_HPP
#define CDI_SOLVER_HPP

#include <cstddef>
#include <cstdint>
#include <limits>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cdi/graph.hpp"
#include "cdi/proposition.hpp"

namespace cdi {

struct ConstraintSet {
    LabelSet pinned_accepted;
    LabelSet pinned_rejected;
    // Exactly one member of each pair is accepted.
    std::vector<std::pair<std::string, std::string>> exclusive_pairs;

    bool empty() const { return pinned_accepted.empty() && pinned_rejected.empty() && exclusive_pairs.empty(); }
};

/// Pins every non-hypothesis proposition to the accepted side and adds the
/// given exclusive hypothesis pairs.
ConstraintSet infer_constraints(const std::vector<Proposition>& props,
                                std::vector<std::pair<std::string, std::string>> exclusive_pairs);

/// Throws DomainError for labels not in the graph and UnsatisfiableError
/// naming the first constraint that cannot hold together with the others
/// (overlapping pins, a pair pinned to one side, an odd cycle of pairs).
void check_constraints(const CoherenceGraph& graph, const ConstraintSet& constraints);

struct SolveOptions {
    std::size_t exact_cap = 24;
    // Whether the bipartition with an empty part counts as a cut.
    bool allow_trivial = true;
    // 0 picks std::thread::hardware_concurrency().
    unsigned threads = 0;
};

struct RankedCuts {
    // Coherence descending; ties by canonical part order of `rejected`.
    std::vector<Cut> cuts;
    bool exhaustive = false;
    // Bipartitions that satisfied the constraints, before truncation.
    std::uint64_t feasible = 0;
};

inline constexpr std::size_t kAllCuts = std::numeric_limits<std::size_t>::max();

/// Canonical order on parts: fewer labels first, then lexicographic on
/// the label-ordered members.
bool part_less(const LabelSet& a, const LabelSet& b);

/// Scores every bipartition once (complements identified) and keeps the
/// best `limit` that satisfy the constraints. With no pins the rejected
/// side is the canonical smaller part; pins fix the orientation.
///
/// Coherence is accumulated in 2^-40 fixed point, so ties are exact
/// regardless of summation order.
RankedCuts enumerate_cuts(const CoherenceGraph& graph, const ConstraintSet& constraints, std::size_t limit,
                          const SolveOptions& options = {});

// Every cut attaining the maximum, in canonical order.
std::vector<Cut> optimal_cuts(const CoherenceGraph& graph, const ConstraintSet& constraints,
                              const SolveOptions& options = {});

struct AnnealParams {
    std::size_t sweeps = 1000;
    std::size_t restarts = 4;
    double t_start = 1.0;
    double t_end = 0.01;
};

/// Simulated annealing over constraint-respecting moves: free vertices flip
/// alone, vertices linked by exclusive pairs flip together. Deterministic
/// for a given seed; works at any size.
Cut anneal_max_cut(const CoherenceGraph& graph, const ConstraintSet& constraints, const AnnealParams& params,
                   std::uint64_t seed, const SolveOptions& options = {});

struct Decision {
    LabelSet accepted;
    LabelSet rejected;
};

/// Orients a cut: the side holding pinned-accepted labels (or lacking
/// pinned-rejected ones) is accepted; without pins the canonical smaller
/// part is rejected. Throws DomainError if the cut splits a pin class or
/// an exclusive pair.
Decision accepted_rejected(const Cut& cut, const ConstraintSet& constraints, const CoherenceGraph& graph);

std::string serialize_constraints(const ConstraintSet& constraints);
ConstraintSet parse_constraints(std::string_view text);

std::string serialize_cuts(const CoherenceGraph& graph, const RankedCuts& ranked, const ConstraintSet& constraints);

struct CutsDocument {
    std::vector<std::string> labels;
    ConstraintSet constraints;
    RankedCuts ranked;
};

CutsDocument parse_cuts(std::string_view text);

} // namespace cdi

#endif // CDI_SOLVER_HPP
