#ifndef CDI_AGGREGATE_HPP
#define CDI_AGGREGATE_HPP

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "cdi/graph.hpp"

namespace cdi {

/// Median of a list of reals; even counts take the midpoint of the two
/// central values. Throws DomainError on an empty list.
double median(std::vector<double> values);

/// Elementwise median of the adjacency matrices. Output labels follow the
/// first sample; pairs whose median is 0 are dropped.
CoherenceGraph median_graph(std::span<const CoherenceGraph> samples);

struct SubsampleStats {
    std::size_t n = 0;
    std::vector<double> distances;  // one per trial, in trial order
    double min = 0.0;
    double q1 = 0.0;
    double median = 0.0;
    double q3 = 0.0;
    double max = 0.0;
};

/// L1 distance from medians of random n-subsets to the median of all N
/// samples, for n = 1..N.
struct ConvergenceProfile {
    std::vector<SubsampleStats> per_n;  // per_n[k].n == k + 1
    std::size_t trials = 0;
    std::uint64_t seed = 0;

    std::size_t sample_count() const { return per_n.size(); }
};

inline constexpr std::size_t kDefaultTrials = 200;

/// Each (n, trial) draws its subset from its own generator seeded by
/// (seed, n, trial), so results do not depend on evaluation order.
ConvergenceProfile convergence_profile(std::span<const CoherenceGraph> samples, std::size_t trials = kDefaultTrials,
                                       std::uint64_t seed = 0);

struct SampleSizeChoice {
    std::size_t n = 0;
    bool converged = false;
};

/// Smallest n whose median distance is below `fraction` of the median
/// distance at n = 1. Falls back to N, flagged as not converged.
SampleSizeChoice pick_sample_size(const ConvergenceProfile& profile, double fraction = 0.10);

// CSV exports: (n, trial, distance) and (n, min, q1, median, q3, max).
std::string profile_csv(const ConvergenceProfile& profile);
std::string profile_summary_csv(const ConvergenceProfile& profile);

// Reads the summary CSV back; only the per-n statistics are restored.
ConvergenceProfile parse_profile_summary(std::string_view csv);

} // namespace cdi

#endif // CDI_AGGREGATE_HPP
