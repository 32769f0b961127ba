#ifndef CDI_TESTS_SUPPORT_HPP
#define CDI_TESTS_SUPPORT_HPP

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "cdi/graph.hpp"
#include "cdi/solver.hpp"

namespace testsupport {

inline std::string fixture(const std::string& name) {
    return std::string(CDI_SOURCE_DIR) + "/fixtures/" + name;
}

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
public:
    explicit TempDir(const std::string& tag) {
        std::random_device rd;
        path_ = std::filesystem::temp_directory_path() /
                ("cdi-" + tag + "-" + std::to_string(rd()) + std::to_string(rd()));
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;
    std::string str() const { return path_.string(); }
    std::string file(const std::string& name) const { return (path_ / name).string(); }

private:
    std::filesystem::path path_;
};

inline std::vector<std::string> vertex_labels(std::size_t n) {
    std::vector<std::string> out;
    for (std::size_t i = 1; i <= n; ++i) {
        out.push_back("v" + std::to_string(i));
    }
    return out;
}

// Weights drawn from {-1, -0.5, 0, 0.5, 1}; each pair gets an edge with
// probability `density`.
inline cdi::CoherenceGraph random_graph(std::mt19937_64& rng, std::size_t n, double density = 0.6) {
    static const double kWeights[] = {-1.0, -0.5, 0.0, 0.5, 1.0};
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    std::uniform_int_distribution<int> pick(0, 4);
    auto labels = vertex_labels(n);
    std::vector<cdi::Edge> edges;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (coin(rng) < density) {
                edges.push_back({labels[i], labels[j], kWeights[pick(rng)]});
            }
        }
    }
    return cdi::CoherenceGraph(labels, edges);
}

// ---- Brute-force oracle, independent of the solver's bit tricks. ----

struct OracleCut {
    std::vector<std::size_t> rejected;  // sorted vertex indices (v1 = 0)
    double coherence = 0.0;
};

inline double oracle_coherence(const cdi::CoherenceGraph& g, const std::vector<bool>& in) {
    double crossing = 0.0;
    for (const auto& e : g.edges()) {
        if (in[*g.index_of(e.u)] != in[*g.index_of(e.v)]) {
            crossing += e.w;
        }
    }
    return -crossing;
}

// Smaller cardinality first, then lexicographic on vertex numbers.
inline bool oracle_part_less(const std::vector<std::size_t>& a, const std::vector<std::size_t>& b) {
    if (a.size() != b.size()) {
        return a.size() < b.size();
    }
    return a < b;
}

inline std::vector<OracleCut> oracle_ranked(const cdi::CoherenceGraph& g, const cdi::ConstraintSet& c,
                                            bool allow_trivial = true) {
    const std::size_t n = g.size();
    auto idx = [&](const std::string& l) { return *g.index_of(l); };
    auto feasible = [&](const std::vector<bool>& rej) {
        std::size_t count = static_cast<std::size_t>(std::count(rej.begin(), rej.end(), true));
        if (!allow_trivial && (count == 0 || count == n)) {
            return false;
        }
        for (const auto& l : c.pinned_accepted) {
            if (rej[idx(l)]) {
                return false;
            }
        }
        for (const auto& l : c.pinned_rejected) {
            if (!rej[idx(l)]) {
                return false;
            }
        }
        for (const auto& [a, b] : c.exclusive_pairs) {
            if (rej[idx(a)] == rej[idx(b)]) {
                return false;
            }
        }
        return true;
    };
    std::vector<OracleCut> out;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
        std::vector<bool> side(n);
        std::vector<bool> other(n);
        for (std::size_t i = 0; i < n; ++i) {
            side[i] = (mask >> i) & 1;
            other[i] = !side[i];
        }
        // Visit each unordered bipartition once: the side holding v1 is `other`.
        if (side[0]) {
            continue;
        }
        std::vector<std::size_t> a;
        std::vector<std::size_t> b;
        for (std::size_t i = 0; i < n; ++i) {
            (side[i] ? a : b).push_back(i);
        }
        const bool fa = feasible(side);
        const bool fb = feasible(other);
        if (!fa && !fb) {
            continue;
        }
        OracleCut cut;
        if (fa && fb) {
            cut.rejected = oracle_part_less(a, b) ? a : b;
        } else {
            cut.rejected = fa ? a : b;
        }
        cut.coherence = oracle_coherence(g, side);
        out.push_back(std::move(cut));
    }
    std::stable_sort(out.begin(), out.end(), [](const OracleCut& x, const OracleCut& y) {
        if (x.coherence != y.coherence) {
            return x.coherence > y.coherence;
        }
        return oracle_part_less(x.rejected, y.rejected);
    });
    return out;
}

inline cdi::LabelSet to_labels(const cdi::CoherenceGraph& g, const std::vector<std::size_t>& idx) {
    cdi::LabelSet out;
    for (auto i : idx) {
        out.insert(g.labels()[i]);
    }
    return out;
}

} // namespace testsupport

#endif // CDI_TESTS_SUPPORT_HPP
