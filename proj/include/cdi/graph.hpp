#ifndef CDI_GRAPH_HPP
#define CDI_GRAPH_HPP

#include <cstddef>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace cdi {

// Natural order on proposition labels: alphabetic prefix first, then the
// numeric suffix by value, so "p2" < "p10".
struct LabelLess {
    bool operator()(std::string_view a, std::string_view b) const;
    using is_transparent = void;
};

bool is_valid_label(std::string_view label);

using LabelSet = std::set<std::string, LabelLess>;

struct Edge {
    std::string u;
    std::string v;
    double w = 0.0;

    bool operator==(const Edge&) const = default;
};

/// Symmetric weighted adjacency over proposition labels.
///
/// Weights lie in [-1, 1]; pairs without an edge read as 0. Edges recorded
/// explicitly with weight 0 are kept so that documents round-trip, but they
/// never change any coherence value.
class CoherenceGraph {
public:
    CoherenceGraph() = default;

    /// Throws ParseError on invalid labels, unknown endpoints, self-loops,
    /// duplicate pairs or weights outside [-1, 1].
    CoherenceGraph(std::vector<std::string> labels, std::span<const Edge> edges);

    const std::vector<std::string>& labels() const { return labels_; }
    std::size_t size() const { return labels_.size(); }

    std::optional<std::size_t> index_of(std::string_view label) const;

    double weight(std::size_t i, std::size_t j) const { return dense_[i * labels_.size() + j]; }
    double weight(std::string_view u, std::string_view v) const;

    bool has_edge(std::size_t i, std::size_t j) const { return present_[i * labels_.size() + j] != 0; }

    /// Recorded edges with u before v in label order, sorted by (u, v).
    std::vector<Edge> edges() const;

    bool same_labels(const CoherenceGraph& other) const;

    bool operator==(const CoherenceGraph& other) const;

private:
    std::vector<std::string> labels_;
    std::vector<double> dense_;
    std::vector<unsigned char> present_;
};

struct Cut {
    LabelSet rejected;
    double coherence = 0.0;

    bool operator==(const Cut&) const = default;
};

/// Negative total weight of the edges crossing between `part` and its
/// complement. Throws DomainError for labels not in the graph.
double coherence(const CoherenceGraph& graph, const LabelSet& part);

/// Sum over unordered pairs of |w1 - w2|; label sets must coincide.
double l1_distance(const CoherenceGraph& a, const CoherenceGraph& b);

std::string serialize(const CoherenceGraph& graph);
CoherenceGraph parse_graph(std::string_view text);

CoherenceGraph load_graph(const std::string& path);
void save_graph(const CoherenceGraph& graph, const std::string& path);

/// Graphviz rendering. Positive edges solid, negative dashed, explicit
/// zero-weight edges dotted. When a cut is given, rejected vertices are
/// filled and crossing edges drawn bold.
std::string to_dot(const CoherenceGraph& graph, const std::optional<LabelSet>& rejected = std::nullopt);

std::string format_part(const LabelSet& part);

} // namespace cdi

#endif // CDI_GRAPH_HPP
