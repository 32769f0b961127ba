#include "cdi/graph.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <sstream>
#include <unordered_map>

#include <json.hpp>

#include "cdi/error.hpp"
#include "cdi/io.hpp"

namespace cdi {

namespace {

std::pair<std::string_view, std::string_view> split_label(std::string_view s) {
    std::size_t k = s.size();
    while (k > 0 && std::isdigit(static_cast<unsigned char>(s[k - 1]))) {
        --k;
    }
    return {s.substr(0, k), s.substr(k)};
}

std::string_view strip_zeros(std::string_view digits) {
    std::size_t k = 0;
    while (k + 1 < digits.size() && digits[k] == '0') {
        ++k;
    }
    return digits.substr(k);
}

} // namespace

bool LabelLess::operator()(std::string_view a, std::string_view b) const {
    auto [pa, da] = split_label(a);
    auto [pb, db] = split_label(b);
    if (pa != pb) {
        return pa < pb;
    }
    auto na = strip_zeros(da);
    auto nb = strip_zeros(db);
    if (na.size() != nb.size()) {
        return na.size() < nb.size();
    }
    if (na != nb) {
        return na < nb;
    }
    return a < b;
}

bool is_valid_label(std::string_view label) {
    std::size_t k = 0;
    while (k < label.size() && std::isalpha(static_cast<unsigned char>(label[k]))) {
        ++k;
    }
    if (k == 0) {
        return false;
    }
    return std::all_of(label.begin() + static_cast<std::ptrdiff_t>(k), label.end(),
                       [](char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; });
}

CoherenceGraph::CoherenceGraph(std::vector<std::string> labels, std::span<const Edge> edges)
    : labels_(std::move(labels)) {
    const std::size_t n = labels_.size();
    std::unordered_map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < n; ++i) {
        if (!is_valid_label(labels_[i])) {
            throw ParseError("invalid label '" + labels_[i] + "' (expected letters followed by digits)");
        }
        if (!index.emplace(labels_[i], i).second) {
            throw ParseError("duplicate label '" + labels_[i] + "'");
        }
    }
    dense_.assign(n * n, 0.0);
    present_.assign(n * n, 0);
    for (const auto& e : edges) {
        auto iu = index.find(e.u);
        auto iv = index.find(e.v);
        if (iu == index.end() || iv == index.end()) {
            throw ParseError("edge (" + e.u + ", " + e.v + ") has an endpoint not in labels");
        }
        if (iu->second == iv->second) {
            throw ParseError("self-loop on '" + e.u + "'");
        }
        if (!std::isfinite(e.w) || e.w < -1.0 || e.w > 1.0) {
            throw ParseError("weight " + format_real(e.w) + " on (" + e.u + ", " + e.v + ") outside [-1, 1]");
        }
        const std::size_t a = iu->second;
        const std::size_t b = iv->second;
        if (present_[a * n + b]) {
            throw ParseError("duplicate edge (" + e.u + ", " + e.v + ")");
        }
        present_[a * n + b] = present_[b * n + a] = 1;
        dense_[a * n + b] = dense_[b * n + a] = e.w;
    }
}

std::optional<std::size_t> CoherenceGraph::index_of(std::string_view label) const {
    auto it = std::find(labels_.begin(), labels_.end(), label);
    if (it == labels_.end()) {
        return std::nullopt;
    }
    return static_cast<std::size_t>(it - labels_.begin());
}

double CoherenceGraph::weight(std::string_view u, std::string_view v) const {
    auto i = index_of(u);
    auto j = index_of(v);
    if (!i || !j) {
        throw DomainError("unknown label in weight lookup");
    }
    return weight(*i, *j);
}

std::vector<Edge> CoherenceGraph::edges() const {
    std::vector<Edge> out;
    const std::size_t n = labels_.size();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (present_[i * n + j]) {
                const bool swap = LabelLess{}(labels_[j], labels_[i]);
                out.push_back({swap ? labels_[j] : labels_[i], swap ? labels_[i] : labels_[j], dense_[i * n + j]});
            }
        }
    }
    std::sort(out.begin(), out.end(), [](const Edge& a, const Edge& b) {
        if (a.u != b.u) {
            return LabelLess{}(a.u, b.u);
        }
        return LabelLess{}(a.v, b.v);
    });
    return out;
}

bool CoherenceGraph::same_labels(const CoherenceGraph& other) const {
    if (labels_.size() != other.labels_.size()) {
        return false;
    }
    LabelSet mine(labels_.begin(), labels_.end());
    return std::all_of(other.labels_.begin(), other.labels_.end(),
                       [&](const std::string& l) { return mine.count(l) == 1; });
}

bool CoherenceGraph::operator==(const CoherenceGraph& other) const {
    return labels_ == other.labels_ && dense_ == other.dense_ && present_ == other.present_;
}

double coherence(const CoherenceGraph& graph, const LabelSet& part) {
    const std::size_t n = graph.size();
    std::vector<char> inside(n, 0);
    for (const auto& label : part) {
        auto i = graph.index_of(label);
        if (!i) {
            throw DomainError("label '" + label + "' is not in the graph");
        }
        inside[*i] = 1;
    }
    double crossing = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (inside[i] != inside[j]) {
                crossing += graph.weight(i, j);
            }
        }
    }
    return crossing == 0.0 ? 0.0 : -crossing;
}

double l1_distance(const CoherenceGraph& a, const CoherenceGraph& b) {
    if (!a.same_labels(b)) {
        throw DomainError("l1_distance: graphs have different label sets");
    }
    const std::size_t n = a.size();
    std::vector<std::size_t> map(n);
    for (std::size_t i = 0; i < n; ++i) {
        map[i] = *b.index_of(a.labels()[i]);
    }
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            total += std::abs(a.weight(i, j) - b.weight(map[i], map[j]));
        }
    }
    return total;
}

std::string serialize(const CoherenceGraph& graph) {
    nlohmann::ordered_json doc;
    doc["labels"] = graph.labels();
    auto edges = nlohmann::ordered_json::array();
    for (const auto& e : graph.edges()) {
        edges.push_back({{"u", e.u}, {"v", e.v}, {"w", e.w}});
    }
    doc["edges"] = std::move(edges);
    return doc.dump(2) + "\n";
}

CoherenceGraph parse_graph(std::string_view text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("graph document is not valid JSON: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("labels") || !doc["labels"].is_array()) {
        throw ParseError("graph document needs a 'labels' array");
    }
    std::vector<std::string> labels;
    for (const auto& l : doc["labels"]) {
        if (!l.is_string()) {
            throw ParseError("graph labels must be strings");
        }
        labels.push_back(l.get<std::string>());
    }
    std::vector<Edge> edges;
    if (doc.contains("edges")) {
        if (!doc["edges"].is_array()) {
            throw ParseError("graph 'edges' must be an array");
        }
        for (const auto& e : doc["edges"]) {
            if (!e.is_object() || !e.contains("u") || !e.contains("v") || !e.contains("w") || !e["u"].is_string() ||
                !e["v"].is_string() || !e["w"].is_number()) {
                throw ParseError("each edge needs string 'u', 'v' and numeric 'w'");
            }
            edges.push_back({e["u"].get<std::string>(), e["v"].get<std::string>(), e["w"].get<double>()});
        }
    }
    return CoherenceGraph(std::move(labels), edges);
}

CoherenceGraph load_graph(const std::string& path) {
    try {
        return parse_graph(read_file(path));
    } catch (const ParseError& e) {
        throw ParseError(path + ": " + e.what());
    }
}

void save_graph(const CoherenceGraph& graph, const std::string& path) {
    write_file(path, serialize(graph));
}

std::string to_dot(const CoherenceGraph& graph, const std::optional<LabelSet>& rejected) {
    std::ostringstream out;
    out << "graph coherence {\n";
    out << "  node [shape=circle];\n";
    for (const auto& label : graph.labels()) {
        out << "  \"" << label << "\"";
        if (rejected && rejected->count(label)) {
            out << " [style=filled, fillcolor=lightgray, xlabel=\"rejected\"]";
        }
        out << ";\n";
    }
    for (const auto& e : graph.edges()) {
        std::string style = "dotted";
        std::string color = "gray";
        if (e.w > 0) {
            style = "solid";
            color = "blue";
        } else if (e.w < 0) {
            style = "dashed";
            color = "red";
        }
        out << "  \"" << e.u << "\" -- \"" << e.v << "\" [label=\"" << format_real(e.w) << "\", style=" << style
            << ", color=" << color;
        if (rejected && (rejected->count(e.u) != rejected->count(e.v))) {
            out << ", penwidth=2.5";
        }
        out << "];\n";
    }
    out << "}\n";
    return out.str();
}

std::string format_part(const LabelSet& part) {
    std::string s = "{";
    bool first = true;
    for (const auto& l : part) {
        if (!first) {
            s += ", ";
        }
        s += l;
        first = false;
    }
    return s + "}";
}

} // namespace cdi
