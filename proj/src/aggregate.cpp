#include "cdi/aggregate.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "cdi/error.hpp"
#include "cdi/io.hpp"
#include "cdi/random.hpp"

namespace cdi {

namespace {

double quantile_sorted(const std::vector<double>& sorted, double q) {
    const double pos = q * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(pos);
    const double frac = pos - static_cast<double>(lo);
    if (lo + 1 >= sorted.size()) {
        return sorted.back();
    }
    return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

// Dense upper-triangle vectors of every sample, columns indexed like the
// first sample's labels.
std::vector<std::vector<double>> vectorize(std::span<const CoherenceGraph> samples) {
    const auto& ref = samples.front();
    const std::size_t n = ref.size();
    std::vector<std::vector<double>> out;
    out.reserve(samples.size());
    for (const auto& g : samples) {
        if (!g.same_labels(ref)) {
            throw DomainError("samples are defined over different label sets");
        }
        std::vector<std::size_t> map(n);
        for (std::size_t i = 0; i < n; ++i) {
            map[i] = *g.index_of(ref.labels()[i]);
        }
        std::vector<double> v;
        v.reserve(n * (n - 1) / 2);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i + 1; j < n; ++j) {
                v.push_back(g.weight(map[i], map[j]));
            }
        }
        out.push_back(std::move(v));
    }
    return out;
}

std::vector<double> median_vector(const std::vector<std::vector<double>>& vecs, std::span<const std::size_t> pick) {
    const std::size_t m = vecs.front().size();
    std::vector<double> out(m);
    std::vector<double> column(pick.size());
    for (std::size_t k = 0; k < m; ++k) {
        for (std::size_t s = 0; s < pick.size(); ++s) {
            column[s] = vecs[pick[s]][k];
        }
        out[k] = median(column);
    }
    return out;
}

double l1(const std::vector<double>& a, const std::vector<double>& b) {
    double total = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        total += std::abs(a[k] - b[k]);
    }
    return total;
}

} // namespace

double median(std::vector<double> values) {
    if (values.empty()) {
        throw DomainError("median of an empty list");
    }
    const std::size_t mid = values.size() / 2;
    std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid), values.end());
    const double upper = values[mid];
    if (values.size() % 2 == 1) {
        return upper;
    }
    const double lower = *std::max_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid));
    return lower + (upper - lower) / 2.0;
}

CoherenceGraph median_graph(std::span<const CoherenceGraph> samples) {
    if (samples.empty()) {
        throw DomainError("median_graph needs at least one sample");
    }
    const auto vecs = vectorize(samples);
    std::vector<std::size_t> all(samples.size());
    std::iota(all.begin(), all.end(), 0);
    const auto med = median_vector(vecs, all);

    const auto& labels = samples.front().labels();
    const std::size_t n = labels.size();
    std::vector<Edge> edges;
    std::size_t k = 0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j, ++k) {
            if (med[k] != 0.0) {
                edges.push_back({labels[i], labels[j], med[k]});
            }
        }
    }
    return CoherenceGraph(labels, edges);
}

ConvergenceProfile convergence_profile(std::span<const CoherenceGraph> samples, std::size_t trials,
                                       std::uint64_t seed) {
    if (samples.size() < 2) {
        throw DomainError("convergence profile needs at least two samples");
    }
    if (trials == 0) {
        throw DomainError("convergence profile needs at least one trial per subsample size");
    }
    const std::size_t total = samples.size();
    const auto vecs = vectorize(samples);
    std::vector<std::size_t> all(total);
    std::iota(all.begin(), all.end(), 0);
    const auto reference = median_vector(vecs, all);

    ConvergenceProfile profile;
    profile.trials = trials;
    profile.seed = seed;
    std::vector<std::size_t> perm(total);
    for (std::size_t n = 1; n <= total; ++n) {
        SubsampleStats stats;
        stats.n = n;
        stats.distances.reserve(trials);
        for (std::size_t t = 0; t < trials; ++t) {
            Rng rng(seed, n, t);
            std::iota(perm.begin(), perm.end(), 0);
            for (std::size_t i = 0; i < n; ++i) {
                std::swap(perm[i], perm[i + rng.below(total - i)]);
            }
            std::span<const std::size_t> pick(perm.data(), n);
            stats.distances.push_back(l1(median_vector(vecs, pick), reference));
        }
        auto sorted = stats.distances;
        std::sort(sorted.begin(), sorted.end());
        stats.min = sorted.front();
        stats.q1 = quantile_sorted(sorted, 0.25);
        stats.median = quantile_sorted(sorted, 0.5);
        stats.q3 = quantile_sorted(sorted, 0.75);
        stats.max = sorted.back();
        profile.per_n.push_back(std::move(stats));
    }
    return profile;
}

SampleSizeChoice pick_sample_size(const ConvergenceProfile& profile, double fraction) {
    if (profile.per_n.empty()) {
        throw DomainError("empty convergence profile");
    }
    if (!(fraction > 0.0 && fraction < 1.0)) {
        throw DomainError("stopping fraction must lie strictly between 0 and 1");
    }
    const double baseline = profile.per_n.front().median;
    if (baseline == 0.0) {
        return {1, true};
    }
    const double threshold = fraction * baseline;
    for (const auto& s : profile.per_n) {
        if (s.median < threshold) {
            return {s.n, true};
        }
    }
    return {profile.per_n.size(), false};
}

std::string profile_csv(const ConvergenceProfile& profile) {
    std::ostringstream out;
    out << "n,trial,distance\n";
    for (const auto& s : profile.per_n) {
        for (std::size_t t = 0; t < s.distances.size(); ++t) {
            out << s.n << ',' << t << ',' << format_real(s.distances[t]) << '\n';
        }
    }
    return out.str();
}

std::string profile_summary_csv(const ConvergenceProfile& profile) {
    std::ostringstream out;
    out << "n,min,q1,median,q3,max\n";
    for (const auto& s : profile.per_n) {
        out << s.n << ',' << format_real(s.min) << ',' << format_real(s.q1) << ',' << format_real(s.median) << ','
            << format_real(s.q3) << ',' << format_real(s.max) << '\n';
    }
    return out.str();
}

ConvergenceProfile parse_profile_summary(std::string_view csv) {
    ConvergenceProfile profile;
    std::istringstream in{std::string(csv)};
    std::string line;
    std::getline(in, line);
    if (line.rfind("n,min,q1,median,q3,max", 0) != 0) {
        throw ParseError("convergence summary has an unexpected header");
    }
    while (std::getline(in, line)) {
        if (line.empty()) {
            continue;
        }
        std::istringstream row(line);
        std::string cell;
        std::vector<std::string> cells;
        while (std::getline(row, cell, ',')) {
            cells.push_back(cell);
        }
        if (cells.size() != 6) {
            throw ParseError("convergence summary row needs 6 columns: " + line);
        }
        try {
            SubsampleStats s;
            s.n = std::stoul(cells[0]);
            s.min = std::stod(cells[1]);
            s.q1 = std::stod(cells[2]);
            s.median = std::stod(cells[3]);
            s.q3 = std::stod(cells[4]);
            s.max = std::stod(cells[5]);
            if (s.n != profile.per_n.size() + 1) {
                throw ParseError("convergence summary rows must list n = 1, 2, ... in order");
            }
            profile.per_n.push_back(s);
        } catch (const std::logic_error&) {
            throw ParseError("bad number in convergence summary row: " + line);
        }
    }
    return profile;
}

} // namespace cdi
