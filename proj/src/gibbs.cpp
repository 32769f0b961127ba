#include "cdi/gibbs.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>

#include "cdi/error.hpp"
#include "cdi/io.hpp"

namespace cdi {

EnergySpectrum spectrum_from_cuts(const RankedCuts& ranked, std::size_t m) {
    if (m < 2) {
        throw DomainError("an energy spectrum needs at least 2 cuts");
    }
    if (ranked.cuts.size() < m) {
        throw DomainError("requested " + std::to_string(m) + " cuts but only " + std::to_string(ranked.cuts.size()) +
                          " are available");
    }
    EnergySpectrum s;
    s.energies.reserve(m);
    for (std::size_t i = 0; i < m; ++i) {
        const double e = -ranked.cuts[i].coherence;
        s.energies.push_back(e == 0.0 ? 0.0 : e);
    }
    std::sort(s.energies.begin(), s.energies.end());
    return s;
}

double silverman_bandwidth(std::span<const double> values) {
    const auto n = static_cast<double>(values.size());
    if (values.size() < 2) {
        return 0.0;
    }
    const double mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
    double ss = 0.0;
    for (double v : values) {
        ss += (v - mean) * (v - mean);
    }
    const double sd = std::sqrt(ss / (n - 1.0));
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    auto quantile = [&](double q) {
        const double pos = q * (n - 1.0);
        const auto lo = static_cast<std::size_t>(pos);
        if (lo + 1 >= sorted.size()) {
            return sorted.back();
        }
        return sorted[lo] + (pos - static_cast<double>(lo)) * (sorted[lo + 1] - sorted[lo]);
    };
    const double iqr = quantile(0.75) - quantile(0.25);
    const double spread = iqr > 0.0 ? std::min(sd, iqr / 1.34) : sd;
    return 0.9 * spread * std::pow(n, -0.2);
}

DensityCurve gaussian_kde(std::span<const double> values, double bandwidth, std::size_t points) {
    if (values.empty() || !(bandwidth > 0.0) || points < 3) {
        throw DomainError("KDE needs data, a positive bandwidth and at least 3 grid points");
    }
    const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
    const double lo = *lo_it - 3.0 * bandwidth;
    const double hi = *hi_it + 3.0 * bandwidth;
    const double step = (hi - lo) / static_cast<double>(points - 1);
    const double norm = 1.0 / (static_cast<double>(values.size()) * bandwidth * std::sqrt(2.0 * std::numbers::pi));
    DensityCurve c;
    c.x.resize(points);
    c.density.resize(points);
    for (std::size_t i = 0; i < points; ++i) {
        const double x = lo + step * static_cast<double>(i);
        double sum = 0.0;
        for (double v : values) {
            const double z = (x - v) / bandwidth;
            sum += std::exp(-0.5 * z * z);
        }
        c.x[i] = x;
        c.density[i] = sum * norm;
    }
    return c;
}

KSuggestion suggest_k(const EnergySpectrum& spectrum, std::optional<double> bandwidth) {
    const auto& e = spectrum.energies;
    if (e.size() < 4) {
        throw DomainError("suggesting K needs at least 4 energies");
    }
    KSuggestion out;
    out.bandwidth = bandwidth ? *bandwidth : silverman_bandwidth(e);
    if (!(out.bandwidth > 0.0)) {
        throw NoGapError("energy spectrum is flat; supply K explicitly");
    }
    out.curve = gaussian_kde(e, out.bandwidth);
    const auto& d = out.curve.density;
    std::size_t i = 1;
    // Climb to the lowest-energy mode, then descend to the next minimum.
    while (i + 1 < d.size() && !(d[i] > d[i - 1] && d[i] >= d[i + 1])) {
        ++i;
    }
    ++i;
    while (i + 1 < d.size() && !(d[i] < d[i - 1] && d[i] <= d[i + 1])) {
        ++i;
    }
    if (i + 1 >= d.size()) {
        throw NoGapError("energy density has no minimum above its lowest mode; supply K explicitly");
    }
    out.threshold = out.curve.x[i];
    out.k = static_cast<std::size_t>(std::count_if(e.begin(), e.end(), [&](double v) { return v < out.threshold; }));
    if (out.k == 0 || out.k == e.size()) {
        throw NoGapError("density threshold does not separate the spectrum; supply K explicitly");
    }
    return out;
}

double beta_equation(const EnergySpectrum& spectrum, std::size_t k, double beta) {
    const auto& e = spectrum.energies;
    const double base = e.front();
    double top = 0.0;
    double all = 0.0;
    for (std::size_t i = 0; i < e.size(); ++i) {
        const double t = std::exp(-beta * (e[i] - base));
        all += t;
        if (i < k) {
            top += t;
        }
    }
    const double n = static_cast<double>(e.size());
    return top - (1.0 - static_cast<double>(k) / n) * all;
}

double partition_sum(const EnergySpectrum& spectrum, double beta) {
    const auto& e = spectrum.energies;
    double all = 0.0;
    for (double v : e) {
        all += std::exp(-beta * (v - e.front()));
    }
    return all;
}

double solve_beta(const EnergySpectrum& spectrum, std::size_t k) {
    const auto& e = spectrum.energies;
    const std::size_t n = e.size();
    if (n < 2 || !std::is_sorted(e.begin(), e.end())) {
        throw DomainError("energy spectrum must hold at least 2 ascending energies");
    }
    if (k < 1 || 2 * k >= n) {
        throw DomainError("K = " + std::to_string(k) + " violates 1 <= K < N/2 with N = " + std::to_string(n) +
                          "; no root at beta >= 0");
    }
    if (!(e[k] > e[k - 1])) {
        throw DomainError("no energy gap after the K = " + std::to_string(k) + " lowest cuts");
    }
    double lo = 0.0;
    double hi = 1.0;
    int expansions = 0;
    while (beta_equation(spectrum, k, hi) < 0.0) {
        lo = hi;
        hi *= 2.0;
        if (++expansions > 200) {
            throw DomainError("could not bracket beta");
        }
    }
    while (hi - lo > kBetaRelTolerance * hi) {
        const double mid = lo + (hi - lo) / 2.0;
        if (mid <= lo || mid >= hi) {
            break;
        }
        if (beta_equation(spectrum, k, mid) < 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return lo + (hi - lo) / 2.0;
}

std::vector<double> gibbs_weights(const EnergySpectrum& spectrum, double beta) {
    const auto& e = spectrum.energies;
    if (e.empty() || !std::isfinite(beta)) {
        throw DomainError("Gibbs weights need energies and a finite beta");
    }
    double shift = -beta * e.front();
    for (double v : e) {
        shift = std::max(shift, -beta * v);
    }
    std::vector<double> w(e.size());
    double z = 0.0;
    for (std::size_t i = 0; i < e.size(); ++i) {
        w[i] = std::exp(-beta * e[i] - shift);
        z += w[i];
    }
    for (double& x : w) {
        x /= z;
    }
    return w;
}

std::string gibbs_csv(const EnergySpectrum& spectrum, const std::vector<double>& weights) {
    std::ostringstream out;
    out << "rank,energy,weight\n";
    for (std::size_t i = 0; i < spectrum.size(); ++i) {
        out << i + 1 << ',' << format_real(spectrum.energies[i]) << ',' << format_real(weights.at(i)) << '\n';
    }
    return out.str();
}

std::string kde_csv(const DensityCurve& curve) {
    std::ostringstream out;
    out << "x,density\n";
    for (std::size_t i = 0; i < curve.x.size(); ++i) {
        out << format_real(curve.x[i]) << ',' << format_real(curve.density[i]) << '\n';
    }
    return out.str();
}

} // namespace cdi
