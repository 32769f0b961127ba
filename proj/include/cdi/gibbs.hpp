#ifndef CDI_GIBBS_HPP
#define CDI_GIBBS_HPP

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cdi/solver.hpp"

namespace cdi {

// Energies E = -coherence of ranked cuts, ascending.
struct EnergySpectrum {
    std::vector<double> energies;

    std::size_t size() const { return energies.size(); }
};

/// Energies of the top `m` cuts. Throws DomainError if fewer than m (or
/// fewer than 2) cuts are available.
EnergySpectrum spectrum_from_cuts(const RankedCuts& ranked, std::size_t m);

// 0.9 * min(sd, IQR / 1.34) * N^(-1/5); falls back to sd when the IQR is 0.
double silverman_bandwidth(std::span<const double> values);

struct DensityCurve {
    std::vector<double> x;
    std::vector<double> density;
};

inline constexpr std::size_t kKdeGridPoints = 512;

/// Gaussian KDE evaluated on an even grid over [min - 3h, max + 3h].
DensityCurve gaussian_kde(std::span<const double> values, double bandwidth, std::size_t points = kKdeGridPoints);

struct KSuggestion {
    std::size_t k = 0;
    double threshold = 0.0;
    double bandwidth = 0.0;
    DensityCurve curve;
};

/// Thresholds the spectrum at the first density minimum past the
/// lowest-energy mode; K counts the energies below it. Throws NoGapError
/// when the density has no such minimum, and DomainError when N < 4.
KSuggestion suggest_k(const EnergySpectrum& spectrum, std::optional<double> bandwidth = std::nullopt);

/// Z(beta; K) - (1 - K/N) Z(beta; N), scaled by exp(beta * E_min).
double beta_equation(const EnergySpectrum& spectrum, std::size_t k, double beta);

// Z(beta; N) with the same scaling as beta_equation.
double partition_sum(const EnergySpectrum& spectrum, double beta);

inline constexpr double kBetaRelTolerance = 1e-10;

/// Root of beta_equation on beta >= 0 by bracket doubling from [0, 1] and
/// bisection. Requires 1 <= K < N/2 and E_{K+1} > E_K.
double solve_beta(const EnergySpectrum& spectrum, std::size_t k);

/// exp(-beta E_i) / Z, shifted by the largest exponent before summing.
std::vector<double> gibbs_weights(const EnergySpectrum& spectrum, double beta);

struct GibbsResult {
    double beta = 0.0;
    std::size_t k = 0;
    std::vector<double> weights;
};

std::string gibbs_csv(const EnergySpectrum& spectrum, const std::vector<double>& weights);
std::string kde_csv(const DensityCurve& curve);

} // namespace cdi

#endif // CDI_GIBBS_HPP
