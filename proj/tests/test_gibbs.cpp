#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "cdi/error.hpp"
#include "cdi/gibbs.hpp"
#include "support.hpp"

using namespace cdi;

namespace {

EnergySpectrum spectrum(std::vector<double> e) { return EnergySpectrum{std::move(e)}; }

// Share of total weight on the lowest K energies, computed directly.
double top_share(const std::vector<double>& e, std::size_t k, double beta) {
    double top = 0.0;
    double all = 0.0;
    for (std::size_t i = 0; i < e.size(); ++i) {
        const double t = std::exp(-beta * e[i]);
        all += t;
        if (i < k) {
            top += t;
        }
    }
    return top / all;
}

}  // namespace

TEST_CASE("spectrum from ranked cuts") {
    RankedCuts ranked;
    ranked.cuts = {{{"c"}, 2.0}, {{}, 0.0}, {{"a"}, -2.0}};
    const auto s = spectrum_from_cuts(ranked, 3);
    CHECK(s.energies == std::vector<double>{-2.0, 0.0, 2.0});
    CHECK(spectrum_from_cuts(ranked, 2).energies == std::vector<double>{-2.0, 0.0});
    CHECK_THROWS_AS(spectrum_from_cuts(ranked, 4), DomainError);
    CHECK_THROWS_AS(spectrum_from_cuts(ranked, 1), DomainError);
}

TEST_CASE("beta has the closed form ln 9 for [0,1,1,1] with K = 1") {
    const auto s = spectrum({0.0, 1.0, 1.0, 1.0});
    const double beta = solve_beta(s, 1);
    CHECK(std::abs(beta - std::log(9.0)) < 1e-9);
    CHECK(std::abs(beta_equation(s, 1, beta)) / partition_sum(s, beta) < 1e-10);

    const auto w = gibbs_weights(s, beta);
    // beta carries a relative error of ~1e-10, so the weights do too.
    CHECK(w[0] == doctest::Approx(0.75).epsilon(1e-9));
    CHECK(w[1] == doctest::Approx(1.0 / 12.0).epsilon(1e-9));
    const auto exact = gibbs_weights(s, std::log(9.0));
    CHECK(exact[0] == doctest::Approx(0.75).epsilon(1e-14));

    CHECK_THROWS_AS(solve_beta(s, 2), DomainError);
    CHECK_THROWS_AS(solve_beta(s, 0), DomainError);
}

TEST_CASE("beta solves the defining equation against a grid scan") {
    const std::vector<double> e{0.0, 1.0, 2.0, 3.0, 3.5, 4.0};
    const auto s = spectrum(e);
    for (std::size_t k = 1; 2 * k < e.size(); ++k) {
        const double beta = solve_beta(s, k);
        CHECK(std::abs(beta_equation(s, k, beta)) / partition_sum(s, beta) < 1e-10);
        // Top-K share equals 1 - K/N.
        const double target = 1.0 - static_cast<double>(k) / static_cast<double>(e.size());
        CHECK(top_share(e, k, beta) == doctest::Approx(target).epsilon(1e-9));
        // The share is monotone in beta, so a grid scan brackets the root.
        double below = 0.0;
        for (double b = 0.0; b < 50.0; b += 0.001) {
            if (top_share(e, k, b) < target) {
                below = b;
            }
        }
        CHECK(beta >= below - 1e-12);
        CHECK(beta <= below + 0.001 + 1e-12);
    }
}

TEST_CASE("beta is shift invariant and scales inversely with energy") {
    const std::vector<double> e{0.0, 0.5, 1.0, 1.0, 2.0};
    const double base = solve_beta(spectrum(e), 1);
    std::vector<double> shifted;
    std::vector<double> doubled;
    for (double v : e) {
        shifted.push_back(v + 100.0);
        doubled.push_back(2.0 * v);
    }
    CHECK(solve_beta(spectrum(shifted), 1) == doctest::Approx(base).epsilon(1e-9));
    CHECK(solve_beta(spectrum(doubled), 1) == doctest::Approx(base / 2.0).epsilon(1e-9));
}

TEST_CASE("beta needs a gap after the top K") {
    CHECK_THROWS_AS(solve_beta(spectrum({0.0, 0.0, 0.0, 0.0, 1.0}), 1), DomainError);
    CHECK_NOTHROW(solve_beta(spectrum({0.0, 0.0, 1.0, 1.0, 1.0}), 2));
}

TEST_CASE("Gibbs weights") {
    const auto s = spectrum({-2.0, -1.0, 0.0, 0.5, 3.0});
    const auto uniform = gibbs_weights(s, 0.0);
    for (double w : uniform) {
        CHECK(std::abs(w - 0.2) < 1e-12);
    }
    const auto w = gibbs_weights(s, 1.3);
    CHECK(std::accumulate(w.begin(), w.end(), 0.0) == doctest::Approx(1.0).epsilon(1e-14));
    for (std::size_t i = 1; i < w.size(); ++i) {
        CHECK(w[i] <= w[i - 1]);
        CHECK(w[i - 1] / w[i] ==
              doctest::Approx(std::exp(1.3 * (s.energies[i] - s.energies[i - 1]))).epsilon(1e-12));
    }
    // Large beta does not overflow.
    const auto sharp = gibbs_weights(s, 1e4);
    CHECK(sharp[0] == doctest::Approx(1.0));
    CHECK(sharp[1] == 0.0);
}

TEST_CASE("Silverman bandwidth") {
    const std::vector<double> xs{0.0, 0.0, 0.0, 1.0, 1.5, 2.0, 3.0, 3.0};
    const double n = 8.0;
    const double mean = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
    double ss = 0.0;
    for (double x : xs) {
        ss += (x - mean) * (x - mean);
    }
    const double sd = std::sqrt(ss / (n - 1.0));
    // Quartiles by linear interpolation: positions 1.75 and 5.25.
    const double q1 = 0.0;
    const double q3 = 2.0 + 0.25 * (3.0 - 2.0);
    const double expected = 0.9 * std::min(sd, (q3 - q1) / 1.34) * std::pow(n, -0.2);
    CHECK(silverman_bandwidth(xs) == doctest::Approx(expected).epsilon(1e-12));

    // Zero IQR falls back to the standard deviation.
    const std::vector<double> spike{0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 5.0};
    const double m2 = 5.0 / 8.0;
    const double sd2 = std::sqrt((7 * m2 * m2 + (5.0 - m2) * (5.0 - m2)) / 7.0);
    CHECK(silverman_bandwidth(spike) == doctest::Approx(0.9 * sd2 * std::pow(8.0, -0.2)).epsilon(1e-12));
}

TEST_CASE("KDE integrates to one") {
    const std::vector<double> xs{0.0, 0.2, 1.0, 1.1, 3.0};
    const auto c = gaussian_kde(xs, 0.3);
    CHECK(c.x.size() == kKdeGridPoints);
    double area = 0.0;
    for (std::size_t i = 1; i < c.x.size(); ++i) {
        area += 0.5 * (c.density[i] + c.density[i - 1]) * (c.x[i] - c.x[i - 1]);
    }
    CHECK(area == doctest::Approx(1.0).epsilon(0.01));
    CHECK(c.x.front() == doctest::Approx(-0.9));
    CHECK(c.x.back() == doctest::Approx(3.9));
    CHECK_THROWS_AS(gaussian_kde(xs, 0.0), DomainError);
}

TEST_CASE("K suggestion on a bimodal spectrum") {
    const auto s = spectrum({0.0, 0.0, 0.05, 2.0, 2.1, 2.2, 2.3, 2.5, 2.6, 3.0});
    const auto k = suggest_k(s);
    CHECK(k.k == 3);
    CHECK(k.threshold > 0.05);
    CHECK(k.threshold < 2.0);
    CHECK(suggest_k(s, k.bandwidth * 0.5).k == 3);
    // The cluster holds 30% of the spectrum, so the IQR spans the gap and
    // Silverman's rule is already wide; doubling it merges the two modes.
    CHECK_THROWS_AS(suggest_k(s, k.bandwidth * 2.0), NoGapError);
}

TEST_CASE("a well-separated minority cluster is found at 0.5x to 2x Silverman") {
    std::mt19937_64 rng(606);
    std::uniform_real_distribution<double> low(0.0, 0.1);
    std::uniform_real_distribution<double> high(3.0, 4.0);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t k = 1 + trial % 3;
        const std::size_t n = 5 * k + static_cast<std::size_t>(rng() % 8);
        std::vector<double> e;
        for (std::size_t i = 0; i < n; ++i) {
            e.push_back(i < k ? low(rng) : high(rng));
        }
        std::sort(e.begin(), e.end());
        const auto s = spectrum(e);
        const double h = silverman_bandwidth(e);
        for (double factor : {0.5, 0.75, 1.0, 1.5, 2.0}) {
            CAPTURE(trial);
            CAPTURE(factor);
            CHECK(suggest_k(s, h * factor).k == k);
        }
    }
}

TEST_CASE("K suggestion on the alternate toy spectrum") {
    // Energies of the 16 most coherent cuts of the 18-vertex fixture graph.
    const auto ranked = enumerate_cuts(load_graph(testsupport::fixture("wifi_large_alt_graph.json")), {}, 16);
    const auto s = spectrum_from_cuts(ranked, 16);
    CHECK(suggest_k(s).k == 3);
    const double beta = solve_beta(s, 3);
    const auto w = gibbs_weights(s, beta);
    CHECK(w[0] + w[1] + w[2] == doctest::Approx(1.0 - 3.0 / 16.0).epsilon(1e-9));
    CHECK(w[0] == doctest::Approx(w[2]));
}

TEST_CASE("K suggestion reports missing gaps") {
    CHECK_THROWS_AS(suggest_k(spectrum({1.0, 1.0, 1.0, 1.0, 1.0})), NoGapError);
    CHECK_THROWS_AS(suggest_k(spectrum({0.0, 1.0, 2.0})), DomainError);
    // Evenly spaced energies have one broad mode and no interior minimum.
    CHECK_THROWS_AS(suggest_k(spectrum({0.0, 1.0, 2.0, 3.0, 4.0, 5.0})), NoGapError);
}

TEST_CASE("CSV writers") {
    const auto s = spectrum({0.0, 1.0, 1.0, 1.0});
    const auto csv = gibbs_csv(s, gibbs_weights(s, std::log(9.0)));
    CHECK(csv.rfind("rank,energy,weight\n1,0,", 0) == 0);
    CHECK(std::stod(csv.substr(csv.find("1,0,") + 4)) == doctest::Approx(0.75).epsilon(1e-14));
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 5);
    const auto kde = kde_csv(gaussian_kde(s.energies, 0.5, 4));
    CHECK(kde.rfind("x,density\n", 0) == 0);
}
