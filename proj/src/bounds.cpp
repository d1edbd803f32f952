#include "ddesteps/bounds.hpp"

#include <algorithm>
#include <cmath>

namespace ddesteps {

SolutionBounds analytic_solution_bounds(const AssumptionProfile& profile,
                                        const State& eta, double tau, int n) {
    profile.validate();
    if (!(tau > 0.0)) throw std::invalid_argument("tau must be positive");
    if (n < 0) throw std::invalid_argument("n must be >= 0");

    const double K = profile.K;
    SolutionBounds b;
    b.K_minus1 = norm2(eta);
    b.K_list.reserve(static_cast<std::size_t>(n) + 1);
    b.Kbar_list.reserve(static_cast<std::size_t>(n) + 1);

    double prev = b.K_minus1;  // K_{j-1}
    for (int j = 0; j <= n; ++j) {
        const double growth = K * (1.0 + prev) * tau;
        const double Kj = (prev + growth) * std::exp(growth);
        b.K_list.push_back(Kj);
        b.Kbar_list.push_back(K * (1.0 + prev) * (1.0 + Kj));
        prev = Kj;
    }
    return b;
}

std::vector<double> euler_trajectory_bound(const AssumptionProfile& profile,
                                           const State& eta, double tau, int n) {
    profile.validate();
    if (!(tau > 0.0)) throw std::invalid_argument("tau must be positive");
    if (n < 0) throw std::invalid_argument("n must be >= 0");

    const double K = profile.K;
    const double eta_norm = norm2(eta);
    std::vector<double> kt;
    kt.reserve(static_cast<std::size_t>(n) + 1);
    kt.push_back(std::exp(K * (1.0 + eta_norm) * tau) * (1.0 + eta_norm));
    for (int j = 1; j <= n; ++j) {
        kt.push_back(euler_bound_step(K, tau, kt.back()));
    }
    return kt;
}

double euler_bound_step(double K, double tau, double prev) {
    return std::exp(tau * K * (1.0 + prev)) * (prev + 1.0) - 1.0;
}

namespace {

// Exponent multiset for segment j with cascade gamma g.
std::vector<double> rate_terms(const AssumptionProfile& p, double g, int j) {
    const double ag = std::min(p.alpha, g);  // alpha ^ gamma
    std::vector<double> terms;
    if (j == 0) {
        terms.push_back(ag);
        for (double b : p.betas) terms.push_back(b);
        return terms;
    }
    for (int l = 1; l <= j; ++l) {
        const double gl1 = std::pow(g, l - 1);
        const double gl = std::pow(g, l);
        terms.push_back(0.5 * gl1);
        terms.push_back(gl * ag);
        for (double b : p.betas) terms.push_back(b * gl);
    }
    return terms;
}

}  // namespace

RateResult theoretical_rate(const AssumptionProfile& profile, int j) {
    profile.validate();
    if (j < 0) throw std::invalid_argument("segment index must be >= 0");
    RateResult r;
    r.extrapolated = !profile.canonical();
    const double g = *std::min_element(profile.gammas.begin(), profile.gammas.end());
    r.terms = rate_terms(profile, g, j);
    r.dominant = *std::min_element(r.terms.begin(), r.terms.end());
    return r;
}

RateExponents rate_exponents(const AssumptionProfile& profile, int n) {
    if (n < 0) throw std::invalid_argument("n must be >= 0");
    RateExponents out;
    out.per_segment.reserve(static_cast<std::size_t>(n) + 1);
    out.term_sets.reserve(static_cast<std::size_t>(n) + 1);
    for (int j = 0; j <= n; ++j) {
        RateResult r = theoretical_rate(profile, j);
        out.per_segment.push_back(r.dominant);
        out.term_sets.push_back(std::move(r.terms));
        out.extrapolated = r.extrapolated;
    }
    return out;
}

}  // namespace ddesteps
