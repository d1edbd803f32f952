#pragma once

#include <vector>

#include "ddesteps/core.hpp"

namespace ddesteps {

/// Per-segment a-priori bounds on the exact solution:
///   K_{-1} = ||eta||,
///   K_0    = (||eta|| + K(1+||eta||)tau) * e^{K(1+||eta||)tau},
///   K_{j+1}= (K_j + K(1+K_j)tau) * e^{K(1+K_j)tau},
/// and the segment Lipschitz constants Kbar_j = K(1+K_{j-1})(1+K_j).
/// The recursion grows tower-fast; overflow is reported as +inf.
struct SolutionBounds {
    double K_minus1 = 0.0;
    std::vector<double> K_list;     ///< K_0 .. K_n
    std::vector<double> Kbar_list;  ///< Kbar_0 .. Kbar_n
};

SolutionBounds analytic_solution_bounds(const AssumptionProfile& profile,
                                        const State& eta, double tau, int n);

/// Discrete Gronwall ceiling on the Euler iterates, per segment:
///   Ktilde_0    = e^{K(1+||eta||)tau} * (1+||eta||)        (seed, Delta=0)
///   Ktilde_{j+1}= e^{tau*K(1+Ktilde_j)} * (Ktilde_j+1) - 1
/// Overflow is reported as +inf ("no finite certificate").
std::vector<double> euler_trajectory_bound(const AssumptionProfile& profile,
                                           const State& eta, double tau, int n);

/// One step of the ceiling recursion: prev = Ktilde_j  ->  Ktilde_{j+1}.
double euler_bound_step(double K, double tau, double prev);

/// Convergence-rate exponents for one segment: the full multiset of h-powers
/// in the error bound and its minimum (the dominant, i.e. slowest, term).
///   j = 0   : { alpha ^ gamma (meet), beta_1, beta_2, ... }
///   j >= 1  : union over l = 1..j of
///             { gamma^{l-1}/2, gamma^l*(alpha^gamma), beta_i*gamma^l ... }
/// Generalized profiles (more than two betas / one gamma) are evaluated with
/// all betas and the cascade gamma = min(gammas), flagged `extrapolated`.
struct RateResult {
    double dominant = 1.0;
    std::vector<double> terms;
    bool extrapolated = false;
};

RateResult theoretical_rate(const AssumptionProfile& profile, int j);

/// theoretical_rate evaluated for every segment 0..n.
struct RateExponents {
    std::vector<double> per_segment;
    std::vector<std::vector<double>> term_sets;
    bool extrapolated = false;
};

RateExponents rate_exponents(const AssumptionProfile& profile, int n);

}  // namespace ddesteps
