#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ddesteps/core.hpp"

namespace ddesteps {

// Axis-aligned sampling region for probing a right-hand side. The z block is
// the stacked delayed argument: num_lags * dim coordinates.
struct ProbeBox {
    double t_lo = 0.0, t_hi = 0.0;
    std::vector<double> y_lo, y_hi;
    std::vector<double> z_lo, z_hi;

    // Empty means there is nothing to sample: some coordinate has lo > hi.
    bool empty() const;
    void validate(int dim, int num_lags) const;
};

struct ProbeViolation {
    std::string condition;  // "growth", "one_sided", or "holder"
    std::int64_t sample = 0;
    double lhs = 0.0, rhs = 0.0;
    double t = 0.0;
    std::vector<double> y, z;
};

struct ProbeReport {
    std::int64_t samples = 0;
    // Envelope maxima over the sampled tuples/pairs; NaN when no usable data.
    double K_est = 0.0;
    double H_est = 0.0;
    double L_est = 0.0;
    // Log-log slopes fitted from single-coordinate-group variations.
    // NaN when the group never moved the RHS (e.g. alpha_fit for autonomous f).
    double alpha_fit = 0.0;
    double beta_fit = 0.0;
    double gamma_fit = 0.0;
    std::vector<ProbeViolation> violations;  // stored witnesses, capped
    std::int64_t total_violations = 0;

    bool held() const { return total_violations == 0; }
};

inline constexpr std::size_t kProbeViolationCap = 64;

// Samples the box with a deterministic low-discrepancy sequence, checks the
// growth / one-sided / Hölder-chain inequalities against the declared
// constants on every sample (pairs are consecutive points), and returns
// envelope estimates plus any violations found. Identical inputs give an
// identical report, independent of jobs.
ProbeReport probe_assumptions(const RhsFunction& rhs, const AssumptionProfile& declared,
                              const ProbeBox& box, std::int64_t samples,
                              std::uint64_t seed, int jobs = 1);

}  // namespace ddesteps
