#pragma once

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ddesteps/bounds.hpp"
#include "ddesteps/core.hpp"
#include "ddesteps/stepper.hpp"

namespace ddesteps {

struct LadderSpec {
    DdeProblem problem;
    std::vector<int> N_values;     // strictly increasing, each >= 1
    int refinement = 1000;         // reference mesh = refinement * max(N)
    std::optional<AssumptionProfile> profile;  // enables the theoretical rate

    void validate() const;
    int reference_intervals() const;
};

struct LadderRow {
    int N = 0;
    double h = 0.0;
    double sup_error = 0.0;
    bool diverged = false;
};

struct ConvergenceReport {
    std::vector<LadderRow> rows;  // sorted by N
    std::optional<double> slope, intercept;
    std::optional<double> theoretical_rate;
    bool rate_extrapolated = false;
    std::vector<std::string> warnings;
};

struct FitResult {
    double slope = 0.0;
    double intercept = 0.0;
    std::vector<std::string> warnings;  // one entry per excluded row
};

// Euler solve on the dense mesh, tagged as the reference trajectory.
Trajectory reference_solution(const DdeProblem& problem, int N_ref);

// Max over coarse nodes m of the Euclidean distance to reference node r*m,
// where r = N_ref / N must be an integer. NaN if either trajectory diverged.
double sup_error(const Trajectory& coarse, const Trajectory& reference, int jobs = 1);

// OLS fit of -log10(err) against log10(N). Rows with err <= 0 or non-finite
// err are excluded (noted in warnings); fewer than two usable rows throws
// DegenerateFitError.
FitResult fit_rate(std::span<const std::pair<double, double>> rows);

// Full sweep: one reference solve, one coarse solve per N (fanned out across
// jobs), sup-errors, regression, and the proved-rate attachment when a
// profile is present.
ConvergenceReport run_ladder(const LadderSpec& spec, int jobs = 1);

}  // namespace ddesteps
