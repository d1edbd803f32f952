#include "ddesteps/convergence.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

namespace ddesteps {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double node_distance(const Trajectory& coarse, const Trajectory& reference,
                     std::size_t m, std::size_t r) {
    const auto a = coarse.state(m);
    const auto b = reference.state(r * m);
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return std::sqrt(s);
}

}  // namespace

void LadderSpec::validate() const {
    problem.validate();
    if (N_values.empty()) throw ConfigError("ladder needs at least one interval count");
    int prev = 0;
    for (int N : N_values) {
        if (N < 1) throw ConfigError("ladder interval counts must be >= 1");
        if (N <= prev) throw ConfigError("ladder interval counts must be strictly increasing");
        prev = N;
    }
    if (refinement < 1) throw ConfigError("ladder refinement must be a positive integer");
    const long long n_ref =
        static_cast<long long>(refinement) * N_values.back();
    if (n_ref > std::numeric_limits<int>::max())
        throw ConfigError("reference mesh too fine: refinement * max(N) overflows");
    for (int N : N_values)
        if (n_ref % N != 0)
            throw ConfigError("ladder N=" + std::to_string(N) +
                              " does not divide the reference mesh " +
                              std::to_string(n_ref) +
                              "; reference nodes must contain coarse nodes");
    if (profile) profile->validate();
}

int LadderSpec::reference_intervals() const {
    return refinement * N_values.back();
}

Trajectory reference_solution(const DdeProblem& problem, int N_ref) {
    Trajectory traj = euler_solve_dde(problem, N_ref);
    traj.reference = true;
    return traj;
}

double sup_error(const Trajectory& coarse, const Trajectory& reference, int jobs) {
    if (coarse.problem_tag != reference.problem_tag)
        throw ConfigError("sup_error: trajectories come from different problems ('" +
                          coarse.problem_tag + "' vs '" + reference.problem_tag + "')");
    if (coarse.dim != reference.dim)
        throw ConfigError("sup_error: trajectory dimensions differ");
    if (coarse.mesh.lag() != reference.mesh.lag() ||
        coarse.mesh.horizon() != reference.mesh.horizon())
        throw ConfigError("sup_error: trajectories cover different problems in time");
    if (reference.mesh.intervals() % coarse.mesh.intervals() != 0)
        throw ConfigError("sup_error: reference mesh " +
                          std::to_string(reference.mesh.intervals()) +
                          " is not an integer refinement of " +
                          std::to_string(coarse.mesh.intervals()));
    if (coarse.diverged || reference.diverged) return kNaN;

    const std::size_t r = static_cast<std::size_t>(reference.mesh.intervals()) /
                          static_cast<std::size_t>(coarse.mesh.intervals());
    const std::size_t count = coarse.mesh.node_count();
    double worst = 0.0;
    if (jobs > 1) {
#pragma omp parallel for reduction(max : worst) schedule(static) num_threads(jobs)
        for (std::size_t m = 0; m < count; ++m)
            worst = std::max(worst, node_distance(coarse, reference, m, r));
    } else {
        for (std::size_t m = 0; m < count; ++m)
            worst = std::max(worst, node_distance(coarse, reference, m, r));
    }
    return worst;
}

FitResult fit_rate(std::span<const std::pair<double, double>> rows) {
    FitResult out;
    double sx = 0, sy = 0, sxy = 0, sxx = 0;
    long long used = 0;
    for (const auto& [N, err] : rows) {
        if (!(err > 0.0) || !std::isfinite(err)) {
            char msg[160];
            std::snprintf(msg, sizeof msg,
                          "excluded N=%g from the fit (error %g carries no rate information)",
                          N, err);
            out.warnings.push_back(msg);
            continue;
        }
        const double x = std::log10(N);
        const double y = -std::log10(err);
        sx += x;
        sy += y;
        sxy += x * y;
        sxx += x * x;
        ++used;
    }
    if (used < 2)
        throw DegenerateFitError("rate fit needs at least two rows with positive finite error");
    const double denom = used * sxx - sx * sx;
    if (denom == 0.0)
        throw DegenerateFitError("rate fit needs at least two distinct interval counts");
    out.slope = (used * sxy - sx * sy) / denom;
    out.intercept = (sy - out.slope * sx) / used;
    return out;
}

ConvergenceReport run_ladder(const LadderSpec& spec, int jobs) {
    spec.validate();
    ConvergenceReport report;

    for (int N : spec.N_values)
        if (spec.problem.tau / N >= 0.5)
            report.warnings.push_back(
                "coarse step tau/N = " + std::to_string(spec.problem.tau / N) + " for N=" +
                std::to_string(N) +
                " is >= 1/2; the proved error bound only covers finer meshes");

    // Alignment must hold for every mesh in the sweep; checking up front keeps
    // the parallel solve loop exception-free.
    for (int N : spec.N_values) lag_offsets(spec.problem, N);
    lag_offsets(spec.problem, spec.reference_intervals());

    const Trajectory reference = reference_solution(spec.problem, spec.reference_intervals());
    if (reference.diverged)
        report.warnings.push_back("reference solve diverged at node " +
                                  std::to_string(reference.diverged_at) +
                                  "; every error below is undefined");

    const int n_rows = static_cast<int>(spec.N_values.size());
    report.rows.resize(n_rows);
    if (jobs > 1) {
#pragma omp parallel for schedule(dynamic) num_threads(jobs)
        for (int i = 0; i < n_rows; ++i) {
            const int N = spec.N_values[i];
            const Trajectory coarse = euler_solve_dde(spec.problem, N);
            report.rows[i] = {N, spec.problem.tau / N, sup_error(coarse, reference),
                              coarse.diverged};
        }
    } else {
        for (int i = 0; i < n_rows; ++i) {
            const int N = spec.N_values[i];
            const Trajectory coarse = euler_solve_dde(spec.problem, N);
            report.rows[i] = {N, spec.problem.tau / N, sup_error(coarse, reference),
                              coarse.diverged};
        }
    }

    for (const LadderRow& row : report.rows)
        if (row.diverged)
            report.warnings.push_back("solve at N=" + std::to_string(row.N) +
                                      " diverged; its row is excluded from the fit");

    std::vector<std::pair<double, double>> fit_rows;
    fit_rows.reserve(report.rows.size());
    bool any_positive = false;
    for (const LadderRow& row : report.rows) {
        fit_rows.emplace_back(row.N, row.sup_error);
        if (row.sup_error > 0.0 && std::isfinite(row.sup_error)) any_positive = true;
    }
    if (!any_positive)
        report.warnings.push_back(
            "all-zero errors: no ladder row carries rate information; slope undefined");
    try {
        FitResult fit = fit_rate(fit_rows);
        report.slope = fit.slope;
        report.intercept = fit.intercept;
        for (std::string& w : fit.warnings) report.warnings.push_back(std::move(w));
    } catch (const DegenerateFitError& e) {
        if (any_positive) report.warnings.push_back(e.what());
    }

    if (spec.profile) {
        const RateResult rate = theoretical_rate(*spec.profile, spec.problem.horizon);
        report.theoretical_rate = rate.dominant;
        report.rate_extrapolated = rate.extrapolated;
    }
    return report;
}

}  // namespace ddesteps
