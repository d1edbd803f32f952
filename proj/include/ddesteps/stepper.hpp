#pragma once

#include <span>
#include <vector>

#include "ddesteps/core.hpp"

namespace ddesteps {

/// Right-hand side g(t, y) of an ODE on a fixed interval [a, b].
struct OdeRhs {
    int dim = 1;
    double a = 0.0;
    double b = 1.0;
    std::function<void(double t, std::span<const double> y, std::span<double> out)>
        eval;
};

/// Euler iterates of an ODE solve: N+1 states on t_k = a + k*(b-a)/N.
struct OdePath {
    double a = 0.0;
    double b = 1.0;
    int dim = 1;
    std::vector<double> data;

    [[nodiscard]] std::size_t nodes() const {
        return dim > 0 ? data.size() / static_cast<std::size_t>(dim) : 0;
    }
    [[nodiscard]] std::span<const double> state(std::size_t k) const;
    [[nodiscard]] double time_at(std::size_t k) const;
    [[nodiscard]] double step() const { return h_; }

    double h_ = 0.0;  ///< (b-a)/N, fixed at solve time
};

/// Integer step offsets m_i = lag_i / h for a solve at N intervals per lag
/// window.  Throws ConfigError when some lag is not a whole number of steps
/// (within 1 ulp, evaluated in extended precision): the method of steps has
/// no dense output, so an off-grid delayed value would need interpolation
/// this solver deliberately does not do.  Also rejects lags smaller than
/// the step (the delayed argument must come from already-computed nodes).
std::vector<long> lag_offsets(const DdeProblem& problem, int N);

/// Explicit Euler method of steps:
///   y_{m+1} = y_m + h * f(t_m, y_m, [y_{m - m_i}]_i),   m = 0..(n+1)N-1,
/// with y_0 = eta and lookups at m - m_i <= 0 served by the constant
/// history.  On the first non-finite state the solve stops, keeps the
/// finite prefix and flags the trajectory diverged.
Trajectory euler_solve_dde(const DdeProblem& problem, int N);

/// Explicit Euler for an ODE with a perturbed start: y_0 may sit anywhere
/// in the ball of radius Delta around xi (||xi - y0|| <= Delta is checked).
OdePath euler_solve_ode(const OdeRhs& g, const State& xi, double Delta,
                        const State& y0, int N);

}  // namespace ddesteps
