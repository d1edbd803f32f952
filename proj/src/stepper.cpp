#include "ddesteps/stepper.hpp"

#include <cmath>
#include <sstream>

namespace ddesteps {

namespace {

bool all_finite(std::span<const double> v) {
    for (double x : v)
        if (!std::isfinite(x)) return false;
    return true;
}

}  // namespace

std::vector<long> lag_offsets(const DdeProblem& problem, int N) {
    std::vector<long> offsets;
    offsets.reserve(problem.lags.size());
    for (double lag : problem.lags) {
        long m;
        if (lag == problem.tau) {
            m = N;  // the base lag is a whole window by definition
        } else {
            // Evaluate lag/h = lag*N/tau in 80-bit precision; a pure-double
            // round trip through h can sit 2 ulp off an integer for valid
            // grids, which would wrongly reject them.
            const long double q =
                static_cast<long double>(lag) * static_cast<long double>(N) /
                static_cast<long double>(problem.tau);
            long double r = std::round(q);
            const long double ulp = std::ldexp(std::fabs(q) > 1.0L ? std::fabs(q) : 1.0L, -63);
            bool aligned = std::fabs(q - r) <= ulp;
            if (!aligned) {
                // Also honor the working-precision contract: accept when the
                // plain double quotient lag/h lands within 1 ulp of an integer
                // (decimal lags like 0.3 with tau = 0.1 carry representation
                // error larger than the 80-bit tolerance above).
                const double h = problem.tau / N;
                const double qd = lag / h;
                const double rd = std::round(qd);
                const double ulpd = std::nextafter(std::fabs(qd), INFINITY) - std::fabs(qd);
                if (std::fabs(qd - rd) <= ulpd) {
                    aligned = true;
                    r = static_cast<long double>(rd);
                }
            }
            if (!aligned) {
                std::ostringstream msg;
                msg << "lag " << lag << " is not a whole number of steps for h = tau/N = "
                    << problem.tau / N
                    << "; the method of steps serves delayed values from mesh nodes only "
                       "(no dense output / interpolation), so every lag must be an exact "
                       "integer multiple of the step. Pick N accordingly.";
                throw ConfigError(msg.str());
            }
            m = static_cast<long>(r);
        }
        if (m < 1)
            throw ConfigError("lag smaller than the step: delayed arguments must come "
                              "from already-computed nodes (need lag >= h)");
        offsets.push_back(m);
    }
    return offsets;
}

Trajectory euler_solve_dde(const DdeProblem& problem, int N) {
    problem.validate();
    if (N < 1) throw std::invalid_argument("euler_solve_dde needs N >= 1");
    const std::vector<long> offsets = lag_offsets(problem, N);

    const Mesh mesh(N, problem.tau, problem.horizon);
    const int d = problem.rhs.dim;
    const auto dd = static_cast<std::size_t>(d);

    Trajectory traj{mesh, d, {}, problem.tag, false, false, 0};
    traj.data.resize(mesh.node_count() * dd);
    std::copy(problem.eta.begin(), problem.eta.end(), traj.data.begin());

    const double h = mesh.step();
    const std::span<const double> eta_view(problem.eta);
    std::vector<std::span<const double>> zs(offsets.size());
    State deriv(dd);

    const std::size_t steps = mesh.total_steps();
    for (std::size_t m = 0; m < steps; ++m) {
        const auto [j, k] = unflatten_index(m, mesh);
        const double t = mesh.node_time(j, k);
        for (std::size_t i = 0; i < offsets.size(); ++i) {
            const long back = static_cast<long>(m) - offsets[i];
            zs[i] = back <= 0 ? eta_view
                              : std::span<const double>(
                                    traj.data.data() + static_cast<std::size_t>(back) * dd, dd);
        }
        const std::span<const double> y(traj.data.data() + m * dd, dd);
        problem.rhs.eval(t, y, zs, deriv);
        const std::span<double> next(traj.data.data() + (m + 1) * dd, dd);
        for (std::size_t i = 0; i < dd; ++i) next[i] = y[i] + h * deriv[i];
        if (!all_finite(next)) {
            traj.diverged = true;
            traj.diverged_at = m + 1;
            traj.data.resize((m + 1) * dd);  // keep the finite prefix
            break;
        }
    }
    return traj;
}

std::span<const double> OdePath::state(std::size_t k) const {
    const auto d = static_cast<std::size_t>(dim);
    if ((k + 1) * d > data.size()) throw std::out_of_range("ode path index out of range");
    return {data.data() + k * d, d};
}

double OdePath::time_at(std::size_t k) const {
    return a + static_cast<double>(k) * h_;
}

OdePath euler_solve_ode(const OdeRhs& g, const State& xi, double Delta,
                        const State& y0, int N) {
    if (g.dim < 1 || !g.eval) throw std::invalid_argument("bad ODE right-hand side");
    if (!(g.a < g.b)) throw std::invalid_argument("ODE interval needs a < b");
    if (N < 1) throw std::invalid_argument("euler_solve_ode needs N >= 1");
    if (xi.size() != static_cast<std::size_t>(g.dim) || y0.size() != xi.size())
        throw std::invalid_argument("state dimensions do not match the rhs");
    if (!(Delta >= 0.0)) throw std::invalid_argument("Delta must be >= 0");

    State diff(xi.size());
    for (std::size_t i = 0; i < xi.size(); ++i) diff[i] = xi[i] - y0[i];
    if (norm2(diff) > Delta)
        throw std::invalid_argument("start y0 lies outside the ball B(xi, Delta)");

    const auto dd = static_cast<std::size_t>(g.dim);
    const double h = (g.b - g.a) / N;
    OdePath path{g.a, g.b, g.dim, {}, h};
    path.data.resize((static_cast<std::size_t>(N) + 1) * dd);
    std::copy(y0.begin(), y0.end(), path.data.begin());

    State deriv(dd);
    for (std::size_t k = 0; k < static_cast<std::size_t>(N); ++k) {
        const double t = g.a + static_cast<double>(k) * h;
        const std::span<const double> y(path.data.data() + k * dd, dd);
        g.eval(t, y, deriv);
        const std::span<double> next(path.data.data() + (k + 1) * dd, dd);
        for (std::size_t i = 0; i < dd; ++i) next[i] = y[i] + h * deriv[i];
    }
    return path;
}

}  // namespace ddesteps
