#include "ddesteps/core.hpp"

#include <algorithm>
#include <cmath>

namespace ddesteps {

double norm2(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

State eval_rhs(const RhsFunction& rhs, double t, const State& y,
               const std::vector<State>& zs) {
    std::vector<std::span<const double>> views;
    views.reserve(zs.size());
    for (const auto& z : zs) views.emplace_back(z);
    State out(static_cast<std::size_t>(rhs.dim));
    rhs.eval(t, std::span<const double>(y),
             std::span<const std::span<const double>>(views),
             std::span<double>(out));
    return out;
}

void DdeProblem::validate() const {
    if (rhs.dim < 1) throw std::invalid_argument("rhs dimension must be >= 1");
    if (!rhs.eval) throw std::invalid_argument("rhs.eval is empty");
    if (!(tau > 0.0)) throw std::invalid_argument("tau must be positive");
    if (horizon < 0) throw std::invalid_argument("horizon must be >= 0");
    if (lags.empty()) throw std::invalid_argument("at least one lag required");
    for (double l : lags)
        if (!(l > 0.0)) throw std::invalid_argument("lags must be positive");
    if (static_cast<int>(lags.size()) != rhs.num_lags)
        throw std::invalid_argument("lag count does not match rhs.num_lags");
    if (eta.size() != static_cast<std::size_t>(rhs.dim))
        throw std::invalid_argument("eta dimension does not match rhs");
}

Mesh::Mesh(int intervals, double tau, int horizon)
    : N_(intervals), n_(horizon), tau_(tau), h_(tau / intervals) {
    if (intervals < 1) throw std::invalid_argument("mesh needs N >= 1");
    if (!(tau > 0.0)) throw std::invalid_argument("mesh needs tau > 0");
    if (horizon < 0) throw std::invalid_argument("mesh needs n >= 0");
}

std::size_t Mesh::node_count() const {
    return static_cast<std::size_t>(n_ + 1) * static_cast<std::size_t>(N_) + 1;
}

std::size_t Mesh::total_steps() const {
    return static_cast<std::size_t>(n_ + 1) * static_cast<std::size_t>(N_);
}

double Mesh::node_time(int j, long k) const {
    if (k == N_) {  // canonical form of a segment boundary
        ++j;
        k = 0;
    }
    if (j < 0 || j > n_ + 1 || k < 0 || k >= N_ || (j == n_ + 1 && k != 0))
        throw std::out_of_range("mesh node index out of range");
    return static_cast<double>(j) * tau_ + static_cast<double>(k) * h_;
}

double Mesh::time_at(std::size_t flat) const {
    if (flat > total_steps()) throw std::out_of_range("flat index out of range");
    const auto N = static_cast<std::size_t>(N_);
    return node_time(static_cast<int>(flat / N), static_cast<long>(flat % N));
}

std::size_t flatten_index(int j, long k, const Mesh& mesh) {
    if (j < 0 || j > mesh.horizon() || k < 0 || k > mesh.intervals())
        throw std::out_of_range("flatten_index: (j,k) out of range");
    return static_cast<std::size_t>(j) * static_cast<std::size_t>(mesh.intervals()) +
           static_cast<std::size_t>(k);
}

std::pair<int, long> unflatten_index(std::size_t flat, const Mesh& mesh) {
    if (flat > mesh.total_steps())
        throw std::out_of_range("unflatten_index: flat out of range");
    const auto N = static_cast<std::size_t>(mesh.intervals());
    if (flat == mesh.total_steps())  // closing node, reported as (n, N)
        return {mesh.horizon(), mesh.intervals()};
    return {static_cast<int>(flat / N), static_cast<long>(flat % N)};
}

std::span<const double> Trajectory::state(std::size_t flat) const {
    const auto d = static_cast<std::size_t>(dim);
    if ((flat + 1) * d > data.size())
        throw std::out_of_range("trajectory state index out of range");
    return {data.data() + flat * d, d};
}

std::span<double> Trajectory::state(std::size_t flat) {
    const auto d = static_cast<std::size_t>(dim);
    if ((flat + 1) * d > data.size())
        throw std::out_of_range("trajectory state index out of range");
    return {data.data() + flat * d, d};
}

double Trajectory::max_node_norm() const {
    double best = 0.0;
    for (std::size_t m = 0; m < nodes(); ++m) best = std::max(best, norm2(state(m)));
    return best;
}

State history_lookup(const Trajectory& traj, long flat, const State& eta,
                     long history_steps) {
    if (flat < -history_steps)
        throw std::domain_error("history lookup precedes the declared history window");
    if (flat <= 0) return eta;
    auto s = traj.state(static_cast<std::size_t>(flat));
    return State(s.begin(), s.end());
}

void AssumptionProfile::validate() const {
    if (!(K > 0.0)) throw std::invalid_argument("profile needs K > 0");
    if (!(L >= 0.0)) throw std::invalid_argument("profile needs L >= 0");
    auto check_exp = [](double e) {
        if (!(e > 0.0) || e > 1.0)
            throw std::invalid_argument("exponents must lie in (0, 1]");
    };
    check_exp(alpha);
    if (betas.empty() || gammas.empty())
        throw std::invalid_argument("beta/gamma lists must be nonempty");
    for (double b : betas) check_exp(b);
    for (double g : gammas) check_exp(g);
}

}  // namespace ddesteps
