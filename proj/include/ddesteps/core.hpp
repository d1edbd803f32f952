#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace ddesteps {

using State = std::vector<double>;

/// Configuration-level failure (bad problem setup, non-aligned lags,
/// mismatched meshes).  The CLI maps this to exit code 2.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Raised when a regression has fewer than two usable rows.  Exit code 4.
struct DegenerateFitError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Euclidean norm of a vector.
double norm2(std::span<const double> v);

/// Right-hand side f(t, y, z_1..z_L) of a delay differential equation
/// z'(t) = f(t, z(t), z(t-l_1), ..., z(t-l_L)).
///
/// eval writes the derivative into `out` (size dim).  It must be
/// deterministic: identical inputs give bit-identical outputs.
struct RhsFunction {
    int dim = 1;
    int num_lags = 1;
    std::function<void(double t, std::span<const double> y,
                       std::span<const std::span<const double>> zs,
                       std::span<double> out)>
        eval;
};

/// Convenience wrapper used by tests: evaluate an RhsFunction on vectors.
State eval_rhs(const RhsFunction& rhs, double t, const State& y,
               const std::vector<State>& zs);

/// A DDE initial-value problem with constant history:
///   z'(t) = f(t, z(t), z(t-l_1), ..., z(t-l_L)),  t in [0, (n+1)*tau],
///   z(t)  = eta                                   for t <= 0.
struct DdeProblem {
    RhsFunction rhs;
    std::vector<double> lags;  ///< positive; single-lag canonical case: {tau}
    double tau = 1.0;          ///< base lag; the mesh step is tau/N
    State eta;                 ///< constant history, size rhs.dim
    int horizon = 0;           ///< n >= 0; solve covers segments j = 0..n
    std::string tag;           ///< problem identity used in reports

    /// Throws std::invalid_argument when a field is out of domain.
    void validate() const;
};

/// Uniform mesh over [0, (n+1)*tau]: node(j,k) = j*tau + k*h with h = tau/N.
/// Node times are recomputed from (j,k) every time (never accumulated), so
/// node(j,N) and node(j+1,0) are the same bit pattern.
class Mesh {
  public:
    Mesh(int intervals, double tau, int horizon);

    [[nodiscard]] int intervals() const { return N_; }     ///< N
    [[nodiscard]] double lag() const { return tau_; }      ///< tau
    [[nodiscard]] int horizon() const { return n_; }       ///< n
    [[nodiscard]] double step() const { return h_; }       ///< h = tau/N

    /// Number of stored nodes, (n+1)*N + 1.
    [[nodiscard]] std::size_t node_count() const;
    /// Number of Euler steps, (n+1)*N.
    [[nodiscard]] std::size_t total_steps() const;

    /// Time of node (j,k); k == N canonicalizes to (j+1, 0) before the
    /// arithmetic, so segment boundaries are computed one way only.
    /// Valid for 0 <= j <= n and 0 <= k <= N, plus the closing (n+1, 0).
    [[nodiscard]] double node_time(int j, long k) const;

    /// Time of a flattened node index in [0, (n+1)*N].
    [[nodiscard]] double time_at(std::size_t flat) const;

  private:
    int N_;
    int n_;
    double tau_;
    double h_;
};

/// flat = j*N + k for 0 <= j <= n, 0 <= k <= N.  Shared segment boundaries
/// map to one slot: flatten_index(j, N) == flatten_index(j+1, 0).
std::size_t flatten_index(int j, long k, const Mesh& mesh);

/// Inverse of flatten_index with canonical k < N (the final node comes back
/// as (n, N) so the pair stays inside flatten_index's domain).
std::pair<int, long> unflatten_index(std::size_t flat, const Mesh& mesh);

/// Discrete solution {y_k^j} stored contiguously: state(flat) is the
/// dim-sized vector at flattened node index flat.  Segment boundaries are
/// stored once, which makes y_0^{j+1} = y_N^j exact by construction.
struct Trajectory {
    Mesh mesh;
    int dim = 1;
    std::vector<double> data;  ///< nodes * dim values; shorter if diverged
    std::string problem_tag;
    bool reference = false;  ///< dense-mesh reference marker
    bool diverged = false;
    std::size_t diverged_at = 0;  ///< flat index of first non-finite state

    [[nodiscard]] std::size_t nodes() const {
        return dim > 0 ? data.size() / static_cast<std::size_t>(dim) : 0;
    }
    [[nodiscard]] std::span<const double> state(std::size_t flat) const;
    [[nodiscard]] std::span<double> state(std::size_t flat);

    /// max over stored nodes of the Euclidean state norm.
    [[nodiscard]] double max_node_norm() const;
};

/// State at flattened index `flat`, serving the constant history eta for
/// flat <= 0.  `history_steps` is the deepest admissible lookback
/// (max lag / h); anything below -history_steps is a domain error.
State history_lookup(const Trajectory& traj, long flat, const State& eta,
                     long history_steps);

/// Constants and exponents of the regularity assumptions:
///   (F2) ||f(t,y,z)|| <= K(1+||y||)(1+||z||)
///   (F3) <y1-y2, f(t,y1,z)-f(t,y2,z)> <= H(1+||z||)||y1-y2||^2
///   (F4) ||f(t1,y1,z1)-f(t2,y2,z2)|| <= L(...)  with exponents
///        alpha (time), betas (state), gammas (delayed state).
/// The canonical (F4) case has two betas and one gamma; longer lists are
/// the generalized (F4*) form.
struct AssumptionProfile {
    double K = 1.0;
    double H = 0.0;
    double L = 0.0;
    double alpha = 1.0;
    std::vector<double> betas{1.0, 1.0};
    std::vector<double> gammas{1.0};

    void validate() const;  ///< throws std::invalid_argument
    [[nodiscard]] bool canonical() const {
        return betas.size() == 2 && gammas.size() == 1;
    }
};

}  // namespace ddesteps
