#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ddesteps/core.hpp"

namespace ddesteps {

/// Phase-change model of metallic materials, scalar with one lag:
///   power-z : f = A - B*sgn(y)|y| - C*sgn(y)|y|^rho*|z|^g + D*y*|z|^g
///   linear-z: f = A - B*sgn(y)|y| - C*sgn(y)|y|^rho*|z|   + D*y*z
/// with sgn(0) = 1, so the power helper -sgn(y)|y|^rho is continuous at 0.
enum class MetalVariant { PowerDelay, LinearDelay };

struct MetalModelParams {
    double A = 0.0, B = 0.0, C = 0.0, D = 0.0;
    double rho = 1.0, gamma = 1.0;
    MetalVariant variant = MetalVariant::PowerDelay;

    void validate() const;
};

/// Parameter set behind a metal* preset name, so callers can tweak single
/// constants without restating the published table.  ConfigError otherwise.
MetalModelParams metal_preset_params(const std::string& name);

RhsFunction metal_rhs(const MetalModelParams& p);

/// Closed-form certificate for the metal models: the growth/one-sided
/// Lipschitz/Hoelder constants
///   K = A + B + C + |D|,  H = |D|,  L = max{B+|D|, 2C, C+|D|},
/// time exponent 1 (f is t-independent), state exponents {1, rho},
/// delayed-state exponent gamma (power-z) or 1 (linear-z).
AssumptionProfile metal_certified_profile(const MetalModelParams& p);

/// Blood-cell production (Mackey-Glass), scalar with one lag:
///   f = b*z/(1 + z^m) - a*y
struct MackeyGlassParams {
    double a = 0.1, b = 0.2, m = 10.0;

    void validate() const;
};

RhsFunction mackey_glass_rhs(const MackeyGlassParams& p);

/// Delayed SIR-type epidemic system, 8 compartments
/// (S, I_s, I_a, F_b, F_g, F_c, R, M) with four lags tau1..tau4 and a
/// piecewise-constant control u(t).
struct SirParams {
    double beta = 0.4517, eps = 0.794;
    double gamma_b = 0.8, gamma_g = 0.15, gamma_c = 0.05;
    double alpha = 0.06;
    double eta_a = 1.0 / 21.0, eta_s = 0.8 / 21.0;
    double mu_s = 0.01 / 21.0, mu_b = 0.0, mu_g = 0.0, mu_c = 0.4 / 13.5;
    double r_b = 1.0 / 13.5, r_g = 1.0 / 13.5, r_c = 0.6 / 13.5;
    double tau1 = 5.5, tau2 = 7.5, tau3 = 21.0, tau4 = 13.5;
    double n_pop = 35280000.0;

    void validate() const;
    // Soft checks (currently: gamma_b + gamma_g + gamma_c should sum to 1).
    // These describe expected-but-not-required structure, hence not validate().
    std::vector<std::string> warnings() const;
};

/// The control u(t): 0.2 on [0,8], 0.3 on (8,18], 0.4 on (18,35],
/// 0.8 beyond 35 (the last regime continues past t=240, which the solve
/// horizon reaches at t=240.5).
double sir_control(double t);

RhsFunction sir_rhs(const SirParams& p);

/// Simple synthetic right-hand sides for harness tests and custom configs.
RhsFunction zero_rhs(int dim);          ///< f = 0
RhsFunction pure_delay_rhs(int dim);    ///< f = z (single lag)
RhsFunction linear_decay_rhs(int dim);  ///< f = -y (single lag, unused z)

/// A catalog entry: a ready-to-solve problem plus, where the model's
/// closed-form certificate exists, its assumption profile.
struct ModelPreset {
    std::string name;
    DdeProblem problem;
    std::optional<AssumptionProfile> profile;
};

/// Names served by make_preset: metal1, metal2, metal1_fig3a..metal1_fig3d,
/// mackey_glass, sir8.
std::vector<std::string> preset_names();

/// Builds the named preset with its published parameter set.  Throws
/// ConfigError for unknown names.
ModelPreset make_preset(const std::string& name);

}  // namespace ddesteps
