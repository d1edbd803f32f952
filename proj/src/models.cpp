#include "ddesteps/models.hpp"

#include <algorithm>
#include <cmath>

namespace ddesteps {

namespace {

// sgn(0) = 1, per the model definition.
inline double sgn(double x) { return x >= 0.0 ? 1.0 : -1.0; }

}  // namespace

void MetalModelParams::validate() const {
    if (!(A >= 0.0) || !(B >= 0.0) || !(C >= 0.0))
        throw std::invalid_argument("metal model needs A, B, C >= 0");
    if (!(rho > 0.0) || rho > 1.0 || !(gamma > 0.0) || gamma > 1.0)
        throw std::invalid_argument("metal exponents must lie in (0, 1]");
}

RhsFunction metal_rhs(const MetalModelParams& p) {
    p.validate();
    RhsFunction f;
    f.dim = 1;
    f.num_lags = 1;
    if (p.variant == MetalVariant::PowerDelay) {
        f.eval = [p](double, std::span<const double> y,
                     std::span<const std::span<const double>> zs,
                     std::span<double> out) {
            const double yv = y[0];
            const double zv = zs[0][0];
            const double w = std::pow(std::fabs(zv), p.gamma);
            out[0] = p.A - p.B * sgn(yv) * std::fabs(yv) -
                     p.C * sgn(yv) * std::pow(std::fabs(yv), p.rho) * w +
                     p.D * yv * w;
        };
    } else {
        f.eval = [p](double, std::span<const double> y,
                     std::span<const std::span<const double>> zs,
                     std::span<double> out) {
            const double yv = y[0];
            const double zv = zs[0][0];
            out[0] = p.A - p.B * sgn(yv) * std::fabs(yv) -
                     p.C * sgn(yv) * std::pow(std::fabs(yv), p.rho) * std::fabs(zv) +
                     p.D * yv * zv;
        };
    }
    return f;
}

AssumptionProfile metal_certified_profile(const MetalModelParams& p) {
    p.validate();
    AssumptionProfile prof;
    prof.K = p.A + p.B + p.C + std::fabs(p.D);
    prof.H = std::fabs(p.D);
    prof.L = std::max({p.B + std::fabs(p.D), 2.0 * p.C, p.C + std::fabs(p.D)});
    prof.alpha = 1.0;
    prof.betas = {1.0, p.rho};
    prof.gammas = {p.variant == MetalVariant::PowerDelay ? p.gamma : 1.0};
    return prof;
}

void MackeyGlassParams::validate() const {
    if (!(a > 0.0) || !(b > 0.0) || !(m > 0.0))
        throw std::invalid_argument("Mackey-Glass needs a, b, m > 0");
}

RhsFunction mackey_glass_rhs(const MackeyGlassParams& p) {
    p.validate();
    RhsFunction f;
    f.dim = 1;
    f.num_lags = 1;
    f.eval = [p](double, std::span<const double> y,
                 std::span<const std::span<const double>> zs,
                 std::span<double> out) {
        const double zv = zs[0][0];
        out[0] = p.b * zv / (1.0 + std::pow(zv, p.m)) - p.a * y[0];
    };
    return f;
}

void SirParams::validate() const {
    const double rates[] = {beta, eps,  gamma_b, gamma_g, gamma_c, alpha, eta_a, eta_s,
                            mu_s, mu_b, mu_g,    mu_c,    r_b,     r_g,   r_c};
    for (double r : rates)
        if (!(r >= 0.0)) throw std::invalid_argument("SIR rates must be >= 0");
    for (double t : {tau1, tau2, tau3, tau4})
        if (!(t > 0.0)) throw std::invalid_argument("SIR lags must be positive");
    if (!(n_pop > 0.0)) throw std::invalid_argument("SIR needs a positive population");
}

std::vector<std::string> SirParams::warnings() const {
    std::vector<std::string> out;
    const double gsum = gamma_b + gamma_g + gamma_c;
    if (std::fabs(gsum - 1.0) > 1e-12)
        out.push_back("hospitalization fractions gamma_b+gamma_g+gamma_c = " +
                      std::to_string(gsum) + ", expected 1");
    return out;
}

double sir_control(double t) {
    if (t <= 8.0) return 0.2;  // includes u(0), closing the paper's (0,8] on the left
    if (t <= 18.0) return 0.3;
    if (t <= 35.0) return 0.4;
    return 0.8;
}

RhsFunction sir_rhs(const SirParams& p) {
    p.validate();
    RhsFunction f;
    f.dim = 8;
    f.num_lags = 4;
    // Compartment order: S, I_s, I_a, F_b, F_g, F_c, R, M.
    // zs[0..3] are the states at t - tau1..tau4.
    f.eval = [p](double t, std::span<const double> y,
                 std::span<const std::span<const double>> zs,
                 std::span<double> out) {
        const double u = sir_control(t);
        const double S = y[0], Is = y[1], Ia = y[2];
        const double Fb = y[3], Fg = y[4], Fc = y[5];
        const auto z1 = zs[0], z2 = zs[1], z3 = zs[2], z4 = zs[3];
        const double infect1 = p.beta * (1.0 - u) * z1[0] * z1[1] / p.n_pop;
        out[0] = -p.beta * (1.0 - u) * S * Is / p.n_pop;
        out[1] = p.eps * infect1 - p.alpha * Is - (1.0 - p.alpha) * (p.mu_s + p.eta_s) * Is;
        out[2] = (1.0 - p.eps) * infect1 - p.eta_a * Ia;
        out[3] = p.alpha * p.gamma_b * z2[1] - (p.mu_b + p.r_b) * Fb;
        out[4] = p.alpha * p.gamma_g * z2[1] - (p.mu_g + p.r_g) * Fg;
        out[5] = p.alpha * p.gamma_c * z2[1] - (p.mu_c + p.r_c) * Fc;
        out[6] = p.eta_s * (1.0 - p.alpha) * z3[1] + p.eta_a * z3[2] + p.r_b * z4[3] +
                 p.r_g * z4[4] + p.r_c * z4[5];
        out[7] = p.mu_s * (1.0 - p.alpha) * z3[1] + p.mu_b * z4[3] + p.mu_g * z4[4] +
                 p.mu_c * z4[5];
    };
    return f;
}

RhsFunction zero_rhs(int dim) {
    RhsFunction f;
    f.dim = dim;
    f.num_lags = 1;
    f.eval = [](double, std::span<const double>, std::span<const std::span<const double>>,
                std::span<double> out) {
        std::fill(out.begin(), out.end(), 0.0);
    };
    return f;
}

RhsFunction pure_delay_rhs(int dim) {
    RhsFunction f;
    f.dim = dim;
    f.num_lags = 1;
    f.eval = [](double, std::span<const double>, std::span<const std::span<const double>> zs,
                std::span<double> out) {
        std::copy(zs[0].begin(), zs[0].end(), out.begin());
    };
    return f;
}

RhsFunction linear_decay_rhs(int dim) {
    RhsFunction f;
    f.dim = dim;
    f.num_lags = 1;
    f.eval = [](double, std::span<const double> y, std::span<const std::span<const double>>,
                std::span<double> out) {
        for (std::size_t i = 0; i < y.size(); ++i) out[i] = -y[i];
    };
    return f;
}

namespace {

struct MetalPresetRow {
    const char* name;
    MetalModelParams params;
    double tau, eta0;
};

const MetalPresetRow kMetalPresets[] = {
    {"metal1",
     {1.7137, 0.7769, 0.5895, -0.82615, 0.973, 0.714, MetalVariant::PowerDelay},
     9.2603, 0.05854},
    {"metal2",
     {1.7137, 0.7769, 0.5895, -0.82615, 0.973, 0.714, MetalVariant::LinearDelay},
     9.2603, 0.05854},
    {"metal1_fig3a",
     {3.27, 5.62, 9.89, -7.31, 0.88, 0.89, MetalVariant::PowerDelay}, 1.03, 1.0},
    {"metal1_fig3b",
     {5.0, 6.62, 0.52, 4.0, 0.32, 0.33, MetalVariant::PowerDelay}, 8.55, 0.22},
    {"metal1_fig3c",
     {5.16, 0.42, 3.61, -6.74, 0.99, 0.11, MetalVariant::PowerDelay}, 5.69, 0.17},
    {"metal1_fig3d",
     {6.75, 2.79, 4.7, -0.01, 0.86, 0.02, MetalVariant::PowerDelay}, 1.58, 0.31},
};

const MetalPresetRow* find_metal_preset(const std::string& name) {
    for (const MetalPresetRow& row : kMetalPresets)
        if (name == row.name) return &row;
    return nullptr;
}

ModelPreset metal_preset(const MetalPresetRow& row) {
    DdeProblem prob;
    prob.rhs = metal_rhs(row.params);
    prob.lags = {row.tau};
    prob.tau = row.tau;
    prob.eta = {row.eta0};
    prob.horizon = 5;
    prob.tag = row.name;
    return {row.name, std::move(prob), metal_certified_profile(row.params)};
}

}  // namespace

MetalModelParams metal_preset_params(const std::string& name) {
    const MetalPresetRow* row = find_metal_preset(name);
    if (!row) throw ConfigError("no metal preset named '" + name + "'");
    return row->params;
}

std::vector<std::string> preset_names() {
    return {"metal1",       "metal2",       "metal1_fig3a", "metal1_fig3b",
            "metal1_fig3c", "metal1_fig3d", "mackey_glass", "sir8"};
}

ModelPreset make_preset(const std::string& name) {
    if (const MetalPresetRow* row = find_metal_preset(name)) return metal_preset(*row);
    if (name == "mackey_glass") {
        DdeProblem prob;
        prob.rhs = mackey_glass_rhs({});
        prob.lags = {20.0};
        prob.tau = 20.0;
        prob.eta = {0.1};  // the source text gives no history value; 0.1 is ours
        prob.horizon = 500;
        prob.tag = name;
        return {name, std::move(prob), std::nullopt};
    }
    if (name == "sir8") {
        SirParams p;
        DdeProblem prob;
        prob.rhs = sir_rhs(p);
        prob.lags = {p.tau1, p.tau2, p.tau3, p.tau4};
        prob.tau = 0.5;  // common grid lag; tau1..tau4 resolve to step multiples
        prob.eta = {p.n_pop, 20.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0};
        prob.horizon = 480;
        prob.tag = name;
        return {name, std::move(prob), std::nullopt};
    }
    throw ConfigError("unknown model preset: " + name);
}

}  // namespace ddesteps
