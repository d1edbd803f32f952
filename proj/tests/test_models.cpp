#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "ddesteps/core.hpp"
#include "ddesteps/models.hpp"
#include "doctest.h"

using namespace ddesteps;

namespace {

double metal_eval(const MetalModelParams& p, double t, double y, double z) {
    return eval_rhs(metal_rhs(p), t, {y}, {{z}})[0];
}

MetalModelParams main_metal() { return metal_preset_params("metal1"); }

}  // namespace

TEST_CASE("phase-change model: closed-form spot values") {
    const MetalModelParams p = main_metal();
    // At y = 0 both state terms vanish (|0| and |0|^rho), leaving A alone.
    for (double z : {-2.0, 0.0, 0.5, 10.0}) CHECK(metal_eval(p, 0.0, 0.0, z) == p.A);
    // z = 0 kills the delayed factor |z|^gamma in both nonlinear terms.
    CHECK(metal_eval(p, 3.0, 2.0, 0.0) == p.A - p.B * 2.0);
    CHECK(metal_eval(p, 3.0, -2.0, 0.0) == p.A + p.B * 2.0);
    // Main published set at y = z = 1: A - B - C + D.
    CHECK(metal_eval(p, 0.0, 1.0, 1.0) == doctest::Approx(-0.47885).epsilon(1e-14));
    // The model is autonomous: t never enters.
    CHECK(metal_eval(p, 0.0, 0.37, -1.2) == metal_eval(p, 1e6, 0.37, -1.2));
}

TEST_CASE("phase-change model: signed power helper is continuous at zero") {
    const MetalModelParams p = main_metal();
    // sgn(0) = 1 by convention, but |0|^rho = 0 keeps the value finite and
    // the two one-sided limits meet.
    const double at_zero = metal_eval(p, 0.0, 0.0, 1.0);
    CHECK(metal_eval(p, 0.0, +0.0, 1.0) == at_zero);
    CHECK(metal_eval(p, 0.0, -0.0, 1.0) == at_zero);
    CHECK(std::fabs(metal_eval(p, 0.0, 1e-12, 1.0) - at_zero) < 1e-9);
    CHECK(std::fabs(metal_eval(p, 0.0, -1e-12, 1.0) - at_zero) < 1e-9);
}

TEST_CASE("phase-change model: the two delayed-coupling variants differ off z >= 0") {
    MetalModelParams pw = main_metal();
    MetalModelParams ln = pw;
    ln.variant = MetalVariant::LinearDelay;
    // At z = 1 the power and linear couplings coincide (1^gamma = 1).
    CHECK(metal_eval(pw, 0.0, 1.0, 1.0) == metal_eval(ln, 0.0, 1.0, 1.0));
    // At z = -1 the power coupling sees |z| = 1, the linear one sees z = -1.
    const double a = metal_eval(pw, 0.0, 1.0, -1.0);
    const double b = metal_eval(ln, 0.0, 1.0, -1.0);
    CHECK(a != b);
    CHECK(a == doctest::Approx(-0.47885).epsilon(1e-14));
    CHECK(b == doctest::Approx(pw.A - pw.B - pw.C + pw.D * 1.0 * (-1.0)).epsilon(1e-14));
}

TEST_CASE("phase-change model: certificate constants from the parameter table") {
    const MetalModelParams p = main_metal();
    const AssumptionProfile prof = metal_certified_profile(p);
    // A + B + C + |D|: bitwise the sum of the published constants, which sits
    // one ulp above the decimal reading 3.90625.
    CHECK(prof.K == p.A + p.B + p.C + std::fabs(p.D));
    CHECK(prof.K == doctest::Approx(3.90625).epsilon(1e-15));
    CHECK(prof.H == 0.82615);  // |D|
    CHECK(prof.L == 1.60305);  // max{B + |D|, 2C, C + |D|} = B + |D|
    CHECK(prof.alpha == 1.0);
    REQUIRE(prof.betas.size() == 2);
    CHECK(prof.betas[0] == 1.0);
    CHECK(prof.betas[1] == p.rho);
    REQUIRE(prof.gammas.size() == 1);
    CHECK(prof.gammas[0] == p.gamma);
    // The linear-z variant is Lipschitz in the delayed slot.
    MetalModelParams ln = p;
    ln.variant = MetalVariant::LinearDelay;
    CHECK(metal_certified_profile(ln).gammas == std::vector<double>{1.0});
}

TEST_CASE("phase-change model: growth envelope holds on random samples") {
    const MetalModelParams p = main_metal();
    const AssumptionProfile prof = metal_certified_profile(p);
    std::mt19937 rng(97);
    std::uniform_real_distribution<double> span(-30.0, 30.0);
    for (int i = 0; i < 10000; ++i) {
        const double y = span(rng), z = span(rng);
        const double lhs = std::fabs(metal_eval(p, 0.0, y, z));
        const double rhs = prof.K * (1.0 + std::fabs(y)) * (1.0 + std::fabs(z));
        CHECK(lhs <= rhs * (1.0 + 1e-12));
    }
}

TEST_CASE("signed power inequalities behind the certificate") {
    std::mt19937 rng(4242);
    std::uniform_real_distribution<double> wide(-50.0, 50.0);
    std::uniform_real_distribution<double> tiny(-1e-3, 1e-3);
    const std::vector<double> rhos{0.1, 0.25, 0.5, 0.714, 0.9, 1.0};
    int checked = 0;
    for (int i = 0; i < 10000; ++i) {
        const double x = (i % 5 == 0) ? tiny(rng) : wide(rng);
        const double y = (i % 7 == 0) ? tiny(rng) : wide(rng);
        const double rho = rhos[static_cast<std::size_t>(i) % rhos.size()];
        // |x|^rho <= 1 + |x|
        CHECK(std::pow(std::fabs(x), rho) <= (1.0 + std::fabs(x)) * (1.0 + 1e-12));
        // | |x|^rho - |y|^rho | <= |x - y|^rho
        const double lhs = std::fabs(std::pow(std::fabs(x), rho) - std::pow(std::fabs(y), rho));
        const double rhs = std::pow(std::fabs(x - y), rho);
        CHECK(lhs <= rhs * (1.0 + 1e-12));
        ++checked;
    }
    CHECK(checked == 10000);
    // And the signed helper h(y) = -sgn(y)|y|^rho moves at most 2|dy|^rho.
    auto h = [](double y, double rho) {
        const double s = y >= 0.0 ? 1.0 : -1.0;
        return -s * std::pow(std::fabs(y), rho);
    };
    for (int i = 0; i < 10000; ++i) {
        const double a = wide(rng), b = wide(rng);
        const double rho = rhos[static_cast<std::size_t>(i) % rhos.size()];
        CHECK(std::fabs(h(a, rho) - h(b, rho)) <=
              2.0 * std::pow(std::fabs(a - b), rho) * (1.0 + 1e-12));
    }
}

TEST_CASE("phase-change parameter validation") {
    MetalModelParams p = main_metal();
    CHECK_NOTHROW(p.validate());
    p.rho = 0.0;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p = main_metal();
    p.gamma = 1.5;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p = main_metal();
    p.B = -0.1;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    // D may take either sign.
    p = main_metal();
    p.D = 2.0;
    CHECK_NOTHROW(p.validate());
}

TEST_CASE("blood-cell production model: closed-form spot values") {
    const MackeyGlassParams p;  // a=0.1, b=0.2, m=10
    const RhsFunction f = mackey_glass_rhs(p);
    // No delayed cells: pure decay.
    CHECK(eval_rhs(f, 0.0, {0.7}, {{0.0}})[0] == -0.1 * 0.7);
    // Production term at z = 1 is b/2.
    CHECK(eval_rhs(f, 0.0, {0.0}, {{1.0}})[0] == 0.1);
    // Large delayed populations shut production down (z/(1+z^10) -> 0).
    CHECK(std::fabs(eval_rhs(f, 0.0, {0.0}, {{1e6}})[0]) < 1e-50);
    MackeyGlassParams bad;
    bad.m = 0.0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("epidemic model: disease-free state is an exact equilibrium") {
    const SirParams p;
    const RhsFunction f = sir_rhs(p);
    State rest(8, 0.0);
    rest[0] = p.n_pop;  // everyone susceptible
    const std::vector<State> zs{rest, rest, rest, rest};
    const State out = eval_rhs(f, 100.0, rest, zs);
    for (double v : out) CHECK(v == 0.0);
}

TEST_CASE("epidemic model: single-path source terms") {
    const SirParams p;
    const RhsFunction f = sir_rhs(p);
    // Only the recovery inflow from symptomatic cases delayed by tau3 is on:
    // R' = eta_s * (1 - alpha) * Is(t - tau3).
    State zero(8, 0.0);
    std::vector<State> zs{zero, zero, zero, zero};
    zs[2][1] = 1.0;  // Is in the tau3 slot
    const State out = eval_rhs(f, 100.0, zero, zs);
    CHECK(out[6] == (0.8 / 21.0) * (1.0 - 0.06));
    CHECK(out[6] == doctest::Approx(0.035809523809523810).epsilon(1e-14));
    // The matching mortality share books into the deaths compartment...
    CHECK(out[7] == (0.01 / 21.0) * (1.0 - 0.06));
    // ...and with the current state at zero, nothing else moves.
    for (int c : {0, 1, 2, 3, 4, 5}) CHECK(out[static_cast<std::size_t>(c)] == 0.0);
}

TEST_CASE("epidemic model: staged control schedule") {
    CHECK(sir_control(0.0) == 0.2);
    CHECK(sir_control(8.0) == 0.2);
    CHECK(sir_control(8.0000001) == 0.3);
    CHECK(sir_control(10.0) == 0.3);
    CHECK(sir_control(18.0) == 0.3);
    CHECK(sir_control(35.0) == 0.4);
    CHECK(sir_control(35.5) == 0.8);
    CHECK(sir_control(240.5) == 0.8);
}

TEST_CASE("epidemic model: branching fractions should sum to one") {
    const SirParams p;
    CHECK(p.warnings().empty());
    SirParams skew = p;
    skew.gamma_b = 0.7;
    const std::vector<std::string> w = skew.warnings();
    REQUIRE(w.size() == 1);
    CHECK(w[0].find("gamma") != std::string::npos);
}

TEST_CASE("epidemic model: validation guards rates and scales") {
    SirParams p;
    CHECK_NOTHROW(p.validate());
    p.beta = -0.1;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p = SirParams{};
    p.tau3 = 0.0;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p = SirParams{};
    p.n_pop = 0.0;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
}

TEST_CASE("synthetic right-hand sides") {
    CHECK(eval_rhs(zero_rhs(2), 1.0, {5.0, 6.0}, {{1.0, 2.0}}) == State{0.0, 0.0});
    CHECK(eval_rhs(pure_delay_rhs(2), 1.0, {5.0, 6.0}, {{1.0, 2.0}}) == State{1.0, 2.0});
    CHECK(eval_rhs(linear_decay_rhs(2), 1.0, {5.0, 6.0}, {{1.0, 2.0}}) ==
          State{-5.0, -6.0});
}

TEST_CASE("preset catalog: names, shapes, and published parameters") {
    const std::vector<std::string> names = preset_names();
    CHECK(std::count(names.begin(), names.end(), "metal1") == 1);
    CHECK(std::count(names.begin(), names.end(), "sir8") == 1);
    for (const std::string& name : names) {
        const ModelPreset preset = make_preset(name);
        CHECK(preset.name == name);
        CHECK_NOTHROW(preset.problem.validate());
    }
    CHECK_THROWS_AS((void)make_preset("nope"), ConfigError);
    CHECK_THROWS_AS((void)metal_preset_params("mackey_glass"), ConfigError);

    const ModelPreset m1 = make_preset("metal1");
    CHECK(m1.problem.tau == 9.2603);
    CHECK(m1.problem.lags == std::vector<double>{9.2603});
    CHECK(m1.problem.eta == State{0.05854});
    CHECK(m1.problem.horizon == 5);
    REQUIRE(m1.profile.has_value());
    CHECK(m1.profile->K == doctest::Approx(3.90625).epsilon(1e-15));

    CHECK(metal_preset_params("metal2").variant == MetalVariant::LinearDelay);
    CHECK(metal_preset_params("metal1").variant == MetalVariant::PowerDelay);

    const ModelPreset mg = make_preset("mackey_glass");
    CHECK(mg.problem.tau == 20.0);
    CHECK(mg.problem.horizon == 500);
    CHECK(mg.problem.eta == State{0.1});
    CHECK_FALSE(mg.profile.has_value());

    const ModelPreset sir = make_preset("sir8");
    CHECK(sir.problem.rhs.dim == 8);
    CHECK(sir.problem.lags == std::vector<double>{5.5, 7.5, 21.0, 13.5});
    CHECK(sir.problem.tau == 0.5);
    CHECK(sir.problem.horizon == 480);
    CHECK(sir.problem.eta[0] == 35280000.0);
}

TEST_CASE("model evaluation is deterministic") {
    const RhsFunction f = metal_rhs(main_metal());
    const State a = eval_rhs(f, 0.5, {0.3}, {{-1.7}});
    const State b = eval_rhs(f, 0.5, {0.3}, {{-1.7}});
    CHECK(a == b);
    const RhsFunction s = sir_rhs(SirParams{});
    State y(8, 1000.0);
    const std::vector<State> zs{y, y, y, y};
    CHECK(eval_rhs(s, 7.0, y, zs) == eval_rhs(s, 7.0, y, zs));
}
