#include <cmath>
#include <vector>

#include "ddesteps/core.hpp"
#include "ddesteps/models.hpp"
#include "ddesteps/probe.hpp"
#include "doctest.h"

using namespace ddesteps;

namespace {

ProbeBox scalar_box(double t0, double t1, double y0, double y1, double z0, double z1) {
    ProbeBox box;
    box.t_lo = t0;
    box.t_hi = t1;
    box.y_lo = {y0};
    box.y_hi = {y1};
    box.z_lo = {z0};
    box.z_hi = {z1};
    return box;
}

bool reports_equal(const ProbeReport& a, const ProbeReport& b) {
    auto same = [](double x, double y) {
        return (std::isnan(x) && std::isnan(y)) || x == y;
    };
    if (a.samples != b.samples || a.total_violations != b.total_violations) return false;
    if (!same(a.K_est, b.K_est) || !same(a.H_est, b.H_est) || !same(a.L_est, b.L_est))
        return false;
    if (!same(a.alpha_fit, b.alpha_fit) || !same(a.beta_fit, b.beta_fit) ||
        !same(a.gamma_fit, b.gamma_fit))
        return false;
    if (a.violations.size() != b.violations.size()) return false;
    for (std::size_t i = 0; i < a.violations.size(); ++i) {
        if (a.violations[i].sample != b.violations[i].sample) return false;
        if (a.violations[i].condition != b.violations[i].condition) return false;
        if (a.violations[i].lhs != b.violations[i].lhs) return false;
        if (a.violations[i].rhs != b.violations[i].rhs) return false;
    }
    return true;
}

}  // namespace

TEST_CASE("linear decay measured through a frozen delayed slot") {
    // f = -y never moves with z; pinning z to a point makes the one-sided
    // ratio <dy, df> / ||dy||^2 exactly -1 on every pair.
    const RhsFunction f = linear_decay_rhs(1);
    AssumptionProfile declared;
    declared.K = 1.0;
    declared.H = -1.0;
    declared.L = 2.0;
    const ProbeBox box = scalar_box(0.0, 1.0, -2.0, 2.0, 0.0, 0.0);
    const ProbeReport r = probe_assumptions(f, declared, box, 4000, 11);
    CHECK(r.samples == 4000);
    CHECK(r.H_est == -1.0);
    CHECK(r.total_violations == 0);
    CHECK(r.held());
    // Finite differences of a linear map fit a unit power law bitwise.
    CHECK(r.beta_fit == 1.0);
    // f never moves with t or z, so those groups carry no fit signal.
    CHECK(std::isnan(r.alpha_fit));
    CHECK(std::isnan(r.gamma_fit));
    CHECK(r.K_est <= 1.0);
    CHECK(r.K_est > 0.5);  // |y|/(1+|y|) approaches 1 on the box edge
}

TEST_CASE("certified constants survive probing the phase-change model") {
    const ModelPreset preset = make_preset("metal1");
    REQUIRE(preset.profile.has_value());
    const RhsFunction f = metal_rhs(metal_preset_params("metal1"));
    const ProbeBox box = scalar_box(0.0, 60.0, -5.0, 5.0, -5.0, 5.0);
    const ProbeReport r = probe_assumptions(f, *preset.profile, box, 10000, 1);
    CHECK(r.total_violations == 0);
    CHECK(r.violations.empty());
    CHECK(r.held());
    // The one-sided envelope stays under the certified H = |D|.
    CHECK(r.H_est <= 0.82615 + 1e-12);
    CHECK(r.K_est <= 3.90625 + 1e-12);
}

TEST_CASE("an undersized growth constant is caught and witnessed") {
    const RhsFunction f = mackey_glass_rhs(MackeyGlassParams{});
    AssumptionProfile declared;
    declared.K = 0.04;  // too small: the decay term alone needs a = 0.1
    declared.H = 1.0;   // generous, so only the growth condition can fail
    declared.L = 10.0;
    const ProbeBox box = scalar_box(0.0, 100.0, -1e6, 1e6, 0.0, 3.0);
    const ProbeReport r = probe_assumptions(f, declared, box, 20000, 1);
    CHECK(r.total_violations > 0);
    CHECK_FALSE(r.held());
    REQUIRE_FALSE(r.violations.empty());
    CHECK(r.violations.size() <= kProbeViolationCap);
    CHECK(r.total_violations >= static_cast<std::int64_t>(r.violations.size()));
    for (const ProbeViolation& v : r.violations) {
        CHECK(v.condition == "growth");
        CHECK(v.lhs > v.rhs);
        CHECK(v.y.size() == 1);
        CHECK(v.z.size() == 1);
    }
    // A constant clearing the decay+production scale passes the same box.
    declared.K = 0.25;
    CHECK(probe_assumptions(f, declared, box, 20000, 1).total_violations == 0);
}

TEST_CASE("quadratic growth defeats every declared constant eventually") {
    RhsFunction f;
    f.dim = 1;
    f.num_lags = 1;
    f.eval = [](double, std::span<const double> y, std::span<const std::span<const double>>,
                std::span<double> out) { out[0] = y[0] * y[0]; };
    for (double K : {1.0, 1e6}) {
        AssumptionProfile declared;
        declared.K = K;
        // On |y| <= M the ratio |f|/(1+|y|) reaches ~M, so any K is beaten
        // once the box is wide enough.
        const double M = 10.0 * (1.0 + K);
        const ProbeBox box = scalar_box(0.0, 1.0, -M, M, 0.0, 0.0);
        const ProbeReport r = probe_assumptions(f, declared, box, 2000, 3);
        CHECK(r.total_violations > 0);
    }
}

TEST_CASE("probing is deterministic and thread-count independent") {
    const RhsFunction f = metal_rhs(metal_preset_params("metal1"));
    const AssumptionProfile declared = metal_certified_profile(metal_preset_params("metal1"));
    const ProbeBox box = scalar_box(0.0, 60.0, -3.0, 3.0, -3.0, 3.0);
    const ProbeReport serial = probe_assumptions(f, declared, box, 10000, 1, 1);
    const ProbeReport again = probe_assumptions(f, declared, box, 10000, 1, 1);
    const ProbeReport fanned = probe_assumptions(f, declared, box, 10000, 1, 4);
    CHECK(reports_equal(serial, again));
    CHECK(reports_equal(serial, fanned));
}

TEST_CASE("witness lists are capped but the full count is kept") {
    const RhsFunction f = mackey_glass_rhs(MackeyGlassParams{});
    AssumptionProfile declared;
    declared.K = 0.04;
    const ProbeBox box = scalar_box(0.0, 100.0, -1e6, 1e6, 0.0, 3.0);
    const ProbeReport r = probe_assumptions(f, declared, box, 20000, 1);
    CHECK(r.violations.size() == kProbeViolationCap);
    CHECK(r.total_violations > static_cast<std::int64_t>(kProbeViolationCap));
}

TEST_CASE("an empty box yields an empty report") {
    const RhsFunction f = linear_decay_rhs(1);
    ProbeBox box = scalar_box(0.0, 1.0, 2.0, -2.0, 0.0, 0.0);  // y_lo > y_hi
    CHECK(box.empty());
    const ProbeReport r = probe_assumptions(f, AssumptionProfile{}, box, 500, 1);
    CHECK(r.samples == 0);
    CHECK(r.total_violations == 0);
    CHECK(std::isnan(r.K_est));
    CHECK(std::isnan(r.H_est));
    CHECK(std::isnan(r.L_est));
    CHECK(std::isnan(r.beta_fit));
    // Zero requested samples behaves the same way.
    const ProbeBox ok = scalar_box(0.0, 1.0, -1.0, 1.0, 0.0, 0.0);
    CHECK(probe_assumptions(f, AssumptionProfile{}, ok, 0, 1).samples == 0);
}

TEST_CASE("a single point degenerates every pairwise statistic to no-data") {
    const RhsFunction f = metal_rhs(metal_preset_params("metal1"));
    const ProbeBox point = scalar_box(0.0, 0.0, 0.0, 0.0, 0.0, 0.0);
    AssumptionProfile declared;
    declared.K = 2.0;
    const ProbeReport r = probe_assumptions(f, declared, point, 1, 5);
    CHECK(r.samples == 1);
    // The growth envelope at y = z = 0 is |f| = A.
    CHECK(r.K_est == 1.7137);
    CHECK(std::isnan(r.H_est));  // no pair has dy != 0
    CHECK(std::isnan(r.L_est));
    CHECK(std::isnan(r.alpha_fit));
    CHECK(std::isnan(r.beta_fit));
    CHECK(std::isnan(r.gamma_fit));
    CHECK(r.total_violations == 0);
}

TEST_CASE("power-law exponents are recovered on smooth one-signed regions") {
    // Away from its kinks the model is differentiable, so small finite
    // differences scale linearly in every coordinate group.
    const RhsFunction f = metal_rhs(metal_preset_params("metal1"));
    const AssumptionProfile declared = metal_certified_profile(metal_preset_params("metal1"));
    const ProbeBox box = scalar_box(0.0, 60.0, 0.2, 3.0, 0.2, 3.0);
    const ProbeReport r = probe_assumptions(f, declared, box, 20000, 1);
    CHECK(r.beta_fit == doctest::Approx(1.0).epsilon(0.05));
    CHECK(r.gamma_fit == doctest::Approx(1.0).epsilon(0.05));
    CHECK(r.total_violations == 0);
}

TEST_CASE("box validation rejects malformed and unbounded regions") {
    const RhsFunction f = sir_rhs(SirParams{});
    ProbeBox box;
    box.t_lo = 0.0;
    box.t_hi = 1.0;
    box.y_lo.assign(8, 0.0);
    box.y_hi.assign(8, 1.0);
    box.z_lo.assign(32, 0.0);  // 4 lags * 8 dims
    box.z_hi.assign(32, 1.0);
    CHECK_NOTHROW(box.validate(8, 4));

    ProbeBox wrong = box;
    wrong.y_lo.resize(7);
    CHECK_THROWS_AS(wrong.validate(8, 4), std::invalid_argument);
    wrong = box;
    wrong.z_hi.resize(8);
    CHECK_THROWS_AS(wrong.validate(8, 4), std::invalid_argument);
    wrong = box;
    wrong.t_hi = INFINITY;
    CHECK_THROWS_AS(wrong.validate(8, 4), std::invalid_argument);
    wrong = box;
    wrong.y_hi[3] = NAN;
    CHECK_THROWS_AS(wrong.validate(8, 4), std::invalid_argument);
}
