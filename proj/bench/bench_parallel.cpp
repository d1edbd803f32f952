// Wall-clock comparison of the serial reference paths against the
// multi-worker paths for the three parallel phases: assumption probing,
// sup-error reduction, and ladder fan-out.  Not a ctest; run by hand.

#include <chrono>
#include <cstdio>

#include "ddesteps/convergence.hpp"
#include "ddesteps/models.hpp"
#include "ddesteps/probe.hpp"

using namespace ddesteps;
using clock_type = std::chrono::steady_clock;

namespace {

double seconds_since(clock_type::time_point start) {
    return std::chrono::duration<double>(clock_type::now() - start).count();
}

template <typename F>
double timed(const char* label, int jobs, F&& f) {
    const auto start = clock_type::now();
    f();
    const double s = seconds_since(start);
    std::printf("%-24s jobs=%d   %8.3f s\n", label, jobs, s);
    return s;
}

}  // namespace

int main() {
    const int par = 4;

    {
        const ModelPreset preset = make_preset("metal1");
        ProbeBox box;
        box.t_lo = 0.0;
        box.t_hi = 60.0;
        box.y_lo = {-3.0};
        box.y_hi = {3.0};
        box.z_lo = {-3.0};
        box.z_hi = {3.0};
        const auto run = [&](int jobs) {
            return probe_assumptions(preset.problem.rhs, *preset.profile, box, 400000, 7,
                                     jobs);
        };
        ProbeReport serial, parallel;
        const double ts = timed("probe 4e5 samples", 1, [&] { serial = run(1); });
        const double tp = timed("probe 4e5 samples", par, [&] { parallel = run(par); });
        std::printf("  speedup %.2fx, reports %s\n", ts / tp,
                    serial.K_est == parallel.K_est &&
                            serial.total_violations == parallel.total_violations
                        ? "identical"
                        : "DIFFER");
    }

    {
        const ModelPreset preset = make_preset("metal1");
        const Trajectory reference = reference_solution(preset.problem, 128000);
        const Trajectory coarse = euler_solve_dde(preset.problem, 640);
        double es = 0, ep = 0;
        const double ts = timed("sup_error 768k nodes", 1,
                                [&] { es = sup_error(coarse, reference, 1); });
        const double tp = timed("sup_error 768k nodes", par,
                                [&] { ep = sup_error(coarse, reference, par); });
        std::printf("  speedup %.2fx, errors %s\n", ts / tp,
                    es == ep ? "identical" : "DIFFER");
    }

    {
        LadderSpec spec;
        const ModelPreset preset = make_preset("metal1");
        spec.problem = preset.problem;
        spec.profile = preset.profile;
        spec.N_values = {10, 20, 40, 80, 160, 320, 640, 1280};
        spec.refinement = 100;
        ConvergenceReport rs, rp;
        const double ts = timed("metal ladder", 1, [&] { rs = run_ladder(spec, 1); });
        const double tp = timed("metal ladder", par, [&] { rp = run_ladder(spec, par); });
        const bool same = rs.rows.size() == rp.rows.size() &&
                          [&] {
                              for (std::size_t i = 0; i < rs.rows.size(); ++i)
                                  if (rs.rows[i].sup_error != rp.rows[i].sup_error &&
                                      !(rs.rows[i].diverged && rp.rows[i].diverged))
                                      return false;
                              return true;
                          }();
        std::printf("  speedup %.2fx, rows %s\n", ts / tp, same ? "identical" : "DIFFER");
    }
    return 0;
}
