#include "ddesteps/probe.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace ddesteps {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kRelSlack = 1e-12;
constexpr int kChunks = 256;  // fixed partition => jobs never changes results

constexpr int kPrimes[] = {
    2,   3,   5,   7,   11,  13,  17,  19,  23,  29,  31,  37,  41,  43,  47,  53,
    59,  61,  67,  71,  73,  79,  83,  89,  97,  101, 103, 107, 109, 113, 127, 131,
    137, 139, 149, 151, 157, 163, 167, 173, 179, 181, 191, 193, 197, 199, 211, 223,
    227, 229, 233, 239, 241, 251, 257, 263, 269, 271, 277, 281, 283, 293, 307, 311};

double radical_inverse(std::uint64_t i, int base) {
    double inv = 1.0 / base, f = inv, x = 0.0;
    while (i > 0) {
        x += f * static_cast<double>(i % base);
        i /= base;
        f *= inv;
    }
    return x;
}

struct SamplePoint {
    double t;
    std::vector<double> y, z;
};

class HaltonSampler {
  public:
    HaltonSampler(const ProbeBox& box, int dim, int lags, std::uint64_t seed)
        : box_(box), dim_(dim), lags_(lags), offset_(1 + seed * 7919) {
        const std::size_t need = 1 + static_cast<std::size_t>(dim) * (1 + lags);
        if (need > std::size(kPrimes))
            throw std::invalid_argument("probe supports at most " +
                                        std::to_string((std::size(kPrimes) - 1)) +
                                        " sampled coordinates");
    }

    SamplePoint at(std::int64_t index) const {
        const std::uint64_t i = offset_ + static_cast<std::uint64_t>(index);
        SamplePoint p;
        int axis = 0;
        p.t = lerp(box_.t_lo, box_.t_hi, radical_inverse(i, kPrimes[axis++]));
        p.y.resize(dim_);
        for (int c = 0; c < dim_; ++c)
            p.y[c] = lerp(box_.y_lo[c], box_.y_hi[c], radical_inverse(i, kPrimes[axis++]));
        p.z.resize(static_cast<std::size_t>(dim_) * lags_);
        for (std::size_t c = 0; c < p.z.size(); ++c)
            p.z[c] = lerp(box_.z_lo[c], box_.z_hi[c], radical_inverse(i, kPrimes[axis++]));
        return p;
    }

  private:
    static double lerp(double lo, double hi, double u) { return lo + (hi - lo) * u; }

    const ProbeBox& box_;
    int dim_, lags_;
    std::uint64_t offset_;
};

// Regression accumulator for a log-log exponent fit.
struct FitAcc {
    double su = 0, sv = 0, suv = 0, suu = 0;
    std::int64_t n = 0;

    void add(double u, double v) {
        su += u;
        sv += v;
        suv += u * v;
        suu += u * u;
        ++n;
    }
    void merge(const FitAcc& o) {
        su += o.su;
        sv += o.sv;
        suv += o.suv;
        suu += o.suu;
        n += o.n;
    }
    double slope() const {
        if (n < 2) return kNaN;
        const double denom = n * suu - su * su;
        if (denom == 0.0) return kNaN;
        return (n * suv - su * sv) / denom;
    }
};

struct ChunkResult {
    double k_env = -kInf, h_env = -kInf, l_env = -kInf;
    FitAcc fit_t, fit_y, fit_z;
    std::vector<ProbeViolation> violations;
    std::int64_t total_violations = 0;
};

std::vector<double> eval_at(const RhsFunction& rhs, int dim, int lags, double t,
                            const std::vector<double>& y, const std::vector<double>& z) {
    std::vector<double> out(dim);
    std::vector<std::span<const double>> zs(lags);
    for (int l = 0; l < lags; ++l)
        zs[l] = std::span<const double>(z.data() + static_cast<std::size_t>(l) * dim, dim);
    rhs.eval(t, std::span<const double>(y), std::span<const std::span<const double>>(zs),
             std::span<double>(out));
    return out;
}

double diff_norm(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return std::sqrt(s);
}

// Right side of the Hölder-chain inequality with L = 1; caller scales by L.
double holder_unit(const AssumptionProfile& prof, const SamplePoint& p,
                   const SamplePoint& q, double ny_p, double ny_q, double nz_p,
                   double nz_q) {
    const double wy = 1.0 + ny_p + ny_q;
    const double wz = 1.0 + nz_p + nz_q;
    const double dt = std::fabs(p.t - q.t);
    const double dy = diff_norm(p.y, q.y);
    const double dz = diff_norm(p.z, q.z);
    double acc = wy * wz * std::pow(dt, prof.alpha);
    for (double b : prof.betas) acc += wz * std::pow(dy, b);
    for (double g : prof.gammas) acc += wy * std::pow(dz, g);
    return acc;
}

void record(ChunkResult& r, const char* cond, std::int64_t sample, double lhs, double rhs,
            const SamplePoint& p) {
    ++r.total_violations;
    ProbeViolation v;
    v.condition = cond;
    v.sample = sample;
    v.lhs = lhs;
    v.rhs = rhs;
    v.t = p.t;
    v.y = p.y;
    v.z = p.z;
    r.violations.push_back(std::move(v));
}

bool violates(double lhs, double rhs) {
    return lhs > rhs + kRelSlack * std::max(1.0, std::fabs(rhs));
}

ChunkResult run_chunk(const RhsFunction& rhs, const AssumptionProfile& declared,
                      const HaltonSampler& sampler, std::int64_t begin, std::int64_t end) {
    ChunkResult r;
    const int dim = rhs.dim, lags = rhs.num_lags;
    for (std::int64_t i = begin; i < end; ++i) {
        const SamplePoint p = sampler.at(i);
        const SamplePoint q = sampler.at(i + 1);
        const double ny = norm2(p.y), nz = norm2(p.z);
        const auto fp = eval_at(rhs, dim, lags, p.t, p.y, p.z);

        // Growth: ||f|| <= K (1+||y||)(1+||z||), checked at the point itself.
        const double growth_scale = (1.0 + ny) * (1.0 + nz);
        const double fn = norm2(fp);
        r.k_env = std::max(r.k_env, fn / growth_scale);
        if (violates(fn, declared.K * growth_scale))
            record(r, "growth", i, fn, declared.K * growth_scale, p);

        // One-sided condition: pair this point's (t, z) with the next point's y.
        const double dy = diff_norm(p.y, q.y);
        if (dy > 0.0) {
            const auto fy = eval_at(rhs, dim, lags, p.t, q.y, p.z);
            double inner = 0.0;
            for (int c = 0; c < dim; ++c) inner += (p.y[c] - q.y[c]) * (fp[c] - fy[c]);
            const double denom = (1.0 + nz) * dy * dy;
            r.h_env = std::max(r.h_env, inner / denom);
            if (violates(inner, declared.H * denom))
                record(r, "one_sided", i, inner, declared.H * denom, p);
            const double dfy = diff_norm(fp, fy);
            if (dfy > 0.0) r.fit_y.add(std::log(dy), std::log(dfy));
        }

        // Hölder chain across the full consecutive pair.
        const auto fq = eval_at(rhs, dim, lags, q.t, q.y, q.z);
        const double unit =
            holder_unit(declared, p, q, ny, norm2(q.y), nz, norm2(q.z));
        const double df = diff_norm(fp, fq);
        if (unit > 0.0) {
            r.l_env = std::max(r.l_env, df / unit);
            if (violates(df, declared.L * unit))
                record(r, "holder", i, df, declared.L * unit, p);
        }

        // Single-group variations for the exponent fits.
        const double dt = std::fabs(p.t - q.t);
        if (dt > 0.0) {
            const auto ft = eval_at(rhs, dim, lags, q.t, p.y, p.z);
            const double dft = diff_norm(fp, ft);
            if (dft > 0.0) r.fit_t.add(std::log(dt), std::log(dft));
        }
        const double dz = diff_norm(p.z, q.z);
        if (dz > 0.0) {
            const auto fz = eval_at(rhs, dim, lags, p.t, p.y, q.z);
            const double dfz = diff_norm(fp, fz);
            if (dfz > 0.0) r.fit_z.add(std::log(dz), std::log(dfz));
        }
    }
    return r;
}

}  // namespace

bool ProbeBox::empty() const {
    if (t_lo > t_hi) return true;
    for (std::size_t i = 0; i < y_lo.size(); ++i)
        if (y_lo[i] > y_hi[i]) return true;
    for (std::size_t i = 0; i < z_lo.size(); ++i)
        if (z_lo[i] > z_hi[i]) return true;
    return false;
}

void ProbeBox::validate(int dim, int num_lags) const {
    const std::size_t zd = static_cast<std::size_t>(dim) * num_lags;
    if (y_lo.size() != static_cast<std::size_t>(dim) || y_hi.size() != y_lo.size())
        throw std::invalid_argument("probe box y ranges must match the RHS dimension");
    if (z_lo.size() != zd || z_hi.size() != zd)
        throw std::invalid_argument(
            "probe box z ranges must cover every delayed coordinate (num_lags * dim)");
    const auto finite = [](double v) { return std::isfinite(v); };
    if (!finite(t_lo) || !finite(t_hi)) throw std::invalid_argument("probe box must be bounded");
    for (double v : y_lo)
        if (!finite(v)) throw std::invalid_argument("probe box must be bounded");
    for (double v : y_hi)
        if (!finite(v)) throw std::invalid_argument("probe box must be bounded");
    for (double v : z_lo)
        if (!finite(v)) throw std::invalid_argument("probe box must be bounded");
    for (double v : z_hi)
        if (!finite(v)) throw std::invalid_argument("probe box must be bounded");
}

ProbeReport probe_assumptions(const RhsFunction& rhs, const AssumptionProfile& declared,
                              const ProbeBox& box, std::int64_t samples,
                              std::uint64_t seed, int jobs) {
    declared.validate();
    box.validate(rhs.dim, rhs.num_lags);
    ProbeReport report;
    if (box.empty() || samples <= 0) {
        report.samples = 0;  // nothing was actually sampled
        report.K_est = report.H_est = report.L_est = kNaN;
        report.alpha_fit = report.beta_fit = report.gamma_fit = kNaN;
        return report;
    }
    report.samples = samples;

    const HaltonSampler sampler(box, rhs.dim, rhs.num_lags, seed);
    std::vector<ChunkResult> chunks(kChunks);
    const auto chunk_begin = [samples](int c) {
        return samples * static_cast<std::int64_t>(c) / kChunks;
    };

    if (jobs > 1) {
#pragma omp parallel for schedule(dynamic) num_threads(jobs)
        for (int c = 0; c < kChunks; ++c)
            chunks[c] = run_chunk(rhs, declared, sampler, chunk_begin(c), chunk_begin(c + 1));
    } else {
        for (int c = 0; c < kChunks; ++c)
            chunks[c] = run_chunk(rhs, declared, sampler, chunk_begin(c), chunk_begin(c + 1));
    }

    // Merge in fixed chunk order so the result is independent of scheduling.
    double k_env = -kInf, h_env = -kInf, l_env = -kInf;
    FitAcc fit_t, fit_y, fit_z;
    for (const ChunkResult& r : chunks) {
        k_env = std::max(k_env, r.k_env);
        h_env = std::max(h_env, r.h_env);
        l_env = std::max(l_env, r.l_env);
        fit_t.merge(r.fit_t);
        fit_y.merge(r.fit_y);
        fit_z.merge(r.fit_z);
        report.total_violations += r.total_violations;
        for (const ProbeViolation& v : r.violations) {
            if (report.violations.size() >= kProbeViolationCap) break;
            report.violations.push_back(v);
        }
    }
    report.K_est = k_env == -kInf ? kNaN : k_env;
    report.H_est = h_env == -kInf ? kNaN : h_env;
    report.L_est = l_env == -kInf ? kNaN : l_env;
    report.alpha_fit = fit_t.slope();
    report.beta_fit = fit_y.slope();
    report.gamma_fit = fit_z.slope();
    return report;
}

}  // namespace ddesteps
