#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "fields.hpp"
#include "fit.hpp"
#include "report.hpp"

namespace zlab
{
/// ||propagated field||_{L^q_t L^p_x(T^{d+1})} / ||data||_{L^2(T^d)}.
struct RatioRecord
{
    int d = 0;
    std::int64_t N = 0;
    double p = 4.0;
    double q = 4.0;
    std::string generator;
    double ratio = 0.0;
    std::string path;
    double tolerance = 0.0;
};

inline const std::vector<std::string>& norm_csv_header()
{
    static const std::vector<std::string> h{"experiment", "d", "N", "p", "q", "value", "path", "tolerance"};
    return h;
}

inline std::vector<std::string> norm_row(const std::string& experiment, const RatioRecord& r)
{
    return {experiment + (r.generator.empty() ? "" : ":" + r.generator),
            cell(r.d),
            cell(r.N),
            cell(r.p),
            cell(r.q),
            cell(r.ratio),
            r.path,
            cell(r.tolerance)};
}

/// (2 pi)^{d/2} ||a||_2.
inline double data_norm(const FrequencySet& set) { return std::pow(kTwoPi, 0.5 * set.dim()) * set.l2(); }

inline RatioRecord strichartz_ratio(const FrequencySet& set, const PhaseFunction& phase, NormSpec spec,
                                    const NormOptions& opt = {})
{
    require(!set.empty(), "strichartz ratio of an empty set");
    const NormResult n = lp_norm(set, phase, spec, opt);
    RatioRecord r;
    r.d = set.dim();
    r.p = spec.p;
    r.q = spec.q;
    r.ratio = n.value / data_norm(set);
    r.path = n.path;
    r.tolerance = n.tolerance;
    return r;
}

/// Schrodinger L^4 ratio of the indicator of {lo2 <= |k|^2 <= hi2}; counts
/// quadruples with the radial fast path.
inline RatioRecord radial_strichartz_ratio(int dim, const RadialBounds& rb, const Budget& budget = {})
{
    require(!rb.empty(), "strichartz ratio of an empty set");
    const double count = static_cast<double>(radial_quadruple_count(dim, rb, budget));
    const double size = static_cast<double>(radial_point_count(dim, rb));
    RatioRecord r;
    r.d = dim;
    r.ratio = std::pow(std::pow(kTwoPi, dim + 1) * count, 0.25) / (std::pow(kTwoPi, 0.5 * dim) * std::sqrt(size));
    r.path = "counting";
    return r;
}

// ---------------------------------------------------------------------------
// Sweep helpers
// ---------------------------------------------------------------------------

enum class RegionKind
{
    ball,
    shell,
    annulus,
};

inline RegionKind parse_region_kind(std::string_view s)
{
    if (s == "ball")
        return RegionKind::ball;
    if (s == "shell")
        return RegionKind::shell;
    if (s == "annulus")
        return RegionKind::annulus;
    fail(Errc::invalid_argument, "unknown region '" + std::string(s) + "'");
}

inline std::string_view region_name(RegionKind k)
{
    return k == RegionKind::ball ? "ball" : k == RegionKind::shell ? "shell" : "annulus";
}

/// Origin ball of radius N, shell {N - w <= |k| <= N + w}, or |k| ~ N.
inline FrequencyRegion make_region(RegionKind kind, int d, std::int64_t N, double shell_width = 1.0)
{
    switch (kind)
    {
    case RegionKind::ball:
        return Ball{std::vector<double>(static_cast<std::size_t>(d), 0.0), static_cast<double>(N)};
    case RegionKind::shell:
        return Shell{static_cast<double>(N), shell_width};
    default:
        return Annulus{N};
    }
}

inline void check_sweep(const std::vector<std::int64_t>& Ns)
{
    require(Ns.size() >= 3, "sweep needs at least 3 N values");
    for (std::size_t i = 0; i < Ns.size(); ++i)
    {
        require(Ns[i] >= 1, "N must be >= 1");
        for (std::size_t j = 0; j < i; ++j)
            require(Ns[i] != Ns[j], "Ns distinct");
    }
}

/// Random +-1 coefficients from the (seed, stream) generator.
inline FrequencySet random_signs(const FrequencySet& support, std::uint64_t seed, std::uint64_t stream)
{
    auto rng = make_rng(seed, stream);
    std::vector<cplx> c(support.size());
    for (auto& v : c)
        v = (rng() >> 63) ? 1.0 : -1.0;
    return support.with_coeffs(std::move(c));
}

/// Grid norm evaluated at two resolutions; the finer value is reported with
/// the relative change as its tolerance.
inline NormResult two_level_norm(const FrequencySet& set, const PhaseFunction& phase, NormSpec spec,
                                 const GridSpec& coarse, const GridSpec& fine, const Budget& budget = {})
{
    NormResult r;
    const double vc = lp_norm_streaming(set, phase, coarse, spec, budget);
    r.value = lp_norm_streaming(set, phase, fine, spec, budget);
    r.tolerance = std::abs(r.value - vc) / r.value;
    r.path = "grid";
    r.grid = fine;
    return r;
}

// ---------------------------------------------------------------------------
// Strichartz sweep
// ---------------------------------------------------------------------------

struct StrichartzParams
{
    int d = 2;
    std::vector<std::int64_t> Ns{8, 16, 32, 64};
    RegionKind region = RegionKind::ball;
    double shell_width = 1.0;
    NormSpec spec{4.0, 4.0};
    PhaseFunction phase{};
    bool random = false; // +-1 coefficients instead of all-ones
    std::uint64_t seed = 0;
    double max_slope = kInf; // bound checked when finite
};

inline Outcome strichartz_sweep(const StrichartzParams& p, const NormOptions& opt = {})
{
    check_sweep(p.Ns);
    Outcome out;
    out.table.header = norm_csv_header();
    std::vector<std::pair<double, double>> pts;
    for (auto N : p.Ns)
    {
        const FrequencyRegion region = make_region(p.region, p.d, N, p.shell_width);
        RatioRecord r;
        const auto rb = radial_bounds(region);
        if (!p.random && rb && p.phase.kind == PhaseKind::schrodinger && p.spec.p == 4.0 && p.spec.q == 4.0)
            r = radial_strichartz_ratio(p.d, *rb, opt.budget);
        else
        {
            FrequencySet set = enumerate(region, p.d);
            if (p.random)
                set = random_signs(set, p.seed, static_cast<std::uint64_t>(N));
            r = strichartz_ratio(set, p.phase, p.spec, opt);
        }
        r.N = N;
        r.generator = std::string(region_name(p.region)) + (p.random ? "-random" : "-ones");
        out.table.add(norm_row("strichartz", r));
        pts.emplace_back(static_cast<double>(N), r.ratio);
    }
    const auto fit = fit_exponent(pts);
    out.summary = fit_json(fit);
    if (std::isfinite(p.max_slope))
        out.check(fit.slope <= p.max_slope,
                  "slope " + format_real(fit.slope) + " exceeds " + format_real(p.max_slope));
    return out;
}

// ---------------------------------------------------------------------------
// Ball versus shell (d = 3, p = 4)
// ---------------------------------------------------------------------------

struct ContrastResult
{
    ExponentFit ball, shell;
    Outcome outcome;
};

inline ContrastResult ball_vs_shell_contrast(const std::vector<std::int64_t>& Ns, const Budget& budget = {})
{
    check_sweep(Ns);
    constexpr int d = 3;
    ContrastResult res;
    auto& out = res.outcome;
    out.table.header = norm_csv_header();
    std::vector<std::pair<double, double>> pb, ps;
    for (auto N : Ns)
    {
        for (RegionKind kind : {RegionKind::ball, RegionKind::shell})
        {
            RatioRecord r = radial_strichartz_ratio(d, *radial_bounds(make_region(kind, d, N)), budget);
            r.N = N;
            r.generator = std::string(region_name(kind));
            out.table.add(norm_row("shell-contrast", r));
            (kind == RegionKind::ball ? pb : ps).emplace_back(static_cast<double>(N), r.ratio);
        }
    }
    res.ball = fit_exponent(pb);
    res.shell = fit_exponent(ps);
    out.summary["ball"] = fit_json(res.ball);
    out.summary["shell"] = fit_json(res.shell);
    out.check(res.ball.slope >= 0.10 && res.ball.slope <= 0.40,
              "ball slope " + format_real(res.ball.slope) + " outside [0.10, 0.40]");
    out.check(res.shell.slope >= -0.10 && res.shell.slope <= 0.30,
              "shell slope " + format_real(res.shell.slope) + " outside [-0.10, 0.30]");
    out.check(res.shell.slope < res.ball.slope, "shell slope not below ball slope");
    return res;
}

// ---------------------------------------------------------------------------
// Wave mixed norms
// ---------------------------------------------------------------------------

/// 1/q = (d-1)/2 (1/2 - 1/p), excluding (q, p, d) = (2, inf, 3).
inline bool wave_admissible(int d, double q, double p)
{
    if (q < 2.0 || p < 2.0)
        return false;
    if (d == 3 && q == 2.0 && std::isinf(p))
        return false;
    const double lhs = std::isinf(q) ? 0.0 : 1.0 / q;
    const double rhs = 0.5 * (d - 1) * (0.5 - (std::isinf(p) ? 0.0 : 1.0 / p));
    return std::abs(lhs - rhs) < 1e-12;
}

/// d/2 - d/p - 1/q.
inline double wave_exponent(int d, double q, double p)
{
    return 0.5 * d - (std::isinf(p) ? 0.0 : d / p) - (std::isinf(q) ? 0.0 : 1.0 / q);
}

struct WaveParams
{
    int d = 3;
    std::vector<std::int64_t> Ns{8, 16, 32};
    double q = 10.0;
    double p = 2.5;
    PhaseKind phase = PhaseKind::half_wave_plus;
};

/// Mixed norm of half-wave evolved data over the full period. Exact when
/// p = 2; otherwise two grids (spatial oversampling 1 and 2, temporal 2 and
/// 4) with the finer value reported.
inline RatioRecord wave_ratio(const FrequencySet& set, PhaseKind kind, NormSpec spec, const Budget& budget = {})
{
    const PhaseFunction phase{kind};
    if (spec.p == 2.0 && phase.unitary())
        return strichartz_ratio(set, phase, spec);
    const GridSpec coarse = make_grid(set, phase, 1.0, 2.0);
    const GridSpec fine = make_grid(set, phase, 2.0, 4.0);
    const NormResult n = two_level_norm(set, phase, spec, coarse, fine, budget);
    RatioRecord r;
    r.d = set.dim();
    r.p = spec.p;
    r.q = spec.q;
    r.ratio = n.value / data_norm(set);
    r.path = n.path;
    r.tolerance = n.tolerance;
    return r;
}

inline Outcome wave_mixed_norm_check(const WaveParams& w, const Budget& budget = {})
{
    check_sweep(w.Ns);
    if (!wave_admissible(w.d, w.q, w.p))
        fail(Errc::invalid_argument, "(q, p) = (" + format_real(w.q) + ", " + format_real(w.p)
                                         + ") is not wave-admissible in d = " + std::to_string(w.d));
    Outcome out;
    out.table.header = norm_csv_header();
    std::vector<std::pair<double, double>> pts;
    for (auto N : w.Ns)
    {
        const FrequencySet set = enumerate(Annulus{N}, w.d);
        RatioRecord r = wave_ratio(set, w.phase, NormSpec{w.q, w.p}, budget);
        r.N = N;
        r.generator = "annulus-ones";
        out.table.add(norm_row("wave-mixed", r));
        pts.emplace_back(static_cast<double>(N), r.ratio);
    }
    const auto fit = fit_exponent(pts);
    const double bound = wave_exponent(w.d, w.q, w.p) + 0.1;
    out.summary = fit_json(fit);
    out.summary["theory_exponent"] = wave_exponent(w.d, w.q, w.p);
    out.summary["bound"] = bound;
    out.summary["time_domain"] = "full period [0, 2pi)";
    out.check(fit.slope <= bound, "slope " + format_real(fit.slope) + " exceeds " + format_real(bound));
    return out;
}

// ---------------------------------------------------------------------------
// Block decoupling
// ---------------------------------------------------------------------------

/// ||u||_p / (sum_blocks ||u_block||_p^2)^{1/2}, pure L^p over T^{d+1}.
inline double decoupling_ratio(const FrequencySet& set, const BlockPartition& part, double p,
                               const PhaseFunction& phase = {}, const NormOptions& opt = {})
{
    require(!set.empty(), "decoupling ratio of an empty set");
    const NormSpec spec{p, p};
    const auto blocks = block_sets(set, part);
    require(!blocks.empty(), "partition has no blocks");
    std::vector<double> bn(blocks.size());
    for (std::size_t i = 0; i < blocks.size(); ++i)
        bn[i] = lp_norm(blocks[i], phase, spec, opt).value;
    double s = 0.0;
    for (double v : bn)
        s += v * v;
    return lp_norm(set, phase, spec, opt).value / std::sqrt(s);
}

struct DecoupleParams
{
    int d = 2;
    std::vector<std::int64_t> Ns{8, 16, 32};
    double p = 4.0;
    int trials = 3;
    std::uint64_t seed = 0;
    double growth = 0.3; // ratio <= C N^growth, C from the first N
};

/// Random +-1 coefficients on the unit-width shell at N, blocks of side N/4;
/// sup over trials per N.
inline Outcome decoupling_sweep(const DecoupleParams& dp, const NormOptions& opt = {})
{
    check_sweep(dp.Ns);
    Outcome out;
    out.table.header = {"d", "N", "trial", "block_side", "blocks", "p", "ratio"};
    std::vector<std::pair<double, double>> pts;
    for (auto N : dp.Ns)
    {
        const FrequencySet support = enumerate(Shell{static_cast<double>(N), 1.0}, dp.d);
        const std::int64_t side = std::max<std::int64_t>(1, N / 4);
        const auto part = partition_blocks(support, side);
        double sup = 0.0;
        for (int tr = 0; tr < dp.trials; ++tr)
        {
            const FrequencySet set = random_signs(support, dp.seed, static_cast<std::uint64_t>(N) * 1000003u + tr);
            const double r = decoupling_ratio(set, part, dp.p, PhaseFunction{}, opt);
            sup = std::max(sup, r);
            out.table.add({cell(dp.d), cell(N), cell(tr), cell(side), cell(static_cast<std::uint64_t>(part.blocks.size())),
                           cell(dp.p), cell(r)});
        }
        pts.emplace_back(static_cast<double>(N), sup);
    }
    const auto fit = fit_exponent(pts);
    out.summary = fit_json(fit);
    const double c = pts.front().second / std::pow(pts.front().first, dp.growth);
    for (auto [n, v] : pts)
        out.check(v <= c * std::pow(n, dp.growth) * (1.0 + 1e-12),
                  "ratio at N=" + format_real(n) + " exceeds the N^" + format_real(dp.growth) + " envelope");
    return out;
}

// ---------------------------------------------------------------------------
// Slab sharpness
// ---------------------------------------------------------------------------

/// p = 2(d+1)/(d-1).
inline double slab_exponent(int d) { return 2.0 * (d + 1) / (d - 1); }

inline Outcome sharpness_slab_sweep(int d, const std::vector<std::int64_t>& Ns, const NormOptions& opt = {})
{
    require(d == 2 || d == 3, "slab sweep supports d = 2, 3");
    check_sweep(Ns);
    const double p = slab_exponent(d);
    Outcome out;
    out.table.header = norm_csv_header();
    std::vector<std::pair<double, double>> pts;
    for (auto N : Ns)
    {
        RatioRecord r = strichartz_ratio(slab_example(d, N), PhaseFunction{}, NormSpec{p, p}, opt);
        r.N = N;
        r.generator = "slab";
        out.table.add(norm_row("slab-sharpness", r));
        if (!pts.empty())
            out.check(r.ratio >= pts.back().second * (1.0 - 1e-12),
                      "ratio decreases at N=" + std::to_string(N));
        pts.emplace_back(static_cast<double>(N), r.ratio);
    }
    const auto fit = fit_exponent(pts);
    out.summary = fit_json(fit);
    out.summary["p"] = p;
    out.check(fit.slope >= 0.0 && fit.slope <= 0.15, "slope " + format_real(fit.slope) + " outside [0, 0.15]");
    return out;
}

// ---------------------------------------------------------------------------
// Mixed-norm probe (exploratory)
// ---------------------------------------------------------------------------

struct MixedProbeParams
{
    int d = 4;
    std::vector<std::int64_t> Ns{2, 4, 6};
    double q = 2.0;
    double p = 4.0;
    std::uint64_t seed = 0;
};

/// 2/q = d (1/2 - 1/p).
inline bool on_schrodinger_line(int d, double q, double p)
{
    const double lhs = std::isinf(q) ? 0.0 : 2.0 / q;
    const double rhs = d * (0.5 - (std::isinf(p) ? 0.0 : 1.0 / p));
    return std::abs(lhs - rhs) < 1e-12;
}

/// Mixed L^q_t L^p_x ratio of Schrodinger data. q = p is the pure norm and
/// goes through strichartz_ratio; otherwise two grids, the coarse one at
/// half the temporal (and, for non-even p, spatial) oversampling.
inline RatioRecord mixed_ratio(const FrequencySet& set, NormSpec spec, const NormOptions& opt = {})
{
    const PhaseFunction phase{};
    if (spec.q == spec.p || spec.p == 2.0)
        return strichartz_ratio(set, phase, spec, opt);
    const FrequencySet s = detail::recentred(set);
    const bool even = detail::is_even_integer(spec.p);
    const double sx = even ? spec.p / 2.0 : 2.0;
    const GridSpec coarse = make_grid(s, phase, even ? sx : 1.0, 2.0);
    const GridSpec fine = make_grid(s, phase, sx, 4.0);
    const NormResult n = two_level_norm(s, phase, spec, coarse, fine, opt.budget);
    RatioRecord r;
    r.d = set.dim();
    r.p = spec.p;
    r.q = spec.q;
    r.ratio = n.value / data_norm(set);
    r.path = n.path;
    r.tolerance = n.tolerance;
    return r;
}

inline Outcome mixed_strichartz_probe(const MixedProbeParams& mp, const NormOptions& opt = {})
{
    check_sweep(mp.Ns);
    require(on_schrodinger_line(mp.d, mp.q, mp.p), "(q, p) violates 2/q = d(1/2 - 1/p)");
    require(mp.q <= mp.p, "probe needs q <= p");
    Outcome out;
    out.table.header = norm_csv_header();
    std::vector<std::pair<double, double>> ones, rnd;
    for (auto N : mp.Ns)
    {
        const FrequencySet ball = enumerate(make_region(RegionKind::ball, mp.d, N), mp.d);
        RatioRecord a = mixed_ratio(ball, NormSpec{mp.q, mp.p}, opt);
        a.N = N;
        a.generator = "ball-ones";
        out.table.add(norm_row("mixed-probe", a));
        ones.emplace_back(static_cast<double>(N), a.ratio);
        RatioRecord b = mixed_ratio(random_signs(ball, mp.seed, static_cast<std::uint64_t>(N)),
                                    NormSpec{mp.q, mp.p}, opt);
        b.N = N;
        b.generator = "ball-random";
        out.table.add(norm_row("mixed-probe", b));
        rnd.emplace_back(static_cast<double>(N), b.ratio);
    }
    out.summary["ones"] = fit_json(fit_exponent(ones));
    out.summary["random"] = fit_json(fit_exponent(rnd));
    out.summary["status"] = "open problem - exploratory";
    for (const auto& row : out.table.rows)
        out.check(std::isfinite(std::stod(row[5])), "non-finite ratio");
    return out;
}

} // namespace zlab
