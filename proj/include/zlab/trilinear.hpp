#pragma once

#include <cmath>
#include <complex>
#include <string>
#include <unordered_map>
#include <vector>

#include "fields.hpp"
#include "fit.hpp"
#include "report.hpp"

// I = int_{[-pi,pi] x T^d} e^{it Delta}phi1 * conj(e^{it Delta}phi2) * e^{+-it|grad|}phi3
//   = (2 pi)^d sum_{k1 - k2 + k3 = 0} a1 conj(a2) a3 T(Omega),
// Omega = -|k1|^2 + |k2|^2 +- |k3|.

namespace zlab
{
/// T(Omega) = int_{-pi}^{pi} e^{it Omega} dt.
struct TimeKernel
{
    double operator()(double omega) const
    {
        if (omega == 0.0)
            return kTwoPi;
        return 2.0 * std::sin(kPi * omega) / omega;
    }
};

struct TrilinearInput
{
    FrequencySet phi1; // Schrodinger
    FrequencySet phi2; // Schrodinger, conjugated
    FrequencySet phi3; // half-wave
    int wave_sign = 1; // +1: e^{+it|grad|}, -1: e^{-it|grad|}

    int dim() const { return phi1.dim(); }

    void validate() const
    {
        require(phi1.dim() == phi2.dim() && phi2.dim() == phi3.dim(), "trilinear: dimension mismatch");
        require(wave_sign == 1 || wave_sign == -1, "trilinear: wave_sign must be +1 or -1");
    }
};

/// Omega for one triple, zero-tested exactly (see root_offset).
inline Modulation modulation(const LatticePoint& k1, const LatticePoint& k2, const LatticePoint& k3, int sign)
{
    return root_offset(k2.norm2() - k1.norm2(), k3.norm2(), sign);
}

namespace detail
{
// Index of phi2 by frequency: a dense box when small, a hash map otherwise.
class PointIndex
{
public:
    explicit PointIndex(const FrequencySet& set) : dim_(set.dim())
    {
        if (set.empty())
            return;
        lo_.assign(dim_, 0);
        ext_.assign(dim_, 0);
        std::vector<std::int64_t> hi(dim_);
        for (int i = 0; i < dim_; ++i)
        {
            lo_[i] = hi[i] = set.point(0)[i];
            for (const auto& p : set.points())
            {
                lo_[i] = std::min(lo_[i], p[i]);
                hi[i] = std::max(hi[i], p[i]);
            }
        }
        std::uint64_t vol = 1;
        for (int i = 0; i < dim_; ++i)
        {
            ext_[i] = hi[i] - lo_[i] + 1;
            vol *= static_cast<std::uint64_t>(ext_[i]);
            if (vol > (1u << 24))
                break;
        }
        dense_ = vol <= (1u << 24);
        if (dense_)
        {
            table_.assign(vol, -1);
            for (std::size_t i = 0; i < set.size(); ++i)
                table_[flat(set.point(i))] = static_cast<std::int64_t>(i);
        }
        else
        {
            map_.reserve(set.size());
            for (std::size_t i = 0; i < set.size(); ++i)
                map_.emplace(set.point(i), i);
        }
    }

    /// Index of k in the set, or -1.
    std::int64_t find(const LatticePoint& k) const
    {
        if (lo_.empty())
            return -1;
        if (dense_)
        {
            for (int i = 0; i < dim_; ++i)
                if (k[i] < lo_[i] || k[i] >= lo_[i] + ext_[i])
                    return -1;
            return table_[flat(k)];
        }
        auto it = map_.find(k);
        return it == map_.end() ? -1 : static_cast<std::int64_t>(it->second);
    }

private:
    std::size_t flat(const LatticePoint& k) const
    {
        std::size_t f = 0;
        for (int i = 0; i < dim_; ++i)
            f = f * static_cast<std::size_t>(ext_[i]) + static_cast<std::size_t>(k[i] - lo_[i]);
        return f;
    }

    int dim_;
    bool dense_ = false;
    std::vector<std::int64_t> lo_, ext_;
    std::vector<std::int64_t> table_;
    std::unordered_map<LatticePoint, std::size_t, LatticePointHash> map_;
};
} // namespace detail

/// Exact value of the trilinear form. Hash join: for each (k1, k3) look up
/// k2 = k1 + k3 in phi2.
template <class Kernel = TimeKernel>
cplx trilinear_closed_form(const TrilinearInput& in, Kernel kernel = {}, const Budget& budget = {})
{
    in.validate();
    budget.check_pairs(static_cast<std::uint64_t>(in.phi1.size()) * in.phi3.size(), "trilinear hash join");
    const detail::PointIndex index(in.phi2);
    std::vector<cplx> partial(in.phi1.size());
    parallel_for(in.phi1.size(), [&](std::size_t i) {
        const auto& k1 = in.phi1.point(i);
        const cplx a1 = in.phi1.coeff(i);
        cplx acc = 0.0;
        for (std::size_t j = 0; j < in.phi3.size(); ++j)
        {
            const auto& k3 = in.phi3.point(j);
            const auto m = index.find(k1 + k3);
            if (m < 0)
                continue;
            const auto& k2 = in.phi2.point(static_cast<std::size_t>(m));
            const Modulation om = modulation(k1, k2, k3, in.wave_sign);
            acc += a1 * std::conj(in.phi2.coeff(static_cast<std::size_t>(m))) * in.phi3.coeff(j)
                   * kernel(om.resonant ? 0.0 : om.omega);
        }
        partial[i] = acc;
    });
    cplx total = 0.0;
    for (const auto& p : partial)
        total += p;
    return std::pow(kTwoPi, in.dim()) * total;
}

/// Largest |Omega| over all triples (bound, not attained in general).
inline double trilinear_bandwidth(const TrilinearInput& in)
{
    double m1 = 0.0, m2 = 0.0, m3 = 0.0;
    for (const auto& k : in.phi1.points())
        m1 = std::max(m1, static_cast<double>(k.norm2()));
    for (const auto& k : in.phi2.points())
        m2 = std::max(m2, static_cast<double>(k.norm2()));
    for (const auto& k : in.phi3.points())
        m3 = std::max(m3, k.norm());
    return m1 + m2 + m3;
}

/// Space: rectangle rule with M_i > the summed per-axis bandwidth, exact for
/// the trigonometric product. Time: composite Gauss-Legendre on [-pi, pi]
/// with panels short enough that each resolves the fastest modulation.
inline GridSpec trilinear_grid(const TrilinearInput& in, int gl_order = 20)
{
    in.validate();
    GridSpec g;
    g.dim = in.dim();
    g.mx.clear();
    for (int i = 0; i < g.dim; ++i)
    {
        std::int64_t s = 0;
        for (const auto* set : {&in.phi1, &in.phi2, &in.phi3})
            s += set->empty() ? 0 : set->kmax(i);
        g.mx.push_back(fft_friendly_size(static_cast<double>(s + 1)));
    }
    g.rule = TimeRule::gauss_legendre;
    g.gl_order = gl_order;
    g.t0 = -kPi;
    g.t1 = kPi;
    // panel width h with bandwidth * h / 2 <= 2
    const int panels = 2 + static_cast<int>(std::ceil(trilinear_bandwidth(in) * kTwoPi / 4.0));
    g.mt = panels * gl_order;
    return g;
}

/// Quadrature oracle for trilinear_closed_form.
inline cplx trilinear_grid_oracle(const TrilinearInput& in, const GridSpec& grid, const Budget& budget = {})
{
    in.validate();
    require(grid.dim == in.dim(), "grid dimension mismatch");
    for (int i = 0; i < grid.dim; ++i)
    {
        std::int64_t s = 0;
        for (const auto* set : {&in.phi1, &in.phi2, &in.phi3})
            s += set->empty() ? 0 : set->kmax(i);
        if (grid.mx[i] < s + 1)
            fail(Errc::aliasing, "aliasing: trilinear product needs " + std::to_string(s + 1)
                                     + " points on axis " + std::to_string(i));
    }
    if (grid.rule == TimeRule::gauss_legendre)
    {
        const double h = (grid.t1 - grid.t0) / (grid.mt / grid.gl_order);
        if (trilinear_bandwidth(in) * h / 2.0 > 2.5)
            fail(Errc::aliasing, "aliasing: time panels too coarse for the modulation bandwidth");
    }
    if (in.phi1.empty() || in.phi2.empty() || in.phi3.empty())
        return 0.0;

    budget.check_grid(3 * std::min<std::uint64_t>(worker_count(), grid.mt) * grid.spatial_size() * sizeof(cplx),
                      "trilinear slices");
    const PhaseFunction schr{PhaseKind::schrodinger};
    const PhaseFunction wave{in.wave_sign > 0 ? PhaseKind::half_wave_plus : PhaseKind::half_wave_minus};
    const GridSpec& g = grid;
    const SliceEvaluator e1(in.phi1, schr, g), e2(in.phi2, schr, g), e3(in.phi3, wave, g);
    const auto& times = e1.times();
    struct Work
    {
        SpatialTransform w1, w2, w3;
    };
    std::vector<cplx> slice(static_cast<std::size_t>(g.mt));
    const double cell = g.cell_volume();
    parallel_for_with_state(
        slice.size(), [&] { return Work{e1.make_workspace(), e2.make_workspace(), e3.make_workspace()}; },
        [&](Work& w, std::size_t j) {
            e1.evaluate(j, w.w1);
            e2.evaluate(j, w.w2);
            e3.evaluate(j, w.w3);
            cplx s = 0.0;
            const cplx *u1 = w.w1.data(), *u2 = w.w2.data(), *u3 = w.w3.data();
            for (std::size_t x = 0; x < w.w1.size(); ++x)
                s += u1[x] * std::conj(u2[x]) * u3[x];
            slice[j] = s * cell * times.weights[j];
        });
    cplx total = 0.0;
    for (const auto& s : slice)
        total += s;
    return total;
}

// ---------------------------------------------------------------------------
// alpha sweep
// ---------------------------------------------------------------------------

enum class TrilinearGenerator
{
    paper_example,
    random_shell,
    random_annulus,
};

inline std::string_view generator_name(TrilinearGenerator g)
{
    switch (g)
    {
    case TrilinearGenerator::paper_example:
        return "paper_example";
    case TrilinearGenerator::random_shell:
        return "random_shell";
    default:
        return "random_annulus";
    }
}

inline TrilinearGenerator parse_generator(std::string_view s)
{
    for (auto g : {TrilinearGenerator::paper_example, TrilinearGenerator::random_shell,
                   TrilinearGenerator::random_annulus})
        if (generator_name(g) == s)
            return g;
    fail(Errc::invalid_argument, "unknown generator '" + std::string(s) + "'");
}

/// Standard complex Gaussian coefficients on the given support.
inline FrequencySet random_coefficients(const FrequencySet& support, std::mt19937_64& rng)
{
    std::normal_distribution<double> nd(0.0, 1.0);
    std::vector<cplx> c(support.size());
    for (auto& v : c)
    {
        const double re = nd(rng);
        v = {re, nd(rng)};
    }
    return support.with_coeffs(std::move(c));
}

/// |I| / prod (2 pi)^{d/2} ||a_j||.
inline double trilinear_ratio(const TrilinearInput& in, const Budget& budget = {})
{
    const double denom = std::pow(kTwoPi, 1.5 * in.dim()) * in.phi1.l2() * in.phi2.l2() * in.phi3.l2();
    require(denom > 0.0, "trilinear ratio of zero data");
    return std::abs(trilinear_closed_form(in, TimeKernel{}, budget)) / denom;
}

struct AlphaSweepParams
{
    int d = 3;
    std::vector<std::int64_t> Ns{4, 8, 16};
    TrilinearGenerator generator = TrilinearGenerator::paper_example;
    int trials = 4;
    std::uint64_t seed = 0;
};

/// sup over trials (and both wave signs) of the ratio, per N; slope fitted.
/// Random supports are the dyadic annulus or the unit-width shell at N.
inline Outcome trilinear_alpha_sweep(const AlphaSweepParams& p, const Budget& budget = {})
{
    require(p.Ns.size() >= 3, "alpha sweep needs at least 3 N values");
    require(p.trials >= 1, "trials must be >= 1");
    Outcome out;
    out.table.header = {"d", "N", "trial", "ratio", "generator", "seed"};
    std::vector<std::pair<double, double>> pts;
    const int trials = p.generator == TrilinearGenerator::paper_example ? 1 : p.trials;
    for (std::size_t ni = 0; ni < p.Ns.size(); ++ni)
    {
        const std::int64_t N = p.Ns[ni];
        std::vector<double> ratio(static_cast<std::size_t>(trials));
        if (p.generator == TrilinearGenerator::paper_example)
        {
            auto t = trilinear_example(p.d, N);
            ratio[0] = trilinear_ratio({t.first, t.second, t.third, -1}, budget);
        }
        else
        {
            const FrequencySet support =
                p.generator == TrilinearGenerator::random_shell
                    ? enumerate(Shell{static_cast<double>(N), 1.0}, p.d)
                    : enumerate(Annulus{N}, p.d);
            budget.check_pairs(static_cast<std::uint64_t>(support.size()) * support.size() * 2 * trials,
                               "alpha sweep at N=" + std::to_string(N));
            for (int tr = 0; tr < trials; ++tr)
            {
                auto rng = make_rng(p.seed, static_cast<std::uint64_t>(N) * 1000003u + tr);
                TrilinearInput in{random_coefficients(support, rng), random_coefficients(support, rng),
                                  random_coefficients(support, rng), 1};
                double r = trilinear_ratio(in, budget);
                in.wave_sign = -1;
                ratio[tr] = std::max(r, trilinear_ratio(in, budget));
            }
        }
        double sup = 0.0;
        for (int tr = 0; tr < trials; ++tr)
        {
            sup = std::max(sup, ratio[tr]);
            out.table.add({cell(p.d), cell(N), cell(tr), cell(ratio[tr]), cell(std::string(generator_name(p.generator))),
                           cell(p.seed)});
        }
        pts.emplace_back(static_cast<double>(N), sup);
    }
    const auto fit = fit_exponent(pts);
    out.summary = fit_json(fit);
    out.summary["generator"] = generator_name(p.generator);
    out.summary["d"] = p.d;
    if (p.generator == TrilinearGenerator::paper_example)
        out.check(std::abs(fit.slope) <= 1e-9, "plane-wave ratio not constant in N");
    else if (p.d == 3)
        out.check(fit.slope <= 0.3, "slope " + format_real(fit.slope) + " above 0.3");
    return out;
}

} // namespace zlab
