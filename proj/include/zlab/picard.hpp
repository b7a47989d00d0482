#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <string>
#include <vector>

#include "fields.hpp"
#include "fit.hpp"
#include "report.hpp"
#include "trilinear.hpp"

// First Picard iterate
//   B(f, g)(t) = int_0^t e^{i(t-t')Delta} ((e^{it'Delta} f)(cos(t'|grad|) g)) dt',
//   B^(k) = e^{-it|k|^2} sum_{k'+k''=k} f^(k') g^(k'') (E(theta+) + E(theta-)) / 2,
//   theta+- = |k|^2 - |k'|^2 +- |k''|,  E(theta) = int_0^t e^{it'theta} dt'.

namespace zlab
{
/// E(theta) = (e^{it theta} - 1)/(i theta) = t e^{it theta/2} sinc(t theta/2).
inline cplx duhamel_kernel(double theta, double t)
{
    const double h = 0.5 * t * theta;
    const double sinc = std::abs(h) < 1e-8 ? 1.0 - h * h / 6.0 : std::sin(h) / h;
    return t * sinc * std::polar(1.0, h);
}

/// (E(theta+) + E(theta-)) / 2 with theta+- = a +- sqrt(c), zero-tested exactly.
inline cplx cosine_duhamel(std::int64_t a, std::int64_t c, double t)
{
    const Modulation p = root_offset(a, c, +1), m = root_offset(a, c, -1);
    return 0.5 * (duhamel_kernel(p.resonant ? 0.0 : p.omega, t) + duhamel_kernel(m.resonant ? 0.0 : m.omega, t));
}

/// Fourier data of B(f, g)(t). Parallel over output frequencies; each
/// coefficient sums over supp f in order, so results are deterministic.
inline FrequencySet picard_coefficients(const FrequencySet& f, const FrequencySet& g, double t,
                                        const Budget& budget = {})
{
    require(f.dim() == g.dim(), "picard: dimension mismatch");
    require(t > 0.0 && t <= kTwoPi, "picard: t must be in (0, 2 pi]");
    const std::uint64_t pairs = static_cast<std::uint64_t>(f.size()) * g.size();
    budget.check_pairs(pairs, "picard convolution");
    std::map<LatticePoint, int> outputs;
    for (const auto& a : f.points())
        for (const auto& b : g.points())
            outputs.emplace(a + b, 0);
    std::vector<LatticePoint> ks;
    ks.reserve(outputs.size());
    for (const auto& [k, _] : outputs)
        ks.push_back(k);
    budget.check_pairs(static_cast<std::uint64_t>(ks.size()) * f.size(), "picard output buckets");

    const detail::PointIndex gi(g);
    std::vector<cplx> coeff(ks.size());
    parallel_for(ks.size(), [&](std::size_t o) {
        const auto& k = ks[o];
        const std::int64_t k2 = k.norm2();
        cplx acc = 0.0;
        for (std::size_t i = 0; i < f.size(); ++i)
        {
            const auto j = gi.find(k - f.point(i));
            if (j < 0)
                continue;
            const auto& kk = g.point(static_cast<std::size_t>(j));
            acc += f.coeff(i) * g.coeff(static_cast<std::size_t>(j))
                   * cosine_duhamel(k2 - f.point(i).norm2(), kk.norm2(), t);
        }
        coeff[o] = std::polar(1.0, -t * static_cast<double>(k2)) * acc;
    });
    return FrequencySet(f.dim(), std::move(ks), std::move(coeff));
}

/// (2 pi)^{d/2} (sum <k>^{2s} |a_k|^2)^{1/2}.
inline double sobolev_norm(const FrequencySet& set, double s)
{
    double acc = 0.0;
    for (std::size_t i = 0; i < set.size(); ++i)
        acc += std::pow(1.0 + static_cast<double>(set.point(i).norm2()), s) * std::norm(set.coeff(i));
    return std::pow(kTwoPi, 0.5 * set.dim()) * std::sqrt(acc);
}

// ---------------------------------------------------------------------------
// Norm inflation
// ---------------------------------------------------------------------------

/// f_N = N^{-s-d/2} sum_{|k|~N} e^{ik.x}, g_N = N^{-(s-1/2)-d/2} sum_{|k|~N} cos(k.x),
/// t_N = 1/(100 N^2). The annulus is symmetric, so g^ = N^{-(s-1/2)-d/2} on it.
struct InflationData
{
    int d = 3;
    double s = 0.0;
    std::int64_t N = 8;
    FrequencySet f, g;
    double t = 0.0;

    double f_scale() const { return std::pow(static_cast<double>(N), -s - 0.5 * d); }
    double g_scale() const { return std::pow(static_cast<double>(N), -(s - 0.5) - 0.5 * d); }
};

inline InflationData make_inflation_data(int d, double s, std::int64_t N)
{
    require(N >= 2, "inflation data needs N >= 2");
    InflationData in;
    in.d = d;
    in.s = s;
    in.N = N;
    const FrequencySet a = enumerate(Annulus{N}, d);
    in.f = a.scaled(in.f_scale());
    in.g = a.scaled(in.g_scale());
    in.t = 1.0 / (100.0 * static_cast<double>(N) * static_cast<double>(N));
    return in;
}

/// Unimodular factor of one summand: e^{-i(t-t')|k|^2} e^{-it'|k-k'|^2} cos(t'|k'|).
inline cplx inflation_summand(const LatticePoint& k, const LatticePoint& kp, double tp, double t)
{
    return std::polar(1.0, -(t - tp) * static_cast<double>(k.norm2()) - tp * static_cast<double>((k - kp).norm2()))
           * std::cos(tp * kp.norm());
}

/// For unit coefficients on |k| ~ N at t = t_N: the orbit representatives
/// of output frequencies with |S(k)|^2, S(k) = sum (E(theta+)+E(theta-))/2.
/// The H^s norm of B(f_N, g_N)(t_N) for any s follows by weighting.
struct InflationProfile
{
    int d = 3;
    std::int64_t N = 0;
    double t = 0.0;
    std::vector<std::int64_t> norm2;
    std::vector<std::uint64_t> orbit;
    std::vector<double> weight; // |S(k)|^2

    double hs_norm(double s) const
    {
        const double n = static_cast<double>(N);
        const double scale = std::pow(n, -s - 0.5 * d) * std::pow(n, -(s - 0.5) - 0.5 * d);
        double acc = 0.0;
        for (std::size_t i = 0; i < weight.size(); ++i)
            acc += static_cast<double>(orbit[i]) * std::pow(1.0 + static_cast<double>(norm2[i]), s) * weight[i];
        return std::pow(kTwoPi, 0.5 * d) * scale * std::sqrt(acc);
    }
};

inline InflationProfile inflation_profile(int d, std::int64_t N, const Budget& budget = {})
{
    require(N >= 2, "inflation profile needs N >= 2");
    const auto rb = *radial_bounds(Annulus{N});
    const std::uint64_t n = radial_point_count(d, rb);
    std::uint64_t group = 1;
    for (int i = 1; i <= d; ++i)
        group *= 2 * static_cast<std::uint64_t>(i);
    budget.check_pairs(n * n / group, "inflation profile at N=" + std::to_string(N));

    InflationProfile pr;
    pr.d = d;
    pr.N = N;
    pr.t = 1.0 / (100.0 * static_cast<double>(N) * static_cast<double>(N));
    const auto orbits = hyperoctahedral_orbits(d, 4 * rb.hi2);
    std::vector<double> w(orbits.size());
    const double t = pr.t;
    parallel_for(orbits.size(), [&](std::size_t o) {
        const std::int64_t k2 = orbits[o].rep.norm2();
        cplx acc = 0.0;
        for_each_radial_pair(orbits[o].rep, rb, [&](std::int64_t nx, std::int64_t ny) {
            acc += cosine_duhamel(k2 - nx, ny, t);
        });
        w[o] = std::norm(acc);
    });
    for (std::size_t o = 0; o < orbits.size(); ++o)
        if (w[o] > 0.0)
        {
            pr.norm2.push_back(orbits[o].rep.norm2());
            pr.orbit.push_back(orbits[o].size);
            pr.weight.push_back(w[o]);
        }
    return pr;
}

/// -s + (d - 3)/2.
inline double inflation_exponent(int d, double s) { return -s + 0.5 * (d - 3); }

struct InflationParams
{
    int d = 3;
    std::vector<double> s_values{-0.5, 0.0, 0.5};
    std::vector<std::int64_t> Ns{8, 16, 32};
    double tolerance = 0.25;
};

/// ||B(f_N, g_N)(t_N)||_{H^s} per (s, N); one fit per s.
inline Outcome inflation_sweep(const InflationParams& p, const Budget& budget = {})
{
    require(p.Ns.size() >= 3, "sweep needs at least 3 N values");
    for (std::size_t i = 0; i < p.Ns.size(); ++i)
        for (std::size_t j = 0; j < i; ++j)
            require(p.Ns[i] != p.Ns[j], "Ns distinct");
    require(!p.s_values.empty(), "no Sobolev indices given");
    std::vector<InflationProfile> profiles;
    for (auto N : p.Ns)
        profiles.push_back(inflation_profile(p.d, N, budget));

    Outcome out;
    out.table.header = {"d", "s", "N", "t", "Hs_norm"};
    out.summary["fits"] = nlohmann::json::array();
    for (double s : p.s_values)
    {
        std::vector<std::pair<double, double>> pts;
        for (const auto& pr : profiles)
        {
            const double v = pr.hs_norm(s);
            out.table.add({cell(p.d), cell(s), cell(pr.N), cell(pr.t), cell(v)});
            pts.emplace_back(static_cast<double>(pr.N), v);
        }
        const auto fit = fit_exponent(pts);
        const double expect = inflation_exponent(p.d, s);
        auto j = fit_json(fit);
        j["s"] = s;
        j["expected"] = expect;
        out.summary["fits"].push_back(j);
        out.check(std::abs(fit.slope - expect) <= p.tolerance,
                  "s=" + format_real(s) + ": slope " + format_real(fit.slope) + " not within "
                      + format_real(p.tolerance) + " of " + format_real(expect));
    }
    return out;
}

} // namespace zlab
