#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "fields.hpp"
#include "fit.hpp"
#include "report.hpp"

// Integer solutions of
//   x + y = z + w,  |x|^2 + |y|^2 = |z|^2 + |w|^2,   x, y, z, w in S subset Z^3,
// counted as ordered quadruples.

namespace zlab
{
enum class DioConstraint
{
    box,   // every coordinate in [1, N]
    shell, // N - delta <= |v| <= N
};

struct DioQuery
{
    DioConstraint constraint = DioConstraint::shell;
    std::int64_t N = 1;
    std::int64_t delta = 10;

    static constexpr int dim = 3;

    void validate() const
    {
        require(N >= 1, "N must be >= 1");
        require(delta >= 0, "delta must be >= 0");
    }

    bool admits(const LatticePoint& v) const
    {
        if (constraint == DioConstraint::box)
        {
            for (int i = 0; i < dim; ++i)
                if (v[i] < 1 || v[i] > N)
                    return false;
            return true;
        }
        const std::int64_t n2 = v.norm2();
        const std::int64_t lo = std::max<std::int64_t>(0, N - delta);
        return n2 >= lo * lo && n2 <= N * N;
    }

    std::string label() const
    {
        return constraint == DioConstraint::box
                   ? "box N=" + std::to_string(N)
                   : "shell N=" + std::to_string(N) + " delta=" + std::to_string(delta);
    }
};

struct DioCount
{
    DioQuery query;
    std::uint64_t count = 0;
    std::uint64_t set_size = 0;
    std::string method;
    double seconds = 0.0;
};

/// The constrained set S, lexicographic.
inline FrequencySet dio_set(const DioQuery& q)
{
    q.validate();
    FrequencySet s;
    if (q.constraint == DioConstraint::box)
        s = enumerate(Box{{{1, q.N}, {1, q.N}, {1, q.N}}}, DioQuery::dim);
    else
    {
        const std::int64_t lo = std::max<std::int64_t>(0, q.N - q.delta);
        s = enumerate(Ball{{0.0, 0.0, 0.0}, static_cast<double>(q.N)}, DioQuery::dim);
        std::vector<std::size_t> keep;
        for (std::size_t i = 0; i < s.size(); ++i)
            if (s.point(i).norm2() >= lo * lo)
                keep.push_back(i);
        s = s.subset(keep);
    }
    s.label = q.label();
    return s;
}

/// Nested loop over (x, y, z) with w = x + y - z; |S|^3 work.
inline DioCount count_bruteforce(const DioQuery& q, const Budget& budget = {})
{
    Stopwatch sw;
    const FrequencySet s = dio_set(q);
    const std::uint64_t n = s.size();
    budget.check_pairs(n * n * n, "brute-force count (" + q.label() + ")");
    std::vector<std::uint64_t> per_x(n);
    parallel_for(n, [&](std::size_t i) {
        const auto& x = s.point(i);
        std::uint64_t c = 0;
        for (std::size_t j = 0; j < n; ++j)
        {
            const auto& y = s.point(j);
            const auto sum = x + y;
            const std::int64_t m = x.norm2() + y.norm2();
            for (std::size_t k = 0; k < n; ++k)
            {
                const auto& z = s.point(k);
                const auto w = sum - z;
                if (z.norm2() + w.norm2() == m && q.admits(w))
                    ++c;
            }
        }
        per_x[i] = c;
    });
    DioCount out{q, 0, n, "bruteforce", 0.0};
    for (auto c : per_x)
        out.count += c;
    out.seconds = sw.seconds();
    return out;
}

/// sum_{(s, m)} r(s, m)^2 over ordered pairs; |S|^2 work.
inline DioCount count_pairhash(const DioQuery& q, const Budget& budget = {})
{
    Stopwatch sw;
    const FrequencySet s = dio_set(q);
    DioCount out{q, quadruple_count(s, budget), s.size(), "pairhash", 0.0};
    out.seconds = sw.seconds();
    return out;
}

/// (2 pi)^{-4} ||u||_{L^4}^4 from the Schrodinger counting norm, rounded.
inline DioCount count_via_l4(const DioQuery& q, const Budget& budget = {})
{
    Stopwatch sw;
    const FrequencySet s = dio_set(q);
    const double norm = l4_norm_by_counting(s, PhaseFunction{}, budget);
    const double v = std::pow(norm, 4.0) / std::pow(kTwoPi, 4.0);
    DioCount out{q, static_cast<std::uint64_t>(std::llround(v)), s.size(), "l4norm", 0.0};
    out.seconds = sw.seconds();
    return out;
}

struct DioSweepResult
{
    std::vector<DioCount> counts;
    ExponentFit fit;
    Outcome outcome;
};

inline DioSweepResult dio_exponent_sweep(const std::vector<std::int64_t>& Ns, std::int64_t delta,
                                         const Budget& budget = {})
{
    require(Ns.size() >= 3, "sweep needs at least 3 N values");
    for (std::size_t i = 0; i < Ns.size(); ++i)
        for (std::size_t j = 0; j < i; ++j)
            require(Ns[i] != Ns[j], "Ns distinct");
    // Pre-flight: refuse before doing any work.
    for (auto N : Ns)
    {
        const DioQuery q{DioConstraint::shell, N, delta};
        q.validate();
        const std::uint64_t n = radial_point_count(
            3, RadialBounds{std::max<std::int64_t>(0, N - delta) * std::max<std::int64_t>(0, N - delta), N * N});
        if (n * n > budget.max_pairs)
            fail(Errc::budget_exceeded, "counting budget exceeded at N=" + std::to_string(N) + ": "
                                            + std::to_string(n * n) + " pairs, cap "
                                            + std::to_string(budget.max_pairs));
    }
    DioSweepResult res;
    auto& out = res.outcome;
    out.table.header = {"N", "delta", "count", "method", "seconds"};
    out.table.volatile_columns = {"seconds"};
    std::vector<std::pair<double, double>> pts;
    for (auto N : Ns)
    {
        const DioCount c = count_pairhash(DioQuery{DioConstraint::shell, N, delta}, budget);
        res.counts.push_back(c);
        out.table.add({cell(N), cell(delta), cell(c.count), c.method, cell(c.seconds)});
        out.check(c.count >= c.set_size * c.set_size,
                  "count below the trivial floor |S|^2 at N=" + std::to_string(N));
        pts.emplace_back(static_cast<double>(N), static_cast<double>(c.count));
    }
    res.fit = fit_exponent(pts);
    out.summary = fit_json(res.fit);
    out.summary["delta"] = delta;
    out.check(res.fit.slope >= 3.0 && res.fit.slope <= 5.0,
              "slope " + format_real(res.fit.slope) + " outside [3, 5]");
    return res;
}

} // namespace zlab
