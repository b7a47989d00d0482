#pragma once

#include <cmath>
#include <algorithm>
#include <functional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "diophantine.hpp"
#include "experiments.hpp"
#include "picard.hpp"
#include "quadrature.hpp"
#include "trilinear.hpp"
#include "zakharov.hpp"

// The acceptance suite, shared by `zlab selftest` and the ctest gate.

namespace zlab
{
struct CriterionResult
{
    int id = 0;
    std::string name;
    bool pass = false;
    std::string detail;    // measured values against tolerances
    double seconds = 0.0;
    double limit = 0.0;    // runtime cap in seconds, 0 = none
    std::string stable;    // reproducible result rows, compared across worker counts
    std::string error;     // set when the criterion threw
    bool budget_refusal = false;
};

inline CriterionResult started(int id, std::string name)
{
    CriterionResult r;
    r.id = id;
    r.name = std::move(name);
    return r;
}

namespace detail
{
inline std::string sci(double v)
{
    std::ostringstream os;
    os.precision(3);
    os << std::scientific << v;
    return os.str();
}

inline std::string fix(double v)
{
    std::ostringstream os;
    os.precision(4);
    os << std::fixed << v;
    return os.str();
}

/// Random subset of a region with complex Gaussian coefficients; never empty.
inline FrequencySet random_support(const FrequencySet& pool, double keep, std::mt19937_64& rng)
{
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < pool.size(); ++i)
        if (u(rng) < keep)
            idx.push_back(i);
    if (idx.empty())
        idx.push_back(static_cast<std::size_t>(rng() % pool.size()));
    return random_coefficients(pool.subset(idx), rng);
}
} // namespace detail

// 1. ||u||_{L^2(T^{d+1})} = (2 pi)^{(d+1)/2} ||a||_2 on the sampled grid.
inline CriterionResult criterion_1(const Budget& budget = {})
{
    CriterionResult r = started(1, "plancherel");
    r.limit = 30.0;
    const PhaseFunction phases[] = {PhaseFunction{PhaseKind::schrodinger}, PhaseFunction{PhaseKind::schrodinger},
                                    PhaseFunction{PhaseKind::half_wave_plus}, PhaseFunction{PhaseKind::kg_plus}};
    NormOptions opt;
    opt.allow_exact = false;
    opt.budget = budget;
    double worst = 0.0;
    Table t;
    t.header = {"trial", "d", "size", "phase", "grid_norm", "formula"};
    for (int i = 0; i < 100; ++i)
    {
        auto rng = make_rng(101, static_cast<std::uint64_t>(i));
        const int d = 1 + i % 3;
        std::uniform_int_distribution<std::int64_t> km(1, 16);
        std::vector<std::pair<std::int64_t, std::int64_t>> axes;
        std::uint64_t cells = 1;
        for (int a = 0; a < d; ++a)
        {
            const std::int64_t k = km(rng);
            axes.emplace_back(-k, k);
            cells *= static_cast<std::uint64_t>(2 * k + 1);
        }
        const FrequencySet pool = enumerate(Box{axes}, d);
        const FrequencySet set = detail::random_support(pool, std::min(1.0, 48.0 / static_cast<double>(cells)), rng);
        const PhaseFunction& ph = phases[i % 4];
        const double grid = lp_norm(set, ph, {2.0, 2.0}, opt).value;
        const double formula = std::pow(kTwoPi, 0.5 * (d + 1)) * set.l2();
        worst = std::max(worst, std::abs(grid - formula) / formula);
        t.add({cell(i), cell(d), cell(set.size()), std::string(ph.name()), cell(grid), cell(formula)});
    }
    r.pass = worst <= 1e-10;
    r.detail = "worst relative error " + detail::sci(worst) + " (tol 1e-10) over 100 sets";
    r.stable = t.stable_csv();
    return r;
}

// 2. Trilinear closed form against grid quadrature.
template <class Kernel = TimeKernel>
CriterionResult criterion_2(const Budget& budget = {}, Kernel kernel = {})
{
    CriterionResult r = started(2, "trilinear oracle");
    r.limit = 120.0;
    Table t;
    t.header = {"case", "d", "closed_re", "closed_im", "grid_re", "grid_im"};
    double worst = 0.0;
    bool ok = true;
    for (int i = 0; i < 50; ++i)
    {
        auto rng = make_rng(202, static_cast<std::uint64_t>(i));
        const int d = 1 + i % 3;
        const std::int64_t kmax = 2 + static_cast<std::int64_t>(rng() % 5);
        const FrequencySet pool = enumerate(Ball{std::vector<double>(static_cast<std::size_t>(d), 0.0),
                                                 static_cast<double>(kmax)},
                                            d);
        TrilinearInput in;
        in.phi1 = detail::random_support(pool, 0.6, rng);
        in.phi2 = detail::random_support(pool, 0.6, rng);
        in.phi3 = detail::random_support(pool, 0.6, rng);
        in.wave_sign = i % 2 ? -1 : 1;
        const cplx closed = trilinear_closed_form(in, kernel, budget);
        const cplx grid = trilinear_grid_oracle(in, trilinear_grid(in), budget);
        const double diff = std::abs(closed - grid);
        const double rel = diff / std::max(std::abs(closed), 1e-300);
        if (!(diff <= 1e-8 || rel <= 1e-6))
            ok = false;
        worst = std::max(worst, std::abs(closed) > 1e-8 ? rel : 0.0);
        t.add({"random " + cell(i), cell(d), cell(closed.real()), cell(closed.imag()), cell(grid.real()),
               cell(grid.imag())});
    }
    const int d = 3;
    const double expect = std::pow(kTwoPi, 1.0 - 0.5 * d);
    double lo = kInf, hi = -kInf, worst_pw = 0.0;
    for (std::int64_t N : {4, 8, 16})
    {
        const Triple tr = trilinear_example(d, N);
        // |k2|^2 - |k1|^2 = |k3| = 2N + 1: resonant for e^{-it|grad|}.
        TrilinearInput in{tr.first, tr.second, tr.third, -1};
        const cplx closed = trilinear_closed_form(in, kernel, budget);
        const cplx grid = trilinear_grid_oracle(in, trilinear_grid(in), budget);
        worst_pw = std::max(worst_pw, std::abs(closed - grid) / std::max(std::abs(closed), 1e-300));
        const double ratio = std::abs(closed) / (data_norm(in.phi1) * data_norm(in.phi2) * data_norm(in.phi3));
        lo = std::min(lo, ratio);
        hi = std::max(hi, ratio);
        t.add({"plane wave N=" + cell(N), cell(d), cell(closed.real()), cell(closed.imag()), cell(grid.real()),
               cell(grid.imag())});
    }
    const bool pw_ok = worst_pw <= 1e-8 && hi - lo < 1e-9 && std::abs(hi - expect) < 1e-9 * expect;
    r.pass = ok && pw_ok;
    r.detail = "random worst rel " + detail::sci(worst) + " (tol 1e-6); plane wave rel " + detail::sci(worst_pw)
               + " (tol 1e-8), ratio " + format_real(hi) + " spread " + detail::sci(hi - lo) + " (tol 1e-9)";
    r.stable = t.stable_csv();
    return r;
}

// 3. Three counting methods agree; shell sweep slope.
inline CriterionResult criterion_3(const Budget& budget = {})
{
    CriterionResult r = started(3, "diophantine oracle");
    r.limit = 600.0;
    const DioQuery queries[] = {
        {DioConstraint::shell, 1, 1},  {DioConstraint::shell, 2, 1},  {DioConstraint::shell, 3, 1},
        {DioConstraint::shell, 4, 1},  {DioConstraint::shell, 3, 10}, {DioConstraint::shell, 5, 1},
        {DioConstraint::shell, 2, 10}, {DioConstraint::box, 3, 0},    {DioConstraint::box, 5, 0},
    };
    Table t;
    t.header = {"query", "size", "bruteforce", "pairhash", "l4norm"};
    bool agree = true;
    std::size_t checked = 0;
    for (const auto& q : queries)
    {
        if (dio_set(q).size() > 200)
            continue;
        const auto a = count_bruteforce(q, budget);
        const auto b = count_pairhash(q, budget);
        const auto c = count_via_l4(q, budget);
        agree = agree && a.count == b.count && b.count == c.count;
        t.add({q.label(), cell(a.set_size), cell(a.count), cell(b.count), cell(c.count)});
        ++checked;
    }
    const auto sweep = dio_exponent_sweep({8, 12, 16, 24}, 2, budget);
    r.pass = agree && sweep.outcome.ok();
    r.detail = std::to_string(checked) + " queries " + (agree ? "agree" : "DISAGREE") + "; sweep slope "
               + detail::fix(sweep.fit.slope) + " (range [3, 5])"
               + (sweep.outcome.ok() ? "" : "; " + sweep.outcome.violations.front());
    r.stable = t.stable_csv() + sweep.outcome.table.stable_csv();
    return r;
}

// 4. Ball slope in [0.10, 0.40], shell slope in [-0.10, 0.30] and below it.
inline CriterionResult criterion_4(const Budget& budget = {})
{
    CriterionResult r = started(4, "ball vs shell");
    r.limit = 600.0;
    const auto c = ball_vs_shell_contrast({8, 12, 16, 24, 32, 48}, budget);
    r.pass = c.outcome.ok();
    r.detail = "ball slope " + detail::fix(c.ball.slope) + " (range [0.10, 0.40]), shell slope "
               + detail::fix(c.shell.slope) + " (range [-0.10, 0.30], below ball)";
    r.stable = c.outcome.table.stable_csv();
    return r;
}

// 5. d = 2, p = 4 ball data: slope <= 0.15.
inline CriterionResult criterion_5(const Budget& budget = {})
{
    CriterionResult r = started(5, "d=2 endpoint strichartz");
    r.limit = 300.0;
    StrichartzParams p;
    p.d = 2;
    p.Ns = {8, 16, 32, 64};
    p.region = RegionKind::ball;
    p.spec = {4.0, 4.0};
    p.max_slope = 0.15;
    NormOptions o;
    o.budget = budget;
    const Outcome out = strichartz_sweep(p, o);
    r.pass = out.ok();
    r.detail = "slope " + detail::fix(out.summary.value("slope", kInf)) + " (max 0.15)";
    r.stable = out.table.stable_csv();
    return r;
}

// 6. Wave (10, 5/2) in d = 3: slope <= 1/5 + 0.1.
inline CriterionResult criterion_6(const Budget& budget = {})
{
    CriterionResult r = started(6, "wave mixed norm");
    r.limit = 300.0;
    const Outcome out = wave_mixed_norm_check(WaveParams{}, budget);
    r.pass = out.ok();
    r.detail = "slope " + detail::fix(out.summary.value("slope", kInf)) + " (max 0.3)";
    r.stable = out.table.stable_csv();
    return r;
}

// 7. p = 2 decoupling ratio is 1; a single block gives exactly 1.
inline CriterionResult criterion_7(const Budget& budget = {})
{
    CriterionResult r = started(7, "decoupling p=2");
    r.limit = 60.0;
    NormOptions exact;
    exact.budget = budget;
    NormOptions grid = exact;
    grid.allow_exact = false;
    double worst = 0.0;
    bool single_exact = true;
    Table t;
    t.header = {"trial", "d", "size", "block_side", "ratio_exact", "ratio_grid", "single_block"};
    for (int i = 0; i < 20; ++i)
    {
        auto rng = make_rng(707, static_cast<std::uint64_t>(i));
        const int d = 1 + i % 3;
        const std::int64_t R = 3 + static_cast<std::int64_t>(rng() % 6);
        const FrequencySet pool = enumerate(Ball{std::vector<double>(static_cast<std::size_t>(d), 0.0),
                                                 static_cast<double>(R)},
                                            d);
        const FrequencySet set = detail::random_support(pool, 0.5, rng);
        const std::int64_t side = 1 + static_cast<std::int64_t>(rng() % 4);
        const auto part = partition_blocks(set, side);
        const double re = decoupling_ratio(set, part, 2.0, {}, exact);
        const double rg = decoupling_ratio(set, part, 2.0, {}, grid);
        LatticePoint shift(d);
        for (int a = 0; a < d; ++a)
            shift.set(a, R);
        const FrequencySet corner = set.translated(shift);
        const double one = decoupling_ratio(corner, partition_blocks(corner, 2 * R + 1), 2.0, {}, exact);
        worst = std::max({worst, std::abs(re - 1.0), std::abs(rg - 1.0)});
        single_exact = single_exact && one == 1.0;
        t.add({cell(i), cell(d), cell(set.size()), cell(side), cell(re), cell(rg), cell(one)});
    }
    r.pass = worst <= 1e-10 && single_exact;
    r.detail = "worst |ratio - 1| " + detail::sci(worst) + " (tol 1e-10); single block "
               + (single_exact ? "exactly 1" : "NOT exactly 1");
    r.stable = t.stable_csv();
    return r;
}

// 8. Norm inflation slopes -s + (d - 3)/2 within 0.25.
inline CriterionResult criterion_8(const Budget& budget = {})
{
    CriterionResult r = started(8, "picard inflation");
    r.limit = 900.0;
    const Outcome out = inflation_sweep(InflationParams{}, budget);
    r.pass = out.ok();
    std::string fits;
    for (const auto& f : out.summary["fits"])
        fits += (fits.empty() ? "" : ", ") + std::string("s=") + format_real(f["s"].get<double>()) + ": "
                + detail::fix(f["slope"].get<double>()) + " vs " + format_real(f["expected"].get<double>());
    r.detail = "slopes " + fits + " (tol 0.25)";
    r.stable = out.table.stable_csv();
    return r;
}

// 9. Singleton Picard coefficients against 10^4-node Gauss-Legendre of the
// Duhamel integrand.
inline CriterionResult criterion_9(const Budget& budget = {})
{
    CriterionResult r = started(9, "picard coefficient oracle");
    r.limit = 60.0;
    double worst = 0.0;
    Table t;
    t.header = {"trial", "closed_re", "closed_im", "quad_re", "quad_im"};
    for (int i = 0; i < 100; ++i)
    {
        auto rng = make_rng(909, static_cast<std::uint64_t>(i));
        std::uniform_int_distribution<std::int64_t> kd(-10, 10);
        std::uniform_real_distribution<double> td(0.01, 1.0);
        const int d = 3;
        LatticePoint kp(d), kq(d);
        for (int a = 0; a < d; ++a)
        {
            kp.set(a, kd(rng));
            kq.set(a, kd(rng));
        }
        const double t_end = td(rng);
        const cplx fa(std::normal_distribution<double>()(rng), 0.5);
        const cplx ga(1.0, -0.25);
        const FrequencySet f(d, {kp}, {fa}), g(d, {kq}, {ga});
        const FrequencySet b = picard_coefficients(f, g, t_end, budget);
        const cplx closed = b.coeff(0);

        const LatticePoint k = kp + kq;
        const double k2 = static_cast<double>(k.norm2()), p2 = static_cast<double>(kp.norm2());
        const double q1 = kq.norm();
        const auto rule = composite_gauss_legendre(0.0, t_end, 500, 20);
        cplx quad = 0.0;
        for (std::size_t j = 0; j < rule.nodes.size(); ++j)
        {
            const double tp = rule.nodes[j];
            quad += rule.weights[j] * std::polar(1.0, -(t_end - tp) * k2 - tp * p2) * std::cos(tp * q1);
        }
        quad *= fa * ga;
        const double rel = std::abs(closed - quad) / std::abs(quad);
        worst = std::max(worst, rel);
        t.add({cell(i), cell(closed.real()), cell(closed.imag()), cell(quad.real()), cell(quad.imag())});
    }
    r.pass = worst <= 1e-8;
    r.detail = "worst relative error " + detail::sci(worst) + " (tol 1e-8) over 100 instances";
    r.stable = t.stable_csv();
    return r;
}

// 10. Zakharov drifts at dt and dt/2.
inline CriterionResult criterion_10(const Budget& budget = {})
{
    CriterionResult r = started(10, "zakharov conservation");
    r.limit = 300.0;
    ZakharovRunConfig c;
    c.d = 2;
    c.grid = 64;
    c.dt = 1e-3;
    c.steps = 200;
    c.data_kind = "random";
    c.seed = 7;
    const auto coarse = zakharov_run(c, budget);
    c.dt = 5e-4;
    c.steps = 400;
    c.report_every = 40;
    const auto fine = zakharov_run(c, budget);
    const double mr = coarse.max_mass_drift / fine.max_mass_drift;
    const double er = coarse.max_energy_drift / fine.max_energy_drift;
    r.pass = coarse.max_mass_drift <= 1e-8 && coarse.max_energy_drift <= 1e-4 && mr >= 3.0 && er >= 3.0;
    r.detail = "mass drift " + detail::sci(coarse.max_mass_drift) + " (tol 1e-8), energy drift "
               + detail::sci(coarse.max_energy_drift) + " (tol 1e-4); halving dt reduces them " + detail::fix(mr)
               + "x and " + detail::fix(er) + "x (min 3)";
    r.stable = coarse.outcome.table.stable_csv() + fine.outcome.table.stable_csv();
    return r;
}

using CriterionFn = std::function<CriterionResult(const Budget&)>;

inline const std::vector<CriterionFn>& criteria()
{
    static const std::vector<CriterionFn> c{
        criterion_1, [](const Budget& b) { return criterion_2(b); },
        criterion_3, criterion_4, criterion_5, criterion_6, criterion_7, criterion_8, criterion_9, criterion_10,
    };
    return c;
}

/// Runs one criterion, timing it and turning exceptions into failures.
inline CriterionResult evaluate(const CriterionFn& fn, int id, const Budget& budget)
{
    Stopwatch sw;
    CriterionResult r;
    try
    {
        r = fn(budget);
    }
    catch (const Error& e)
    {
        r.pass = false;
        r.error = e.what();
        r.budget_refusal = e.is_budget();
    }
    catch (const std::exception& e)
    {
        r.pass = false;
        r.error = e.what();
    }
    r.id = id;
    r.seconds = sw.seconds();
    if (r.limit > 0.0 && r.seconds > r.limit)
    {
        r.pass = false;
        r.detail += "; runtime " + detail::fix(r.seconds) + " s over the " + detail::fix(r.limit) + " s cap";
    }
    return r;
}

/// 11. Re-runs criteria 2..8 at another worker count and compares rows.
inline CriterionResult criterion_11(const std::vector<CriterionResult>& first, const Budget& budget = {})
{
    CriterionResult r = started(11, "determinism");
    const unsigned before = worker_count();
    const unsigned other = before == 1 ? 3 : 1;
    std::vector<int> mismatched;
    int compared = 0;
    try
    {
        for (int id = 2; id <= 8; ++id)
        {
            const auto& fn = criteria()[static_cast<std::size_t>(id - 1)];
            std::string base;
            bool found = false;
            for (const auto& f : first)
                if (f.id == id && f.error.empty())
                {
                    base = f.stable;
                    found = true;
                }
            if (!found)
                base = fn(budget).stable;
            set_worker_count(other);
            const CriterionResult again = fn(budget);
            set_worker_count(before);
            ++compared;
            if (again.stable != base)
                mismatched.push_back(id);
        }
    }
    catch (const Error& e)
    {
        r.error = e.what();
        r.budget_refusal = e.is_budget();
    }
    catch (const std::exception& e)
    {
        r.error = e.what();
    }
    set_worker_count(before);
    r.pass = r.error.empty() && mismatched.empty();
    r.detail = std::to_string(compared) + " criteria re-run with " + std::to_string(other) + " workers (was "
               + std::to_string(before) + ")";
    if (!mismatched.empty())
    {
        r.detail += "; rows differ in";
        for (int id : mismatched)
            r.detail += " " + std::to_string(id);
    }
    return r;
}

inline std::string format_result(const CriterionResult& r)
{
    std::string s = std::string(r.pass ? "PASS" : "FAIL") + "  " + std::to_string(r.id) + " " + r.name + ": ";
    s += r.error.empty() ? r.detail : "error: " + r.error;
    s += " [" + detail::fix(r.seconds) + " s]";
    return s;
}

/// Runs the selected criteria (all when empty), printing one line each.
inline std::vector<CriterionResult> run_acceptance(const std::vector<int>& only, const Budget& budget,
                                                   std::ostream& os,
                                                   const std::vector<CriterionFn>& fns = criteria())
{
    auto selected = [&](int id) { return only.empty() || std::find(only.begin(), only.end(), id) != only.end(); };
    std::vector<CriterionResult> out;
    for (int id = 1; id <= 10; ++id)
        if (selected(id))
        {
            out.push_back(evaluate(fns[static_cast<std::size_t>(id - 1)], id, budget));
            os << format_result(out.back()) << std::endl;
        }
    if (selected(11))
    {
        out.push_back(evaluate([&](const Budget& b) { return criterion_11(out, b); }, 11, budget));
        os << format_result(out.back()) << std::endl;
    }
    return out;
}

} // namespace zlab
