#include <cmath>
#include <set>

#include <gtest/gtest.h>

#include <zlab/fields.hpp>

using namespace zlab;

namespace
{
FrequencySet random_set(int d, std::int64_t kmax, double keep, std::uint64_t seed)
{
    auto rng = make_rng(seed, 1);
    std::vector<std::pair<std::int64_t, std::int64_t>> axes(static_cast<std::size_t>(d), {-kmax, kmax});
    const auto pool = enumerate(Box{axes}, d);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::normal_distribution<double> g(0.0, 1.0);
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < pool.size(); ++i)
        if (u(rng) < keep)
            idx.push_back(i);
    if (idx.empty())
        idx.push_back(0);
    auto s = pool.subset(idx);
    std::vector<cplx> c(s.size());
    for (auto& v : c)
    {
        const double re = g(rng);
        v = cplx(re, g(rng));
    }
    return s.with_coeffs(std::move(c));
}

// Spatial coordinate of flat index jx on axis a (axis 0 slowest).
std::vector<double> coords(const GridSpec& g, std::size_t jx)
{
    std::vector<double> x(static_cast<std::size_t>(g.dim));
    for (int a = g.dim - 1; a >= 0; --a)
    {
        const auto m = static_cast<std::size_t>(g.mx[static_cast<std::size_t>(a)]);
        x[static_cast<std::size_t>(a)] = kTwoPi * static_cast<double>(jx % m) / static_cast<double>(m);
        jx /= m;
    }
    return x;
}

// Brute-force additive quadruples: k1 + k2 = k3 + k4 and |k1|^2 + |k2|^2 = |k3|^2 + |k4|^2.
std::uint64_t brute_quadruples(const FrequencySet& s)
{
    const std::set<LatticePoint> members(s.points().begin(), s.points().end());
    std::uint64_t c = 0;
    for (const auto& a : s.points())
        for (const auto& b : s.points())
            for (const auto& e : s.points())
            {
                const LatticePoint f = a + b - e;
                if (a.norm2() + b.norm2() == e.norm2() + f.norm2() && members.count(f))
                    ++c;
            }
    return c;
}
} // namespace

TEST(Phase, NamesRoundTrip)
{
    for (auto k : {PhaseKind::schrodinger, PhaseKind::half_wave_plus, PhaseKind::half_wave_minus, PhaseKind::kg_plus,
                   PhaseKind::kg_minus, PhaseKind::cosine_wave})
        EXPECT_EQ(PhaseFunction::parse(PhaseFunction{k}.name()).kind, k);
    EXPECT_THROW(PhaseFunction::parse("airy"), Error);
}

TEST(Phase, Multipliers)
{
    const LatticePoint k{3, 4};
    EXPECT_NEAR(std::arg(PhaseFunction{PhaseKind::schrodinger}.multiplier(k, 0.01)), -0.25, 1e-15);
    EXPECT_NEAR(std::arg(PhaseFunction{PhaseKind::half_wave_plus}.multiplier(k, 0.1)), 0.5, 1e-15);
    EXPECT_NEAR(std::arg(PhaseFunction{PhaseKind::kg_minus}.multiplier(k, 0.1)), -0.1 * std::sqrt(26.0), 1e-15);
    EXPECT_NEAR(PhaseFunction{PhaseKind::cosine_wave}.multiplier(k, 0.3).real(), std::cos(1.5), 1e-15);
    EXPECT_EQ(PhaseFunction{PhaseKind::half_wave_plus}.integer_symbol(k), 5);
    EXPECT_FALSE(PhaseFunction{PhaseKind::kg_plus}.integer_symbol(k).has_value());
    EXPECT_EQ(PhaseFunction{PhaseKind::kg_plus}.integer_symbol(LatticePoint{0}), 1);
}

TEST(RootOffset, ExactZeroTest)
{
    const auto a = root_offset(-5, 25, +1);
    EXPECT_TRUE(a.resonant);
    EXPECT_EQ(a.omega, 0.0);
    const auto b = root_offset(-5, 25, -1);
    EXPECT_FALSE(b.resonant);
    EXPECT_EQ(b.omega, -10.0);
    const auto c = root_offset(1, 2, +1);
    EXPECT_FALSE(c.resonant);
    EXPECT_DOUBLE_EQ(c.omega, 1.0 + std::sqrt(2.0));
    // a^2 == c is impossible for non-square c: never resonant.
    for (std::int64_t n = 2; n < 200; ++n)
    {
        if (isqrt(n) * isqrt(n) != n)
        {
            EXPECT_FALSE(root_offset(-isqrt(n), n, +1).resonant);
        }
    }
}

TEST(Grid, RuleSelection)
{
    const auto s = enumerate(Ball{{}, 3.0}, 2);
    const auto g = make_grid(s, PhaseFunction{PhaseKind::schrodinger});
    EXPECT_EQ(g.rule, TimeRule::rectangle);
    EXPECT_GE(g.mt, 19);
    EXPECT_GE(g.mx[0], 7);
    const auto h = make_grid(s, PhaseFunction{PhaseKind::half_wave_plus});
    EXPECT_EQ(h.rule, TimeRule::gauss_legendre);
    EXPECT_EQ(h.mt % h.gl_order, 0);
    const auto one = FrequencySet::ones(2, {LatticePoint{3, 4}});
    EXPECT_EQ(make_grid(one, PhaseFunction{PhaseKind::half_wave_plus}).rule, TimeRule::rectangle);
}

TEST(EvaluateField, ZeroModeIsConstant)
{
    const auto s = FrequencySet::ones(2, {LatticePoint(2)});
    for (auto k : {PhaseKind::schrodinger, PhaseKind::half_wave_minus, PhaseKind::cosine_wave})
    {
        GridSpec g = make_grid(s, PhaseFunction{k});
        g.mx = {4, 6};
        g.mt = 5;
        const auto f = evaluate_field(s, PhaseFunction{k}, g);
        for (const auto& v : f.values)
            EXPECT_NEAR(std::abs(v - cplx(1.0)), 0.0, 1e-15);
    }
}

TEST(EvaluateField, PlaneWaveIsUnimodular)
{
    const auto s = FrequencySet::ones(3, {LatticePoint{2, -1, 3}});
    const auto f = evaluate_field(s, PhaseFunction{}, make_grid(s, PhaseFunction{}, 2.0));
    for (const auto& v : f.values)
        EXPECT_NEAR(std::abs(v), 1.0, 1e-13);
}

TEST(EvaluateField, TwoModesMatchFormula)
{
    const LatticePoint k{2, -1}, kp{-1, 3};
    const auto s = FrequencySet::ones(2, {k, kp});
    const auto g = make_grid(s, PhaseFunction{});
    const auto f = evaluate_field(s, PhaseFunction{}, g);
    const auto times = g.time_rule().nodes;
    for (std::size_t jt = 0; jt < times.size(); ++jt)
        for (std::size_t jx = 0; jx < g.spatial_size(); ++jx)
        {
            const auto x = coords(g, jx);
            const double theta = (k[0] - kp[0]) * x[0] + (k[1] - kp[1]) * x[1]
                                 - static_cast<double>(k.norm2() - kp.norm2()) * times[jt];
            ASSERT_NEAR(std::norm(f.at(jt, jx)), 2.0 + 2.0 * std::cos(theta), 1e-11);
        }
}

TEST(EvaluateField, Errors)
{
    const auto s = enumerate(Ball{{}, 4.0}, 2);
    GridSpec g = make_grid(s, PhaseFunction{});
    g.mx[1] = 5;
    try
    {
        evaluate_field(s, PhaseFunction{}, g);
        FAIL();
    }
    catch (const Error& e)
    {
        EXPECT_EQ(e.code(), Errc::aliasing);
        EXPECT_NE(std::string(e.what()).find("aliasing"), std::string::npos);
    }
    Budget tiny;
    tiny.max_grid_bytes = 1024;
    try
    {
        evaluate_field(s, PhaseFunction{}, make_grid(s, PhaseFunction{}), tiny);
        FAIL();
    }
    catch (const Error& e)
    {
        EXPECT_EQ(e.code(), Errc::grid_too_large);
        EXPECT_NE(std::string(e.what()).find("grid too large"), std::string::npos);
    }
}

TEST(LpNorm, ConstantField)
{
    const auto s = FrequencySet::ones(2, {LatticePoint(2)});
    const auto f = evaluate_field(s, PhaseFunction{}, make_grid(s, PhaseFunction{}));
    for (double p : {1.0, 2.0, 3.5, 6.0})
    {
        EXPECT_NEAR(lp_norm(f, {p, p}), std::pow(kTwoPi, 3.0 / p), 1e-12);
        EXPECT_NEAR(lp_norm(f, {2.0, p}), std::pow(kTwoPi, 2.0 / p + 0.5), 1e-12);
    }
    EXPECT_NEAR(lp_norm(f, {kInf, 4.0}), std::pow(kTwoPi, 0.5), 1e-12);
    EXPECT_NEAR(lp_norm(f, {kInf, kInf}), 1.0, 1e-15);
}

TEST(LpNorm, PlaneWavePure)
{
    const auto s = FrequencySet::ones(3, {LatticePoint{1, 5, -2}});
    const auto f = evaluate_field(s, PhaseFunction{}, make_grid(s, PhaseFunction{}));
    for (double p : {2.0, 3.0, 7.0})
        EXPECT_NEAR(lp_norm(f, {p, p}), std::pow(kTwoPi, 4.0 / p), 1e-11);
}

TEST(LpNorm, PlancherelOnGrid)
{
    NormOptions grid;
    grid.allow_exact = false;
    for (std::uint64_t seed = 0; seed < 100; ++seed)
    {
        const int d = 1 + static_cast<int>(seed % 3);
        const auto s = random_set(d, d == 3 ? 3 : 6, 0.4, seed);
        const double expect = std::pow(kTwoPi, 0.5 * (d + 1)) * s.l2();
        const auto r = lp_norm(s, PhaseFunction{}, {2.0, 2.0}, grid);
        EXPECT_EQ(r.path, "grid");
        EXPECT_NEAR(r.value / expect, 1.0, 1e-10) << "seed " << seed;
        const auto f = evaluate_field(s, PhaseFunction{}, make_grid(s, PhaseFunction{}));
        EXPECT_NEAR(lp_norm(f, {2.0, 2.0}) / expect, 1.0, 1e-10) << "seed " << seed;
        EXPECT_EQ(lp_norm(s, PhaseFunction{}, {2.0, 2.0}).path, "plancherel");
    }
}

TEST(LpNorm, StreamingEqualsMaterialised)
{
    const auto s = random_set(2, 5, 0.5, 11);
    const auto g = make_grid(s, PhaseFunction{PhaseKind::kg_plus}, 2.0);
    const auto f = evaluate_field(s, PhaseFunction{PhaseKind::kg_plus}, g);
    for (NormSpec spec : {NormSpec{3.0, 3.0}, NormSpec{2.0, 5.0}, NormSpec{kInf, 2.5}})
        EXPECT_EQ(lp_norm(f, spec), lp_norm_streaming(s, PhaseFunction{PhaseKind::kg_plus}, g, spec));
}

TEST(Counting, Singleton)
{
    for (int d = 1; d <= 3; ++d)
    {
        LatticePoint k(d);
        k.set(0, 3);
        const auto s = FrequencySet::ones(d, {k});
        EXPECT_EQ(quadruple_count(s), 1u);
        EXPECT_NEAR(l4_norm_by_counting(s), std::pow(kTwoPi, 0.25 * (d + 1)), 1e-14);
    }
}

TEST(Counting, TwoPointsInOneDimension)
{
    const auto s = FrequencySet::ones(1, {LatticePoint{0}, LatticePoint{1}});
    EXPECT_EQ(quadruple_count(s), 6u);
    EXPECT_NEAR(std::pow(l4_norm_by_counting(s), 4.0), 6.0 * kTwoPi * kTwoPi, 1e-10);
}

TEST(Counting, MatchesBruteForce)
{
    for (std::uint64_t seed = 0; seed < 12; ++seed)
    {
        const int d = 1 + static_cast<int>(seed % 3);
        const auto s = random_set(d, d == 1 ? 12 : 3, 0.5, 100 + seed);
        EXPECT_EQ(quadruple_count(s), brute_quadruples(s)) << "seed " << seed;
    }
}

TEST(Counting, RadialFastPathMatchesGeneric)
{
    for (int d = 1; d <= 3; ++d)
        for (const FrequencyRegion& r : {FrequencyRegion(Ball{{}, 7.0}), FrequencyRegion(Shell{6.0, 1.0}),
                                        FrequencyRegion(Annulus{8})})
            EXPECT_EQ(radial_quadruple_count(d, *radial_bounds(r)), quadruple_count(enumerate(r, d)));
}

TEST(Counting, AgreesWithGrid)
{
    NormOptions grid;
    grid.allow_exact = false;
    grid.recenter = false;
    for (std::uint64_t seed = 0; seed < 9; ++seed)
    {
        const int d = 1 + static_cast<int>(seed % 3);
        const auto s = random_set(d, d == 3 ? 4 : 12, d == 1 ? 0.7 : 0.15, 200 + seed);
        const double c = lp_norm(s, PhaseFunction{}, {4.0, 4.0}).value;
        const double g = lp_norm(s, PhaseFunction{}, {4.0, 4.0}, grid).value;
        EXPECT_NEAR(c / g, 1.0, 1e-8) << "seed " << seed;
    }
}

TEST(Counting, BudgetRefusal)
{
    Budget none;
    none.max_pairs = 0;
    try
    {
        l4_norm_by_counting(enumerate(Ball{{}, 3.0}, 2), PhaseFunction{}, none);
        FAIL();
    }
    catch (const Error& e)
    {
        EXPECT_TRUE(e.is_budget());
        EXPECT_NE(std::string(e.what()).find("counting budget exceeded"), std::string::npos);
    }
}

TEST(Invariance, GalileanTranslation)
{
    NormOptions grid;
    grid.allow_exact = false;
    grid.recenter = false;
    const auto s = random_set(2, 4, 0.5, 300);
    for (double p : {4.0, 6.0})
    {
        const double base = lp_norm(s, PhaseFunction{}, {p, p}, grid).value;
        for (const LatticePoint v : {LatticePoint{1, 0}, LatticePoint{-3, 2}, LatticePoint{5, 7}})
            EXPECT_NEAR(lp_norm(s.translated(v), PhaseFunction{}, {p, p}, grid).value / base, 1.0, 1e-8);
    }
    // Non-even p: the refined grid values agree to the refinement tolerance.
    const auto a = lp_norm(s, PhaseFunction{}, {3.0, 3.0}, grid);
    const auto b = lp_norm(s.translated(LatticePoint{2, -1}), PhaseFunction{}, {3.0, 3.0}, grid);
    EXPECT_NEAR(a.value / b.value, 1.0, 1e-6);
}

TEST(Invariance, UnimodularModulation)
{
    const auto s = random_set(2, 4, 0.5, 400);
    const auto m = s.scaled(std::polar(1.0, 0.7));
    for (double p : {2.0, 3.0, 4.0, 6.0})
    {
        const double a = lp_norm(s, PhaseFunction{}, {p, p}).value;
        const double b = lp_norm(m, PhaseFunction{}, {p, p}).value;
        EXPECT_NEAR(a / b, 1.0, 1e-12) << "p=" << p;
    }
}

TEST(Refinement, DoublingStaysWithinReportedTolerance)
{
    const auto s = random_set(2, 3, 0.6, 500);
    for (double p : {3.0, 5.0})
    {
        const auto r = lp_norm(s, PhaseFunction{}, {p, p});
        EXPECT_EQ(r.path, "grid");
        EXPECT_LT(r.tolerance, 1e-6);
        NormOptions finer;
        finer.oversample = 2.0 * r.grid.oversample;
        finer.max_refine = 0;
        const double v = lp_norm(s, PhaseFunction{}, {p, p}, finer).value;
        EXPECT_LE(std::abs(v - r.value) / v, std::max(r.tolerance, 1e-14));
    }
}

TEST(LpNorm, EvenPWithIrrationalFrequencies)
{
    const auto s = random_set(2, 4, 0.5, 600);
    for (auto k : {PhaseKind::half_wave_plus, PhaseKind::kg_minus})
    {
        NormOptions coarse;
        coarse.max_refine = 0;
        const double exact_route = lp_norm(s, PhaseFunction{k}, {4.0, 4.0}).value;
        GridSpec g = make_grid(s, PhaseFunction{k}, 4.0, 64.0);
        const double fine = lp_norm_streaming(s, PhaseFunction{k}, g, {4.0, 4.0});
        EXPECT_NEAR(exact_route / fine, 1.0, 1e-12);
    }
}
