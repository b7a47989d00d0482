#include <cmath>

#include <gtest/gtest.h>

#include <zlab/trilinear.hpp>

using namespace zlab;

namespace
{
TrilinearInput random_input(int d, double radius, std::uint64_t seed, int sign)
{
    auto rng = make_rng(seed, 3);
    const auto ball = enumerate(Ball{std::vector<double>(static_cast<std::size_t>(d), 0.0), radius}, d);
    return {random_coefficients(ball, rng), random_coefficients(ball, rng), random_coefficients(ball, rng), sign};
}

double rel(cplx a, cplx b) { return std::abs(a - b) / std::abs(b); }
} // namespace

TEST(Kernel, Values)
{
    const TimeKernel T;
    EXPECT_EQ(T(0.0), kTwoPi);
    EXPECT_NEAR(T(1.0), 0.0, 1e-15);
    EXPECT_NEAR(T(0.5), 4.0, 1e-15);
    for (double w : {0.1, 0.7, std::sqrt(2.0), 13.25})
        EXPECT_EQ(T(w), T(-w));
    // continuity at 0
    EXPECT_NEAR(T(1e-9), kTwoPi, 1e-12);
}

TEST(ClosedForm, ZeroThirdFactor)
{
    auto in = random_input(2, 3.0, 1, 1);
    in.phi3 = in.phi3.scaled(0.0);
    EXPECT_EQ(trilinear_closed_form(in), cplx(0.0));
    in.phi3 = FrequencySet(2, {}, {});
    EXPECT_EQ(trilinear_closed_form(in), cplx(0.0));
    EXPECT_EQ(trilinear_grid_oracle(in, trilinear_grid(in)), cplx(0.0));
}

TEST(ClosedForm, PlaneWaveTriple)
{
    for (int d = 1; d <= 3; ++d)
    {
        const double expect = std::pow(kTwoPi, 1.0 - 0.5 * d);
        for (std::int64_t N : {4, 8, 16, 32, 64})
        {
            const auto t = trilinear_example(d, N);
            const TrilinearInput in{t.first, t.second, t.third, -1};
            const cplx I = trilinear_closed_form(in);
            EXPECT_DOUBLE_EQ(std::abs(I), std::pow(kTwoPi, d + 1));
            EXPECT_DOUBLE_EQ(trilinear_ratio(in), expect);
        }
    }
}

TEST(GridOracle, PlaneWaveInTwoDimensions)
{
    const auto t = trilinear_example(2, 4);
    const TrilinearInput in{t.first, t.second, t.third, -1};
    const cplx g = trilinear_grid_oracle(in, trilinear_grid(in));
    EXPECT_NEAR(std::abs(g - std::pow(kTwoPi, 3.0)) / std::pow(kTwoPi, 3.0), 0.0, 1e-8);
}

TEST(ClosedForm, NonResonantSingleton)
{
    const TrilinearInput in{FrequencySet::ones(3, {LatticePoint{1, 0, 0}}),
                            FrequencySet::ones(3, {LatticePoint{0, 1, 0}}),
                            FrequencySet::ones(3, {LatticePoint{-1, 1, 0}}), 1};
    const double omega = std::sqrt(2.0);
    const double expect = std::pow(kTwoPi, 3.0) * std::abs(2.0 * std::sin(kPi * omega) / omega);
    const cplx I = trilinear_closed_form(in);
    EXPECT_NEAR(std::abs(I) / expect, 1.0, 1e-14);
    EXPECT_LT(rel(trilinear_grid_oracle(in, trilinear_grid(in)), I), 1e-10);
}

TEST(GridOracle, RandomBallsAgree)
{
    for (std::uint64_t seed = 0; seed < 6; ++seed)
    {
        const auto in = random_input(2, 3.0, seed, seed % 2 ? -1 : 1);
        const cplx c = trilinear_closed_form(in);
        const cplx g = trilinear_grid_oracle(in, trilinear_grid(in));
        EXPECT_LT(rel(g, c), 1e-6) << "seed " << seed;
    }
}

TEST(GridOracle, RejectsCoarseGrids)
{
    const auto in = random_input(2, 3.0, 9, 1);
    GridSpec g = trilinear_grid(in);
    g.mx[0] = 4;
    EXPECT_THROW(trilinear_grid_oracle(in, g), Error);
    g = trilinear_grid(in);
    g.mt = 2 * g.gl_order;
    try
    {
        trilinear_grid_oracle(in, g);
        FAIL();
    }
    catch (const Error& e)
    {
        EXPECT_EQ(e.code(), Errc::aliasing);
    }
}

TEST(ClosedForm, Multilinearity)
{
    const auto in = random_input(3, 2.0, 21, 1);
    const cplx base = trilinear_closed_form(in);
    const cplx c(0.3, -1.7);
    auto a = in;
    a.phi1 = in.phi1.scaled(c);
    EXPECT_LT(rel(trilinear_closed_form(a), c * base), 1e-14);
    auto b = in;
    b.phi2 = in.phi2.scaled(c);
    EXPECT_LT(rel(trilinear_closed_form(b), std::conj(c) * base), 1e-14);
    auto e = in;
    e.phi3 = in.phi3.scaled(c);
    EXPECT_LT(rel(trilinear_closed_form(e), c * base), 1e-14);
}

TEST(ClosedForm, WaveSignReflection)
{
    // Swapping phi1, phi2, reflecting and conjugating phi3 and flipping the
    // wave sign sends Omega to -Omega; T is even, so I becomes conj(I).
    const auto in = random_input(2, 3.0, 33, 1);
    std::vector<LatticePoint> pts;
    std::vector<cplx> co;
    for (std::size_t i = 0; i < in.phi3.size(); ++i)
    {
        pts.push_back(-in.phi3.point(i));
        co.push_back(std::conj(in.phi3.coeff(i)));
    }
    const TrilinearInput mirrored{in.phi2, in.phi1, FrequencySet(2, pts, co), -1};
    EXPECT_LT(rel(trilinear_closed_form(mirrored), std::conj(trilinear_closed_form(in))), 1e-13);
}

TEST(ClosedForm, Errors)
{
    auto in = random_input(2, 2.0, 5, 1);
    in.phi3 = FrequencySet::ones(3, {LatticePoint{0, 0, 0}});
    EXPECT_THROW(trilinear_closed_form(in), Error);
    auto b = random_input(2, 2.0, 5, 1);
    b.wave_sign = 0;
    EXPECT_THROW(trilinear_closed_form(b), Error);
    Budget none;
    none.max_pairs = 0;
    try
    {
        trilinear_closed_form(random_input(2, 2.0, 5, 1), TimeKernel{}, none);
        FAIL();
    }
    catch (const Error& e)
    {
        EXPECT_TRUE(e.is_budget());
    }
}

TEST(AlphaSweep, PaperExampleIsFlat)
{
    AlphaSweepParams p;
    p.d = 3;
    p.Ns = {4, 8, 16};
    p.seed = 7;
    const auto out = trilinear_alpha_sweep(p);
    EXPECT_TRUE(out.ok());
    EXPECT_LE(std::abs(out.summary["slope"].get<double>()), 1e-9);
    EXPECT_EQ(out.table.rows.size(), 3u);
}

TEST(AlphaSweep, RandomShellInThreeDimensions)
{
    AlphaSweepParams p;
    p.d = 3;
    p.Ns = {4, 8, 16};
    p.generator = TrilinearGenerator::random_shell;
    p.trials = 2;
    p.seed = 3;
    const auto out = trilinear_alpha_sweep(p);
    EXPECT_TRUE(out.ok()) << out.summary.dump();
    EXPECT_LE(out.summary["slope"].get<double>(), 0.3);
    EXPECT_EQ(out.table.rows.size(), 6u);
}

TEST(AlphaSweep, Contract)
{
    AlphaSweepParams p;
    p.Ns = {4, 8};
    EXPECT_THROW(trilinear_alpha_sweep(p), Error);
    EXPECT_EQ(parse_generator("random_annulus"), TrilinearGenerator::random_annulus);
    EXPECT_THROW(parse_generator("gaussian"), Error);
}

TEST(AlphaSweep, SingletonRatio)
{
    auto rng = make_rng(17, 0);
    const auto one = [&](LatticePoint k) { return random_coefficients(FrequencySet::ones(3, {k}), rng); };
    const TrilinearInput in{one({2, 0, 1}), one({2, 3, 1}), one({0, 3, 0}), 1};
    const double expect = std::abs(trilinear_closed_form(in))
                          / (std::pow(kTwoPi, 4.5) * std::abs(in.phi1.coeff(0)) * std::abs(in.phi2.coeff(0))
                             * std::abs(in.phi3.coeff(0)));
    EXPECT_NEAR(trilinear_ratio(in) / expect, 1.0, 1e-14);
    EXPECT_GT(expect, 0.0);
}
