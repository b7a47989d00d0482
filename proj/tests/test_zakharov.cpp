#include <cmath>

#include <gtest/gtest.h>

#include <zlab/zakharov.hpp>

using namespace zlab;

namespace
{
FrequencySet empty(int d) { return FrequencySet(d, {}, {}); }

// a cos(x_1)
FrequencySet cosine(int d, double a)
{
    LatticePoint e(d);
    e.set(0, 1);
    return FrequencySet(d, {-e, e}, {cplx(0.5 * a), cplx(0.5 * a)});
}

double max_diff(const std::vector<cplx>& a, const std::vector<cplx>& b)
{
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

SolverState random_state(int d, int m, std::uint64_t seed)
{
    const auto z = random_zakharov_data(d, seed);
    return init_state(z.u0, z.n0, z.n1, std::vector<int>(static_cast<std::size_t>(d), m));
}
} // namespace

TEST(SpectralGrid, Geometry)
{
    const SpectralGrid g({6, 8});
    EXPECT_EQ(g.size(), 48u);
    EXPECT_EQ(g.wavenumber(0, 3), 3);
    EXPECT_EQ(g.wavenumber(0, 4), -2);
    EXPECT_EQ(g.wavenumber(1, 7), -1);
    const auto i = g.index(LatticePoint{-2, 3});
    ASSERT_NE(i, SpectralGrid::npos);
    EXPECT_EQ(g.k2(i), 13);
    EXPECT_EQ(g.flip(i), g.index(LatticePoint{2, -3}));
    EXPECT_EQ(g.flip(g.flip(i)), i);
    EXPECT_EQ(g.index(LatticePoint{4, 0}), SpectralGrid::npos);
    EXPECT_TRUE(g.kept(g.index(LatticePoint{1, 2})));
    EXPECT_FALSE(g.kept(g.index(LatticePoint{2, 0})));
    EXPECT_THROW(SpectralGrid({2, 8}), Error);
}

TEST(Init, DensityAndVelocityRecovery)
{
    const auto z = random_zakharov_data(2, 3);
    const std::vector<int> mx{32, 32};
    const SpectralGrid g(mx);
    const SolverState s = init_state(z.u0, z.n0, z.n1, mx);
    const auto nh = density_hat(s, g), vh = velocity_hat(s, g);
    for (std::size_t i = 0; i < z.n0.size(); ++i)
    {
        const auto idx = g.index(z.n0.point(i));
        EXPECT_LT(std::abs(nh[idx] - z.n0.coeff(i)), 1e-15);
        EXPECT_LT(std::abs(vh[idx] - z.n1.coeff(i)), 1e-14);
    }
    const SolverState w = init_state(z.u0, z.n0, empty(2), mx);
    for (std::size_t i = 0; i < z.n0.size(); ++i)
        EXPECT_EQ(w.what[g.index(z.n0.point(i))], z.n0.coeff(i));
    EXPECT_TRUE(s.zero_mean_velocity);
}

TEST(Init, RejectsComplexDensity)
{
    const auto bad = FrequencySet(2, {LatticePoint{1, 0}}, {cplx(1.0)});
    try
    {
        init_state(empty(2), bad, empty(2), {16, 16});
        FAIL();
    }
    catch (const Error& e)
    {
        EXPECT_NE(std::string(e.what()).find("n must be real"), std::string::npos);
    }
    EXPECT_THROW(init_state(FrequencySet::ones(2, {LatticePoint{9, 0}}), empty(2), empty(2), {16, 16}), Error);
}

TEST(Solver, ZeroStateStaysZero)
{
    ZakharovSolver solver({16, 16});
    SolverState s = init_state(empty(2), empty(2), empty(2), {16, 16});
    for (int k = 0; k < 10; ++k)
        solver.step(s, 0.01);
    for (std::size_t i = 0; i < s.size(); ++i)
    {
        EXPECT_EQ(s.uhat[i], cplx(0.0));
        EXPECT_EQ(s.what[i], cplx(0.0));
    }
    const auto r = solver.conserved(s);
    EXPECT_EQ(r.mass, 0.0);
    EXPECT_EQ(r.energy, 0.0);
}

TEST(Solver, LinearFlowWithoutCoupling)
{
    SolverOptions opt;
    opt.coupling = false;
    opt.correction = false;
    ZakharovSolver solver({16, 16}, opt);
    const SpectralGrid g({16, 16});
    SolverState s = random_state(2, 16, 5);
    const SolverState s0 = s;
    const double dt = 0.01;
    for (int k = 0; k < 100; ++k)
        solver.step(s, dt);
    std::vector<cplx> u(s.size()), w(s.size());
    for (std::size_t i = 0; i < s.size(); ++i)
    {
        u[i] = s0.uhat[i] * std::polar(1.0, -s.t * static_cast<double>(g.k2(i)));
        w[i] = s0.what[i] * std::polar(1.0, -s.t * g.bracket(i));
    }
    EXPECT_LT(max_diff(s.uhat, u), 1e-12);
    EXPECT_LT(max_diff(s.what, w), 1e-12);
}

TEST(Solver, FreeWaveModeWithoutSchrodingerField)
{
    // u = 0: n_tt + |k|^2 n = 0, so n^(e_1)(t) = (a/2) cos t.
    ZakharovSolver solver({16, 16});
    const SpectralGrid g({16, 16});
    const double a = 0.3;
    SolverState s = init_state(empty(2), cosine(2, a), empty(2), {16, 16});
    for (int k = 0; k < 1000; ++k)
        solver.step(s, 1e-3);
    const auto nh = density_hat(s, g);
    EXPECT_NEAR(std::abs(nh[g.index(LatticePoint{1, 0})] - 0.5 * a * std::cos(1.0)), 0.0, 1e-6);
    EXPECT_NEAR(std::abs(nh[g.index(LatticePoint{0, 0})]), 0.0, 1e-15);
}

TEST(Solver, ApproximateTimeReversal)
{
    ZakharovSolver solver({16, 16});
    SolverState s = random_state(2, 16, 9);
    const SolverState s0 = s;
    for (int k = 0; k < 50; ++k)
        solver.step(s, 1e-3);
    for (int k = 0; k < 50; ++k)
        solver.step(s, -1e-3);
    EXPECT_NEAR(s.t, 0.0, 1e-15);
    EXPECT_LT(max_diff(s.uhat, s0.uhat), 1e-7);
    EXPECT_LT(max_diff(s.what, s0.what), 1e-7);
}

TEST(Solver, DensityStaysReal)
{
    ZakharovSolver solver({16, 16});
    SolverState s = random_state(2, 16, 11);
    for (int k = 0; k < 100; ++k)
        solver.step(s, 1e-3);
    EXPECT_LT(solver.reality_defect(s), 1e-14);
}

TEST(Conserved, SingleMode)
{
    for (int d = 1; d <= 3; ++d)
    {
        const double eps = 0.1;
        const auto z = single_mode_data(d, eps);
        const std::vector<int> mx(static_cast<std::size_t>(d), 8);
        ZakharovSolver solver(mx);
        const SolverState s = init_state(z.u0, z.n0, z.n1, mx);
        const auto r = solver.conserved(s);
        const double vol = std::pow(kTwoPi, d);
        EXPECT_NEAR(r.mass, vol * eps * eps, 1e-15 * vol);
        // |k|^2 = 1, n = 0
        EXPECT_NEAR(r.energy, vol * eps * eps, 1e-15 * vol);
    }
}

TEST(Conserved, CouplingTerm)
{
    // u = 1, n = a cos x_1: int n |u|^2 = 0; n = a: int n = a (2 pi)^d.
    const std::vector<int> mx{8, 8};
    ZakharovSolver solver(mx);
    const auto one = FrequencySet::ones(2, {LatticePoint{0, 0}});
    const double vol = kTwoPi * kTwoPi;
    const auto r0 = solver.conserved(init_state(one, cosine(2, 0.4), empty(2), mx));
    EXPECT_NEAR(r0.energy, vol * 0.5 * 2.0 * 0.04, 1e-13);
    const auto r1 = solver.conserved(init_state(one, one.scaled(0.4), empty(2), mx));
    EXPECT_NEAR(r1.energy, vol * (0.5 * 0.16 + 0.4), 1e-13);
}

TEST(Conserved, DriftIsSmallAndSecondOrder)
{
    ZakharovRunConfig c;
    c.grid = 32;
    c.seed = 7;
    c.steps = 100;
    c.dt = 2e-3;
    const auto a = zakharov_run(c);
    c.steps = 200;
    c.dt = 1e-3;
    const auto b = zakharov_run(c);
    EXPECT_LT(b.max_mass_drift, 1e-8);
    EXPECT_LT(b.max_energy_drift, 1e-4);
    EXPECT_GT(a.max_mass_drift / b.max_mass_drift, 3.0);
    EXPECT_GT(a.max_energy_drift / b.max_energy_drift, 3.0);
    EXPECT_EQ(b.outcome.table.rows.size(), 11u);
}

TEST(Errors, StepBoundAndBlowup)
{
    ZakharovSolver solver({16, 16});
    SolverState s = random_state(2, 16, 1);
    EXPECT_THROW(solver.step(s, 1.0), Error);
    s.uhat[1] = cplx(std::nan(""), 0.0);
    try
    {
        solver.step(s, 1e-3);
        FAIL();
    }
    catch (const Error& e)
    {
        EXPECT_EQ(e.code(), Errc::blowup);
    }
    SolverState other = random_state(2, 12, 1);
    EXPECT_THROW(solver.step(other, 1e-3), Error);
}

TEST(Errors, EnergyNeedsZeroMeanVelocity)
{
    const auto one = FrequencySet::ones(2, {LatticePoint{0, 0}});
    const SolverState s = init_state(one, empty(2), one.scaled(0.5), {8, 8});
    EXPECT_FALSE(s.zero_mean_velocity);
    ZakharovSolver solver({8, 8});
    EXPECT_NO_THROW(solver.conserved(s, false));
    EXPECT_THROW(solver.conserved(s), Error);
}

TEST(Run, Contract)
{
    ZakharovRunConfig c;
    c.d = 4;
    EXPECT_THROW(zakharov_run(c), Error);
    c.d = 2;
    c.data_kind = "gaussian";
    EXPECT_THROW(zakharov_run(c), Error);
    c.data_kind = "random";
    Budget small;
    small.max_grid_bytes = 1000;
    try
    {
        zakharov_run(c, small);
        FAIL();
    }
    catch (const Error& e)
    {
        EXPECT_TRUE(e.is_budget());
    }
}
