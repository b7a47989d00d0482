#include <cmath>
#include <map>
#include <random>

#include <gtest/gtest.h>

#include <zlab/picard.hpp>

using namespace zlab;

namespace
{
FrequencySet small_set(int d, std::uint64_t seed)
{
    auto rng = make_rng(seed, 0);
    std::uniform_int_distribution<std::int64_t> kd(-4, 4);
    std::map<LatticePoint, cplx> m;
    std::normal_distribution<double> nd;
    while (m.size() < 4)
    {
        LatticePoint k(d);
        for (int a = 0; a < d; ++a)
            k.set(a, kd(rng));
        m.emplace(k, cplx(nd(rng), nd(rng)));
    }
    std::vector<LatticePoint> pts;
    std::vector<cplx> co;
    for (const auto& [k, c] : m)
    {
        pts.push_back(k);
        co.push_back(c);
    }
    return FrequencySet(d, pts, co);
}

// Composite Simpson in t' of the Duhamel integrand for output frequency k.
cplx simpson(const FrequencySet& f, const FrequencySet& g, const LatticePoint& k, double t, int n)
{
    const double h = t / n;
    cplx acc = 0.0;
    for (int j = 0; j <= n; ++j)
    {
        const double tp = j * h;
        const double w = (j == 0 || j == n) ? 1.0 : (j % 2 ? 4.0 : 2.0);
        cplx v = 0.0;
        for (std::size_t a = 0; a < f.size(); ++a)
            for (std::size_t b = 0; b < g.size(); ++b)
                if (f.point(a) + g.point(b) == k)
                    v += f.coeff(a) * g.coeff(b)
                         * std::polar(1.0, -(t - tp) * k.norm2() - tp * f.point(a).norm2())
                         * std::cos(tp * g.point(b).norm());
        acc += w * v;
    }
    return acc * h / 3.0;
}

double rel(cplx a, cplx b) { return std::abs(a - b) / std::abs(b); }
} // namespace

TEST(Picard, ZeroAndConstant)
{
    const auto f = small_set(2, 1);
    const auto b = picard_coefficients(f, f.scaled(0.0), 0.5);
    for (const auto& c : b.coeffs())
        EXPECT_EQ(c, cplx(0.0));
    const auto one = FrequencySet::ones(3, {LatticePoint(3)});
    for (double t : {0.1, 1.0, kTwoPi})
    {
        const auto c = picard_coefficients(one, one, t);
        ASSERT_EQ(c.size(), 1u);
        EXPECT_NEAR(std::abs(c.coeff(0) - t), 0.0, 1e-15);
    }
}

TEST(Picard, MatchesQuadrature)
{
    for (int d = 1; d <= 3; ++d)
        for (std::uint64_t seed = 0; seed < 3; ++seed)
        {
            const auto f = small_set(d, 10 + seed), g = small_set(d, 20 + seed);
            const double t = 0.3 + 0.2 * seed;
            const auto b = picard_coefficients(f, g, t);
            for (std::size_t i = 0; i < b.size(); ++i)
                EXPECT_LT(rel(b.coeff(i), simpson(f, g, b.point(i), t, 20000)), 1e-9)
                    << "d=" << d << " seed=" << seed << " k=" << i;
        }
}

TEST(Picard, Bilinear)
{
    const auto f = small_set(2, 3), g = small_set(2, 4);
    const cplx c(0.5, 2.0);
    const auto b = picard_coefficients(f, g, 1.0);
    const auto bf = picard_coefficients(f.scaled(c), g, 1.0);
    const auto bg = picard_coefficients(f, g.scaled(c), 1.0);
    for (std::size_t i = 0; i < b.size(); ++i)
    {
        EXPECT_LT(std::abs(bf.coeff(i) - c * b.coeff(i)), 1e-13 * std::abs(c) * (1.0 + std::abs(b.coeff(i))));
        EXPECT_LT(std::abs(bg.coeff(i) - c * b.coeff(i)), 1e-13 * std::abs(c) * (1.0 + std::abs(b.coeff(i))));
    }
}

TEST(Picard, SmallTimeLimit)
{
    // |B^(k) / t - sum_{k'+k''=k} f^(k') g^(k'')| <= C t: the error shrinks linearly.
    const auto f = small_set(3, 5), g = small_set(3, 6);
    auto worst = [&](double t) {
        const auto b = picard_coefficients(f, g, t);
        double w = 0.0;
        for (std::size_t i = 0; i < b.size(); ++i)
        {
            cplx conv = 0.0;
            for (std::size_t a = 0; a < f.size(); ++a)
                for (std::size_t c = 0; c < g.size(); ++c)
                    if (f.point(a) + g.point(c) == b.point(i))
                        conv += f.coeff(a) * g.coeff(c);
            w = std::max(w, std::abs(b.coeff(i) / t - conv));
        }
        return w;
    };
    const double e3 = worst(1e-3), e4 = worst(1e-4);
    EXPECT_LT(e3, 1.0);
    EXPECT_GT(e3 / e4, 8.0);
    EXPECT_LT(e3 / e4, 12.0);
}

TEST(Picard, Errors)
{
    const auto f = small_set(2, 1);
    EXPECT_THROW(picard_coefficients(f, small_set(3, 1), 1.0), Error);
    EXPECT_THROW(picard_coefficients(f, f, 0.0), Error);
    EXPECT_THROW(picard_coefficients(f, f, 7.0), Error);
    try
    {
        picard_coefficients(f, f, 1.0, Budget{3, 1 << 20, 0.0});
        FAIL();
    }
    catch (const Error& e)
    {
        EXPECT_TRUE(e.is_budget());
    }
}

TEST(Sobolev, Examples)
{
    const auto s = FrequencySet::ones(2, {LatticePoint{3, 4}}).scaled(2.0);
    EXPECT_NEAR(sobolev_norm(s, 0.0), kTwoPi * 2.0, 1e-13);
    EXPECT_NEAR(sobolev_norm(s, 1.0), kTwoPi * 2.0 * std::sqrt(26.0), 1e-13);
    EXPECT_NEAR(sobolev_norm(s, -0.5), kTwoPi * 2.0 * std::pow(26.0, -0.25), 1e-13);
}

TEST(Inflation, DataNormsAreOrderOne)
{
    for (int d = 2; d <= 3; ++d)
        for (double s : {-0.5, 0.0, 0.5})
            for (std::int64_t N : {8, 16, 32})
            {
                const auto in = make_inflation_data(d, s, N);
                const double nf = sobolev_norm(in.f, s) / std::pow(kTwoPi, 0.5 * d);
                EXPECT_GE(nf, 0.25) << d << " " << s << " " << N;
                EXPECT_LE(nf, 4.0) << d << " " << s << " " << N;
                EXPECT_DOUBLE_EQ(in.t, 1.0 / (100.0 * N * N));
            }
}

TEST(Inflation, SummandHasLargeRealPart)
{
    const std::int64_t N = 16;
    const auto ann = enumerate(Annulus{N}, 3);
    const double t = 1.0 / (100.0 * N * N);
    auto rng = make_rng(2, 0);
    std::uniform_int_distribution<std::size_t> pick(0, ann.size() - 1);
    std::uniform_real_distribution<double> tp(0.0, t);
    for (int i = 0; i < 2000; ++i)
    {
        const auto k = ann.point(pick(rng)) + ann.point(pick(rng));
        EXPECT_GE(inflation_summand(k, ann.point(pick(rng)), tp(rng), t).real(), 0.5);
    }
}

TEST(Inflation, ProfileMatchesGenericConvolution)
{
    for (int d = 2; d <= 3; ++d)
        for (std::int64_t N : {2, 4})
        {
            const auto pr = inflation_profile(d, N);
            for (double s : {-0.5, 0.0, 0.5})
            {
                const auto in = make_inflation_data(d, s, N);
                const double generic = sobolev_norm(picard_coefficients(in.f, in.g, in.t), s);
                EXPECT_NEAR(pr.hs_norm(s) / generic, 1.0, 1e-10) << "d=" << d << " N=" << N << " s=" << s;
            }
        }
}

TEST(Inflation, SweepInThreeDimensions)
{
    EXPECT_DOUBLE_EQ(inflation_exponent(3, 0.5), -0.5);
    EXPECT_DOUBLE_EQ(inflation_exponent(2, 0.0), -0.5);
    InflationParams p;
    p.Ns = {4, 8, 16};
    const auto out = inflation_sweep(p);
    EXPECT_TRUE(out.ok()) << out.summary.dump();
    EXPECT_EQ(out.table.rows.size(), 9u);
    p.Ns = {4, 8};
    EXPECT_THROW(inflation_sweep(p), Error);
}
