#include <set>

#include <gtest/gtest.h>

#include <zlab/diophantine.hpp>

using namespace zlab;

namespace
{
using P3 = std::array<std::int64_t, 3>;

// Independent point list from a cube scan.
std::vector<P3> scan(const DioQuery& q)
{
    std::vector<P3> out;
    const std::int64_t r = q.N;
    for (std::int64_t a = -r; a <= r; ++a)
        for (std::int64_t b = -r; b <= r; ++b)
            for (std::int64_t c = -r; c <= r; ++c)
            {
                const std::int64_t n2 = a * a + b * b + c * c;
                bool in;
                if (q.constraint == DioConstraint::box)
                    in = a >= 1 && b >= 1 && c >= 1;
                else
                {
                    const std::int64_t lo = std::max<std::int64_t>(0, q.N - q.delta);
                    in = n2 >= lo * lo && n2 <= q.N * q.N;
                }
                if (in)
                    out.push_back({a, b, c});
            }
    return out;
}

std::int64_t n2(const P3& v) { return v[0] * v[0] + v[1] * v[1] + v[2] * v[2]; }

// O(n^3) with w = x + y - z looked up in a set.
std::uint64_t oracle(const DioQuery& q)
{
    const auto pts = scan(q);
    const std::set<P3> members(pts.begin(), pts.end());
    std::uint64_t c = 0;
    for (const auto& x : pts)
        for (const auto& y : pts)
            for (const auto& z : pts)
            {
                const P3 w{x[0] + y[0] - z[0], x[1] + y[1] - z[1], x[2] + y[2] - z[2]};
                if (n2(x) + n2(y) == n2(z) + n2(w) && members.count(w))
                    ++c;
            }
    return c;
}
} // namespace

TEST(Dio, SmallestCases)
{
    EXPECT_EQ(count_pairhash({DioConstraint::box, 1, 0}).count, 1u);
    // origin and the six unit vectors
    const DioQuery unit{DioConstraint::shell, 1, 1};
    EXPECT_EQ(dio_set(unit).size(), 7u);
    EXPECT_EQ(count_pairhash(unit).count, oracle(unit));
    // delta = 0 keeps only the unit sphere
    EXPECT_EQ(count_pairhash({DioConstraint::shell, 1, 0}).set_size, 6u);
}

TEST(Dio, AllMethodsAgreeWithOracle)
{
    for (const DioQuery q : {DioQuery{DioConstraint::box, 3, 0}, DioQuery{DioConstraint::box, 4, 0},
                             DioQuery{DioConstraint::shell, 3, 1}, DioQuery{DioConstraint::shell, 4, 10},
                             DioQuery{DioConstraint::shell, 5, 1}})
    {
        const auto ref = oracle(q);
        EXPECT_EQ(dio_set(q).size(), scan(q).size()) << q.label();
        EXPECT_EQ(count_bruteforce(q).count, ref) << q.label();
        EXPECT_EQ(count_pairhash(q).count, ref) << q.label();
        EXPECT_EQ(count_via_l4(q).count, ref) << q.label();
    }
}

TEST(Dio, TrivialFloorAndMonotoneInDelta)
{
    std::uint64_t prev = 0;
    for (std::int64_t delta = 0; delta <= 6; ++delta)
    {
        const auto c = count_pairhash({DioConstraint::shell, 6, delta});
        // (x, y, x, y) and (x, y, y, x) are always solutions
        EXPECT_GE(c.count, 2 * c.set_size * c.set_size - c.set_size);
        EXPECT_GE(c.count, prev);
        prev = c.count;
    }
}

TEST(Dio, RadialPathAtLargerN)
{
    const DioQuery q{DioConstraint::shell, 12, 10};
    const auto a = count_pairhash(q);
    EXPECT_EQ(count_via_l4(q).count, a.count);
    EXPECT_EQ(radial_quadruple_count(3, RadialBounds{4, 144}), a.count);
}

TEST(Dio, Validation)
{
    EXPECT_THROW(dio_set({DioConstraint::box, 0, 0}), Error);
    EXPECT_THROW(dio_set({DioConstraint::shell, 4, -1}), Error);
    EXPECT_THROW(count_bruteforce({DioConstraint::box, 4, 0}, Budget{10, 1 << 20, 0.0}), Error);
}

TEST(DioSweep, SlopeInRange)
{
    const auto r = dio_exponent_sweep({8, 12, 16}, 2);
    EXPECT_TRUE(r.outcome.ok()) << r.outcome.summary.dump();
    EXPECT_EQ(r.counts.size(), 3u);
    EXPECT_EQ(r.outcome.table.volatile_columns, std::vector<std::string>{"seconds"});
}

TEST(DioSweep, Errors)
{
    try
    {
        dio_exponent_sweep({8, 12, 8}, 2);
        FAIL();
    }
    catch (const Error& e)
    {
        EXPECT_NE(std::string(e.what()).find("Ns distinct"), std::string::npos);
    }
    EXPECT_THROW(dio_exponent_sweep({8, 12}, 2), Error);
    Budget small;
    small.max_pairs = 100'000'000;
    try
    {
        dio_exponent_sweep({4, 8, 64}, 2, small);
        FAIL();
    }
    catch (const Error& e)
    {
        EXPECT_TRUE(e.is_budget());
        EXPECT_NE(std::string(e.what()).find("N=64"), std::string::npos) << e.what();
    }
}
