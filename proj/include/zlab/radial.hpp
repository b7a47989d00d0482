#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "lattice.hpp"

// Pair iteration over radially defined sets (origin balls, shells, dyadic
// annuli). Both the quadruple-count fast path and the Picard profile reduce
// to "for every s, visit all x with x and s - x in the set", and both are
// invariant under the hyperoctahedral group acting on s.

namespace zlab
{
struct Orbit
{
    LatticePoint rep;   // 0 <= rep[0] <= rep[1] <= ... <= rep[d-1]
    std::uint64_t size; // number of lattice points in the orbit
};

inline std::uint64_t orbit_size(const LatticePoint& rep)
{
    const int d = rep.dim();
    std::uint64_t n = 1;
    for (int i = 1; i <= d; ++i)
        n *= static_cast<std::uint64_t>(i);
    int run = 1;
    for (int i = 1; i <= d; ++i)
    {
        if (i < d && rep[i] == rep[i - 1])
        {
            ++run;
            continue;
        }
        for (int f = 2; f <= run; ++f)
            n /= static_cast<std::uint64_t>(f);
        run = 1;
    }
    for (int i = 0; i < d; ++i)
        if (rep[i] != 0)
            n *= 2;
    return n;
}

/// Canonical representatives of all orbits meeting {|s|^2 <= max2}.
inline std::vector<Orbit> hyperoctahedral_orbits(int dim, std::int64_t max2)
{
    require(dim >= 1 && dim <= kMaxDim, "dimension must be in 1..4");
    std::vector<Orbit> out;
    if (max2 < 0)
        return out;
    LatticePoint s(dim);
    auto rec = [&](auto&& self, int axis, std::int64_t lo, std::int64_t used) -> void {
        if (axis == dim)
        {
            out.push_back({s, orbit_size(s)});
            return;
        }
        // remaining axes are >= v, so (dim - axis) * v^2 <= max2 - used
        for (std::int64_t v = lo; used + (dim - axis) * v * v <= max2; ++v)
        {
            s.set(axis, v);
            self(self, axis + 1, v, used + v * v);
        }
    };
    rec(rec, 0, 0, 0);
    return out;
}

namespace detail
{
struct Interval
{
    std::int64_t lo, hi;
};

// {x : a <= x^2 <= b} as at most two intervals.
inline int square_window(std::int64_t a, std::int64_t b, std::array<Interval, 2>& out)
{
    if (b < 0)
        return 0;
    const std::int64_t rb = isqrt(b);
    if (a <= 0)
    {
        out[0] = {-rb, rb};
        return 1;
    }
    const std::int64_t ra = isqrt_ceil(a);
    if (ra > rb)
        return 0;
    out[0] = {-rb, -ra};
    out[1] = {ra, rb};
    return 2;
}

template <class Fn>
void radial_pairs_rec(const LatticePoint& s, const RadialBounds& rb, int axis, std::int64_t px,
                      std::int64_t py, Fn& fn)
{
    const int d = s.dim();
    const std::int64_t si = s[axis];
    if (axis == d - 1)
    {
        std::array<Interval, 2> wx{}, wy{};
        const int nx = square_window(rb.lo2 - px, rb.hi2 - px, wx);
        const int ny = square_window(rb.lo2 - py, rb.hi2 - py, wy);
        for (int i = 0; i < nx; ++i)
            for (int j = 0; j < ny; ++j)
            {
                // y = si - x in wy[j]  <=>  x in [si - hi, si - lo]
                const std::int64_t lo = std::max(wx[i].lo, si - wy[j].hi);
                const std::int64_t hi = std::min(wx[i].hi, si - wy[j].lo);
                for (std::int64_t x = lo; x <= hi; ++x)
                {
                    const std::int64_t y = si - x;
                    fn(px + x * x, py + y * y);
                }
            }
        return;
    }
    const std::int64_t ax = isqrt(rb.hi2 - px);
    const std::int64_t ay = isqrt(rb.hi2 - py);
    const std::int64_t lo = std::max(-ax, si - ay);
    const std::int64_t hi = std::min(ax, si + ay);
    for (std::int64_t x = lo; x <= hi; ++x)
    {
        const std::int64_t y = si - x;
        radial_pairs_rec(s, rb, axis + 1, px + x * x, py + y * y, fn);
    }
}
} // namespace detail

/// Calls fn(|x|^2, |s - x|^2) for every lattice x with x and s - x in the
/// radial set, in lexicographic order of x.
template <class Fn>
void for_each_radial_pair(const LatticePoint& s, const RadialBounds& rb, Fn&& fn)
{
    if (rb.empty())
        return;
    detail::radial_pairs_rec(s, rb, 0, 0, 0, fn);
}

/// Number of lattice points with lo2 <= |k|^2 <= hi2.
inline std::uint64_t radial_point_count(int dim, const RadialBounds& rb)
{
    std::uint64_t n = 0;
    if (rb.empty())
        return n;
    for (const auto& o : hyperoctahedral_orbits(dim, rb.hi2))
        if (rb.contains(o.rep.norm2()))
            n += o.size;
    return n;
}

} // namespace zlab
