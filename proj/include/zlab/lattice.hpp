#pragma once

#include <array>
#include <charconv>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <unordered_set>
#include <variant>
#include <vector>

#include "core.hpp"

namespace zlab
{
inline constexpr int kMaxDim = 4;

using cplx = std::complex<double>;

/// Integer frequency k in Z^d, 1 <= d <= 4.
class LatticePoint
{
public:
    LatticePoint() = default;

    explicit LatticePoint(int dim) : dim_(dim)
    {
        require(dim >= 1 && dim <= kMaxDim, "dimension must be in 1..4");
    }

    LatticePoint(std::initializer_list<std::int64_t> coords)
        : LatticePoint(static_cast<int>(coords.size()))
    {
        int i = 0;
        for (auto v : coords)
            c_[i++] = static_cast<std::int32_t>(v);
    }

    int dim() const noexcept { return dim_; }
    std::int64_t operator[](int i) const noexcept { return c_[i]; }
    void set(int i, std::int64_t v) noexcept { c_[i] = static_cast<std::int32_t>(v); }

    std::int64_t norm2() const noexcept
    {
        std::int64_t s = 0;
        for (int i = 0; i < dim_; ++i)
            s += std::int64_t{c_[i]} * c_[i];
        return s;
    }

    double norm() const noexcept { return std::sqrt(static_cast<double>(norm2())); }

    std::int64_t dot(const LatticePoint& o) const noexcept
    {
        std::int64_t s = 0;
        for (int i = 0; i < dim_; ++i)
            s += std::int64_t{c_[i]} * o.c_[i];
        return s;
    }

    LatticePoint operator+(const LatticePoint& o) const noexcept
    {
        LatticePoint r = *this;
        for (int i = 0; i < dim_; ++i)
            r.c_[i] += o.c_[i];
        return r;
    }

    LatticePoint operator-(const LatticePoint& o) const noexcept
    {
        LatticePoint r = *this;
        for (int i = 0; i < dim_; ++i)
            r.c_[i] -= o.c_[i];
        return r;
    }

    LatticePoint operator-() const noexcept
    {
        LatticePoint r = *this;
        for (int i = 0; i < dim_; ++i)
            r.c_[i] = -r.c_[i];
        return r;
    }

    friend bool operator==(const LatticePoint&, const LatticePoint&) = default;
    friend auto operator<=>(const LatticePoint&, const LatticePoint&) = default;

    std::size_t hash() const noexcept
    {
        std::uint64_t h = static_cast<std::uint64_t>(dim_);
        for (int i = 0; i < dim_; ++i)
            h = splitmix64(h ^ static_cast<std::uint32_t>(c_[i]));
        return static_cast<std::size_t>(h);
    }

private:
    // dim_ first so the defaulted <=> compares dimension, then coordinates
    // lexicographically (unused trailing slots stay zero).
    std::int32_t dim_ = 0;
    std::array<std::int32_t, kMaxDim> c_{};
};

struct LatticePointHash
{
    std::size_t operator()(const LatticePoint& p) const noexcept { return p.hash(); }
};

// ---------------------------------------------------------------------------
// Regions
// ---------------------------------------------------------------------------

/// Closed ball |k - center| <= radius. An empty center means the origin.
struct Ball
{
    std::vector<double> center;
    double radius = 1.0;
};

/// Dyadic piece |k| ~ N: N/2 < |k| <= N for N >= 2, |k| <= 1 for N = 1.
struct Annulus
{
    std::int64_t N = 1;
};

/// c_star - half_width <= |k| <= c_star + half_width.
struct Shell
{
    double c_star = 1.0;
    double half_width = 1.0;
};

/// Per-axis closed integer intervals.
struct Box
{
    std::vector<std::pair<std::int64_t, std::int64_t>> axes;
};

struct FrequencyRegion;

struct Intersection
{
    std::vector<FrequencyRegion> parts;
};

struct FrequencyRegion
{
    std::variant<Ball, Annulus, Shell, Box, Intersection> shape;

    FrequencyRegion(Ball b) : shape(std::move(b)) {}
    FrequencyRegion(Annulus a) : shape(a) {}
    FrequencyRegion(Shell s) : shape(s) {}
    FrequencyRegion(Box b) : shape(std::move(b)) {}
    FrequencyRegion(Intersection i) : shape(std::move(i)) {}
};

/// Inclusive integer bounds lo2 <= |k|^2 <= hi2 for regions centred at 0.
struct RadialBounds
{
    std::int64_t lo2 = 0;
    std::int64_t hi2 = -1;

    bool contains(std::int64_t n2) const noexcept { return n2 >= lo2 && n2 <= hi2; }
    bool empty() const noexcept { return hi2 < lo2 || hi2 < 0; }
    std::int64_t radius() const noexcept { return hi2 < 0 ? -1 : isqrt(hi2); }
};

namespace detail
{
// r = m * 2^e with m odd, exactly (x86 long double carries a 64-bit mantissa).
struct BinaryRational
{
    std::uint64_t m = 0;
    int e = 0;
};

inline BinaryRational decompose(long double r)
{
    BinaryRational out;
    if (r <= 0)
        return out;
    int e = 0;
    long double fr = std::frexp(r, &e);
    out.m = static_cast<std::uint64_t>(std::ldexp(fr, 64));
    out.e = e - 64;
    while (out.m != 0 && (out.m & 1u) == 0)
    {
        out.m >>= 1;
        ++out.e;
    }
    return out;
}

/// floor(r^2) (ceil when round_up) for 0 <= r < 2^31, exact for binary inputs.
inline std::int64_t square_bound(long double r, bool round_up)
{
    if (r <= 0)
        return 0;
    require(r < 2147483648.0L, "radius too large");
    BinaryRational b = decompose(r);
    if (b.e >= 0)
    {
        auto v = static_cast<std::int64_t>(b.m << b.e);
        return v * v;
    }
    const unsigned q2 = static_cast<unsigned>(-2 * b.e);
    unsigned __int128 sq = static_cast<unsigned __int128>(b.m) * b.m;
    if (q2 >= 128)
        return round_up ? 1 : 0;
    unsigned __int128 fl = sq >> q2;
    bool frac = (sq & ((static_cast<unsigned __int128>(1) << q2) - 1)) != 0;
    return static_cast<std::int64_t>(fl) + ((round_up && frac) ? 1 : 0);
}
} // namespace detail

inline bool is_integral(double v) { return std::floor(v) == v; }

/// Radial description when the region is a rotation-invariant set about the
/// origin (origin ball, shell or annulus); nullopt otherwise.
inline std::optional<RadialBounds> radial_bounds(const FrequencyRegion& region)
{
    return std::visit(
        [](const auto& s) -> std::optional<RadialBounds> {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, Ball>)
            {
                for (double c : s.center)
                    if (c != 0.0)
                        return std::nullopt;
                return RadialBounds{0, detail::square_bound(s.radius, false)};
            }
            else if constexpr (std::is_same_v<T, Annulus>)
            {
                if (s.N == 1)
                    return RadialBounds{0, 1};
                return RadialBounds{(s.N * s.N) / 4 + 1, s.N * s.N};
            }
            else if constexpr (std::is_same_v<T, Shell>)
            {
                long double lo = static_cast<long double>(s.c_star) - s.half_width;
                long double hi = static_cast<long double>(s.c_star) + s.half_width;
                if (hi < 0)
                    return RadialBounds{0, -1};
                return RadialBounds{lo > 0 ? detail::square_bound(lo, true) : 0,
                                    detail::square_bound(hi, false)};
            }
            else
                return std::nullopt;
        },
        region.shape);
}

inline void validate(const FrequencyRegion& region, int dim)
{
    std::visit(
        [dim](const auto& s) {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, Ball>)
            {
                require(s.radius > 0, "ball radius must be positive");
                require(s.center.empty() || static_cast<int>(s.center.size()) == dim,
                        "ball centre dimension mismatch");
            }
            else if constexpr (std::is_same_v<T, Annulus>)
                require(s.N >= 1, "annulus N must be >= 1");
            else if constexpr (std::is_same_v<T, Shell>)
                require(s.half_width > 0, "shell half width must be positive");
            else if constexpr (std::is_same_v<T, Box>)
                require(static_cast<int>(s.axes.size()) == dim, "box dimension mismatch");
            else
                for (const auto& p : s.parts)
                    validate(p, dim);
        },
        region.shape);
}

inline bool contains(const FrequencyRegion& region, const LatticePoint& k)
{
    return std::visit(
        [&](const auto& s) -> bool {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, Ball>)
            {
                bool integral_centre = true;
                for (double c : s.center)
                    integral_centre = integral_centre && is_integral(c);
                if (integral_centre)
                {
                    std::int64_t d2 = 0;
                    for (int i = 0; i < k.dim(); ++i)
                    {
                        std::int64_t c = s.center.empty() ? 0 : static_cast<std::int64_t>(s.center[i]);
                        d2 += (k[i] - c) * (k[i] - c);
                    }
                    return d2 <= detail::square_bound(s.radius, false);
                }
                long double d2 = 0;
                for (int i = 0; i < k.dim(); ++i)
                {
                    long double diff = static_cast<long double>(k[i]) - s.center[i];
                    d2 += diff * diff;
                }
                return d2 <= static_cast<long double>(s.radius) * s.radius;
            }
            else if constexpr (std::is_same_v<T, Box>)
            {
                for (int i = 0; i < k.dim(); ++i)
                    if (k[i] < s.axes[i].first || k[i] > s.axes[i].second)
                        return false;
                return true;
            }
            else if constexpr (std::is_same_v<T, Intersection>)
            {
                for (const auto& p : s.parts)
                    if (!contains(p, k))
                        return false;
                return true;
            }
            else
                return radial_bounds(FrequencyRegion(s))->contains(k.norm2());
        },
        region.shape);
}

namespace detail
{
inline constexpr std::int64_t kUnboundedExtent = std::int64_t{1} << 20;

inline std::optional<Box> bounding_box(const FrequencyRegion& region, int dim)
{
    return std::visit(
        [&](const auto& s) -> std::optional<Box> {
            using T = std::decay_t<decltype(s)>;
            Box b;
            if constexpr (std::is_same_v<T, Ball>)
            {
                for (int i = 0; i < dim; ++i)
                {
                    double c = s.center.empty() ? 0.0 : s.center[i];
                    b.axes.emplace_back(static_cast<std::int64_t>(std::ceil(c - s.radius)),
                                        static_cast<std::int64_t>(std::floor(c + s.radius)));
                }
                return b;
            }
            else if constexpr (std::is_same_v<T, Box>)
            {
                for (auto [lo, hi] : s.axes)
                    if (lo < -kUnboundedExtent || hi > kUnboundedExtent)
                        return std::nullopt;
                return s;
            }
            else if constexpr (std::is_same_v<T, Intersection>)
            {
                std::optional<Box> acc;
                for (const auto& p : s.parts)
                {
                    auto pb = bounding_box(p, dim);
                    if (!pb)
                        continue;
                    if (!acc)
                    {
                        acc = pb;
                        continue;
                    }
                    for (int i = 0; i < dim; ++i)
                    {
                        acc->axes[i].first = std::max(acc->axes[i].first, pb->axes[i].first);
                        acc->axes[i].second = std::min(acc->axes[i].second, pb->axes[i].second);
                    }
                }
                return acc;
            }
            else
            {
                std::int64_t r = radial_bounds(FrequencyRegion(s))->radius();
                for (int i = 0; i < dim; ++i)
                    b.axes.emplace_back(-r, r);
                return b;
            }
        },
        region.shape);
}
} // namespace detail

// ---------------------------------------------------------------------------
// FrequencySet
// ---------------------------------------------------------------------------

/// Finite set of distinct lattice points with complex coefficients a_k.
class FrequencySet
{
public:
    FrequencySet() = default;

    FrequencySet(int dim, std::vector<LatticePoint> points, std::vector<cplx> coeffs)
        : dim_(dim), points_(std::move(points)), coeffs_(std::move(coeffs))
    {
        require(dim >= 1 && dim <= kMaxDim, "dimension must be in 1..4");
        require(points_.size() == coeffs_.size(), "points and coefficients differ in length");
        std::unordered_set<LatticePoint, LatticePointHash> seen;
        seen.reserve(points_.size());
        for (const auto& p : points_)
        {
            require(p.dim() == dim, "point dimension mismatch");
            require(seen.insert(p).second, "duplicate lattice point in frequency set");
        }
    }

    static FrequencySet ones(int dim, std::vector<LatticePoint> points)
    {
        std::vector<cplx> c(points.size(), cplx{1.0, 0.0});
        return FrequencySet(dim, std::move(points), std::move(c));
    }

    int dim() const noexcept { return dim_; }
    std::size_t size() const noexcept { return points_.size(); }
    bool empty() const noexcept { return points_.empty(); }
    const std::vector<LatticePoint>& points() const noexcept { return points_; }
    const std::vector<cplx>& coeffs() const noexcept { return coeffs_; }
    const LatticePoint& point(std::size_t i) const { return points_[i]; }
    cplx coeff(std::size_t i) const { return coeffs_[i]; }

    /// Euclidean norm of the coefficient vector.
    double l2() const
    {
        double s = 0.0;
        for (auto c : coeffs_)
            s += std::norm(c);
        return std::sqrt(s);
    }

    std::int64_t kmax(int axis) const
    {
        std::int64_t m = 0;
        for (const auto& p : points_)
            m = std::max<std::int64_t>(m, std::abs(p[axis]));
        return m;
    }

    std::int64_t max_norm2() const
    {
        std::int64_t m = 0;
        for (const auto& p : points_)
            m = std::max(m, p.norm2());
        return m;
    }

    FrequencySet scaled(cplx c) const
    {
        FrequencySet r = *this;
        for (auto& a : r.coeffs_)
            a *= c;
        return r;
    }

    FrequencySet translated(const LatticePoint& v) const
    {
        FrequencySet r = *this;
        for (auto& p : r.points_)
            p = p + v;
        return r;
    }

    FrequencySet with_coeffs(std::vector<cplx> c) const
    {
        return FrequencySet(dim_, points_, std::move(c));
    }

    /// Subset by index list, preserving the given order.
    FrequencySet subset(const std::vector<std::size_t>& idx) const
    {
        FrequencySet r;
        r.dim_ = dim_;
        r.label = label;
        for (auto i : idx)
        {
            r.points_.push_back(points_[i]);
            r.coeffs_.push_back(coeffs_[i]);
        }
        return r;
    }

    std::string label;

private:
    int dim_ = 1;
    std::vector<LatticePoint> points_;
    std::vector<cplx> coeffs_;
};

struct EnumerateOptions
{
    bool strict = false;
};

/// All lattice points of the region in lexicographic order, unit coefficients.
inline FrequencySet enumerate(const FrequencyRegion& region, int dim, EnumerateOptions opt = {})
{
    require(dim >= 1 && dim <= kMaxDim, "dimension must be in 1..4");
    validate(region, dim);
    auto box = detail::bounding_box(region, dim);
    if (!box)
        fail(Errc::unbounded, "unbounded enumeration");

    std::uint64_t volume = 1;
    for (auto [lo, hi] : box->axes)
    {
        if (hi - lo > 2 * detail::kUnboundedExtent)
            fail(Errc::unbounded, "unbounded enumeration");
        volume *= static_cast<std::uint64_t>(std::max<std::int64_t>(0, hi - lo + 1));
    }

    std::vector<std::vector<LatticePoint>> slabs;
    const auto [lo0, hi0] = box->axes[0];
    if (volume > 0)
    {
        slabs.resize(static_cast<std::size_t>(hi0 - lo0 + 1));
        parallel_for(slabs.size(), [&](std::size_t s) {
            LatticePoint k(dim);
            k.set(0, lo0 + static_cast<std::int64_t>(s));
            // odometer over axes 1..dim-1
            for (int i = 1; i < dim; ++i)
                k.set(i, box->axes[i].first);
            for (;;)
            {
                if (contains(region, k))
                    slabs[s].push_back(k);
                int axis = dim - 1;
                while (axis >= 1)
                {
                    if (k[axis] < box->axes[axis].second)
                    {
                        k.set(axis, k[axis] + 1);
                        break;
                    }
                    k.set(axis, box->axes[axis].first);
                    --axis;
                }
                if (axis < 1)
                    break;
            }
        });
    }

    std::vector<LatticePoint> pts;
    for (auto& s : slabs)
        pts.insert(pts.end(), s.begin(), s.end());

    if (opt.strict && pts.empty())
        if (auto* sh = std::get_if<Shell>(&region.shape); sh && sh->c_star < sh->half_width)
            fail(Errc::invalid_argument, "shell yields the empty set");

    return FrequencySet::ones(dim, std::move(pts));
}

// ---------------------------------------------------------------------------
// Block partitions
// ---------------------------------------------------------------------------

struct Block
{
    LatticePoint index;
    std::vector<std::size_t> members; // indices into the parent set
};

struct BlockPartition
{
    std::optional<FrequencyRegion> parent;
    std::int64_t block_side = 1;
    std::vector<Block> blocks;
};

inline LatticePoint block_index(const LatticePoint& k, std::int64_t side)
{
    LatticePoint b(k.dim());
    for (int i = 0; i < k.dim(); ++i)
        b.set(i, floor_div(k[i], side));
    return b;
}

/// Axis-aligned cubes of side block_side; block index is floor(k / side).
inline BlockPartition partition_blocks(const FrequencySet& set, std::int64_t block_side,
                                       std::optional<FrequencyRegion> parent = std::nullopt)
{
    require(block_side >= 1, "block_side must be >= 1");
    std::map<LatticePoint, std::vector<std::size_t>> groups;
    for (std::size_t i = 0; i < set.size(); ++i)
        groups[block_index(set.point(i), block_side)].push_back(i);

    BlockPartition out{std::move(parent), block_side, {}};
    out.blocks.reserve(groups.size());
    for (auto& [idx, members] : groups)
        out.blocks.push_back(Block{idx, std::move(members)});
    return out;
}

inline std::vector<FrequencySet> block_sets(const FrequencySet& set, const BlockPartition& part)
{
    std::vector<FrequencySet> out;
    out.reserve(part.blocks.size());
    for (const auto& b : part.blocks)
        out.push_back(set.subset(b.members));
    return out;
}

// ---------------------------------------------------------------------------
// Extremal examples
// ---------------------------------------------------------------------------

/// Largest M with d*M^2 <= N, i.e. floor(sqrt(N/d)).
inline std::int64_t slab_width(int d, std::int64_t N)
{
    std::int64_t m = isqrt(N / d + 1);
    while (d * m * m > N)
        --m;
    while (d * (m + 1) * (m + 1) <= N)
        ++m;
    return m;
}

/// Indicator of {(N, kbar) : 1 <= kbar_j <= floor(sqrt(N/d))}.
inline FrequencySet slab_example(int d, std::int64_t N)
{
    require(d >= 2 && d <= kMaxDim, "slab example needs 2 <= d <= 4");
    require(N >= 4, "slab example needs N >= 4");
    const std::int64_t m = slab_width(d, N);
    FrequencyRegion box(Box{});
    auto& axes = std::get<Box>(box.shape).axes;
    axes.emplace_back(N, N);
    for (int j = 1; j < d; ++j)
        axes.emplace_back(1, m);
    auto s = enumerate(box, d);
    s.label = "slab";
    return s;
}

struct Triple
{
    FrequencySet first, second, third;
};

/// Plane waves at (N,0,..), (-N-1,0,..), (-2N-1,0,..).
inline Triple trilinear_example(int d, std::int64_t N)
{
    require(d >= 1 && d <= kMaxDim, "dimension must be in 1..4");
    require(N >= 1, "N must be >= 1");
    auto single = [d](std::int64_t x) {
        LatticePoint k(d);
        k.set(0, x);
        return FrequencySet::ones(d, {k});
    };
    return {single(N), single(-N - 1), single(-2 * N - 1)};
}

// ---------------------------------------------------------------------------
// Text serialization: "dim d count n" then "k1 ... kd re im" per line.
// ---------------------------------------------------------------------------

inline std::string format_real(double v)
{
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

inline void write_text(std::ostream& os, const FrequencySet& set)
{
    os << "dim " << set.dim() << " count " << set.size() << '\n';
    for (std::size_t i = 0; i < set.size(); ++i)
    {
        const auto& p = set.point(i);
        for (int j = 0; j < set.dim(); ++j)
            os << p[j] << ' ';
        os << format_real(set.coeff(i).real()) << ' ' << format_real(set.coeff(i).imag()) << '\n';
    }
}

inline double parse_real(const std::string& tok)
{
    double v = 0;
    auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (res.ec != std::errc() || res.ptr != tok.data() + tok.size())
        fail(Errc::parse, "bad real '" + tok + "'");
    return v;
}

inline FrequencySet read_text(std::istream& is)
{
    std::string w1, w2;
    int dim = 0;
    std::size_t count = 0;
    if (!(is >> w1 >> dim >> w2 >> count) || w1 != "dim" || w2 != "count")
        fail(Errc::parse, "expected header 'dim d count n'");
    require(dim >= 1 && dim <= kMaxDim, "dimension must be in 1..4");
    std::vector<LatticePoint> pts;
    std::vector<cplx> coeffs;
    pts.reserve(count);
    coeffs.reserve(count);
    for (std::size_t i = 0; i < count; ++i)
    {
        LatticePoint k(dim);
        for (int j = 0; j < dim; ++j)
        {
            std::int64_t v;
            if (!(is >> v))
                fail(Errc::parse, "truncated frequency set at entry " + std::to_string(i));
            k.set(j, v);
        }
        std::string re, im;
        if (!(is >> re >> im))
            fail(Errc::parse, "truncated frequency set at entry " + std::to_string(i));
        pts.push_back(k);
        coeffs.emplace_back(parse_real(re), parse_real(im));
    }
    return FrequencySet(dim, std::move(pts), std::move(coeffs));
}

} // namespace zlab
