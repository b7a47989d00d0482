#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fft.hpp"
#include "flat_map.hpp"
#include "lattice.hpp"
#include "quadrature.hpp"
#include "radial.hpp"

namespace zlab
{
inline constexpr double kInf = std::numeric_limits<double>::infinity();

// ---------------------------------------------------------------------------
// Phase functions
// ---------------------------------------------------------------------------

enum class PhaseKind
{
    schrodinger,     // e^{it Delta}: multiplier e^{-it|k|^2}
    half_wave_plus,  // e^{+it|k|}
    half_wave_minus, // e^{-it|k|}
    kg_plus,         // e^{+it<k>}
    kg_minus,        // e^{-it<k>}
    cosine_wave,     // cos(t|k|)
};

struct PhaseFunction
{
    PhaseKind kind = PhaseKind::schrodinger;

    /// phi(k) >= 0; <k> = sqrt(1 + |k|^2) for the Klein-Gordon kinds.
    double symbol(const LatticePoint& k) const
    {
        switch (kind)
        {
        case PhaseKind::schrodinger:
            return static_cast<double>(k.norm2());
        case PhaseKind::kg_plus:
        case PhaseKind::kg_minus:
            return std::sqrt(1.0 + static_cast<double>(k.norm2()));
        default:
            return std::sqrt(static_cast<double>(k.norm2()));
        }
    }

    /// phi(k) when it is an integer.
    std::optional<std::int64_t> integer_symbol(const LatticePoint& k) const
    {
        const std::int64_t n2 = k.norm2();
        switch (kind)
        {
        case PhaseKind::schrodinger:
            return n2;
        case PhaseKind::kg_plus:
        case PhaseKind::kg_minus: {
            std::int64_t r = isqrt(n2 + 1);
            return r * r == n2 + 1 ? std::optional<std::int64_t>(r) : std::nullopt;
        }
        default: {
            std::int64_t r = isqrt(n2);
            return r * r == n2 ? std::optional<std::int64_t>(r) : std::nullopt;
        }
        }
    }

    /// Sign of the temporal exponent; 0 for the two-sided cosine.
    int sigma() const
    {
        switch (kind)
        {
        case PhaseKind::schrodinger:
        case PhaseKind::half_wave_minus:
        case PhaseKind::kg_minus:
            return -1;
        case PhaseKind::half_wave_plus:
        case PhaseKind::kg_plus:
            return 1;
        default:
            return 0;
        }
    }

    bool unitary() const { return kind != PhaseKind::cosine_wave; }

    cplx multiplier(const LatticePoint& k, double t) const
    {
        const double phi = symbol(k);
        if (kind == PhaseKind::cosine_wave)
            return {std::cos(t * phi), 0.0};
        return std::polar(1.0, sigma() * phi * t);
    }

    std::string_view name() const
    {
        switch (kind)
        {
        case PhaseKind::schrodinger:
            return "schrodinger";
        case PhaseKind::half_wave_plus:
            return "half_wave_plus";
        case PhaseKind::half_wave_minus:
            return "half_wave_minus";
        case PhaseKind::kg_plus:
            return "kg_plus";
        case PhaseKind::kg_minus:
            return "kg_minus";
        default:
            return "cosine_wave";
        }
    }

    static PhaseFunction parse(std::string_view s)
    {
        for (auto k : {PhaseKind::schrodinger, PhaseKind::half_wave_plus, PhaseKind::half_wave_minus,
                       PhaseKind::kg_plus, PhaseKind::kg_minus, PhaseKind::cosine_wave})
            if (PhaseFunction{k}.name() == s)
                return PhaseFunction{k};
        fail(Errc::invalid_argument, "unknown phase '" + std::string(s) + "'");
    }
};

struct Modulation
{
    double omega = 0.0;
    bool resonant = false; // omega == 0
};

/// a + sign * sqrt(c) for integers a, c >= 0. When c is a perfect square the
/// value and the zero test are integer-exact; otherwise a^2 != c, so the value
/// cannot vanish and the 1e-12 tolerance only absorbs cancellation.
inline Modulation root_offset(std::int64_t a, std::int64_t c, int sign)
{
    Modulation m;
    const std::int64_t r = isqrt(c);
    if (r * r == c)
    {
        const std::int64_t w = a + sign * r;
        m.omega = static_cast<double>(w);
        m.resonant = w == 0;
        return m;
    }
    m.omega = static_cast<double>(a) + sign * std::sqrt(static_cast<double>(c));
    m.resonant = std::abs(m.omega) < 1e-12;
    if (m.resonant)
        m.omega = 0.0;
    return m;
}

inline bool integral_frequencies(const FrequencySet& set, const PhaseFunction& phase)
{
    for (const auto& k : set.points())
        if (!phase.integer_symbol(k))
            return false;
    return true;
}

inline double max_symbol(const FrequencySet& set, const PhaseFunction& phase)
{
    double m = 0.0;
    for (const auto& k : set.points())
        m = std::max(m, phase.symbol(k));
    return m;
}

// ---------------------------------------------------------------------------
// Grids
// ---------------------------------------------------------------------------

enum class TimeRule
{
    rectangle,      // periodic integrands (integer temporal frequencies)
    gauss_legendre, // composite Gauss-Legendre panels otherwise
};

struct GridSpec
{
    int dim = 1;
    std::vector<int> mx{1}; // spatial points per axis
    int mt = 1;             // temporal nodes
    double oversample = 1.0;
    TimeRule rule = TimeRule::rectangle;
    int gl_order = 16;
    double t0 = 0.0;
    double t1 = kTwoPi;

    std::size_t spatial_size() const
    {
        std::size_t n = 1;
        for (int m : mx)
            n *= static_cast<std::size_t>(m);
        return n;
    }

    std::uint64_t samples() const { return spatial_size() * static_cast<std::uint64_t>(mt); }

    double cell_volume() const { return std::pow(kTwoPi, dim) / static_cast<double>(spatial_size()); }

    QuadratureRule time_rule() const
    {
        if (rule == TimeRule::rectangle)
        {
            QuadratureRule r;
            const double h = (t1 - t0) / mt;
            for (int j = 0; j < mt; ++j)
            {
                r.nodes.push_back(t0 + j * h);
                r.weights.push_back(h);
            }
            return r;
        }
        require(mt % gl_order == 0, "Gauss-Legendre node count must be a multiple of the order");
        return composite_gauss_legendre(t0, t1, mt / gl_order, gl_order);
    }
};

/// Nyquist-satisfying grid for the set and phase, scaled by oversample.
/// Integer temporal frequencies get the periodic rectangle rule.
inline GridSpec make_grid(const FrequencySet& set, const PhaseFunction& phase, double oversample = 1.0,
                          double time_oversample = 0.0)
{
    if (time_oversample == 0.0)
        time_oversample = oversample;
    require(oversample >= 1.0 && time_oversample >= 1.0, "oversampling factor must be >= 1");
    GridSpec g;
    g.dim = set.dim();
    g.oversample = oversample;
    g.mx.clear();
    for (int i = 0; i < set.dim(); ++i)
        g.mx.push_back(fft_friendly_size((2.0 * static_cast<double>(set.kmax(i)) + 1.0) * oversample));
    const double base_t = (2.0 * std::ceil(max_symbol(set, phase) - 1e-12) + 1.0) * time_oversample;
    if (integral_frequencies(set, phase))
    {
        g.rule = TimeRule::rectangle;
        g.mt = fft_friendly_size(base_t);
    }
    else
    {
        g.rule = TimeRule::gauss_legendre;
        g.mt = g.gl_order * std::max(1, static_cast<int>(std::ceil(base_t / g.gl_order)));
    }
    return g;
}

inline void check_nyquist(const GridSpec& grid, const FrequencySet& set, const PhaseFunction& phase)
{
    require(grid.dim == set.dim() && static_cast<int>(grid.mx.size()) == set.dim(),
            "grid dimension mismatch");
    for (int i = 0; i < set.dim(); ++i)
        if (grid.mx[i] < 2 * set.kmax(i) + 1)
            fail(Errc::aliasing, "aliasing: spatial axis " + std::to_string(i) + " has "
                                     + std::to_string(grid.mx[i]) + " points, needs "
                                     + std::to_string(2 * set.kmax(i) + 1));
    const double need_t = 2.0 * max_symbol(set, phase) + 1.0;
    if (grid.mt + 1e-9 < need_t)
        fail(Errc::aliasing, "aliasing: " + std::to_string(grid.mt)
                                 + " temporal nodes for temporal bandwidth "
                                 + std::to_string(max_symbol(set, phase)));
}

// ---------------------------------------------------------------------------
// Field evaluation
// ---------------------------------------------------------------------------

/// Produces u(t_j, .) on the spatial grid, one time node at a time, by
/// placing a_k * multiplier(k, t_j) into a frequency array and synthesising
/// with a d-dimensional FFT.
class SliceEvaluator
{
public:
    SliceEvaluator(const FrequencySet& set, const PhaseFunction& phase, const GridSpec& grid)
        : grid_(grid), phase_(phase), times_(grid.time_rule())
    {
        check_nyquist(grid, set, phase);
        const int d = set.dim();
        std::vector<std::size_t> stride(d, 1);
        for (int i = d - 2; i >= 0; --i)
            stride[i] = stride[i + 1] * static_cast<std::size_t>(grid.mx[i + 1]);
        offsets_.reserve(set.size());
        for (const auto& k : set.points())
        {
            std::size_t off = 0;
            for (int i = 0; i < d; ++i)
            {
                std::int64_t m = grid.mx[i];
                off += static_cast<std::size_t>(((k[i] % m) + m) % m) * stride[i];
            }
            offsets_.push_back(off);
            symbols_.push_back(phase.symbol(k));
        }
        coeffs_ = set.coeffs();

        exact_table_ = grid.rule == TimeRule::rectangle && grid.t0 == 0.0 && grid.t1 == kTwoPi
                       && integral_frequencies(set, phase);
        if (exact_table_)
        {
            for (const auto& k : set.points())
                int_symbols_.push_back(*phase.integer_symbol(k));
            roots_.resize(static_cast<std::size_t>(grid.mt));
            for (int r = 0; r < grid.mt; ++r)
                roots_[r] = std::polar(1.0, kTwoPi * r / grid.mt);
        }
    }

    const QuadratureRule& times() const noexcept { return times_; }
    const GridSpec& grid() const noexcept { return grid_; }

    SpatialTransform make_workspace() const { return SpatialTransform(grid_.mx, +1); }

    void evaluate(std::size_t j, SpatialTransform& ws) const
    {
        ws.zero();
        cplx* buf = ws.data();
        const double t = times_.nodes[j];
        const std::int64_t mt = grid_.mt;
        const int sigma = phase_.sigma();
        for (std::size_t i = 0; i < offsets_.size(); ++i)
        {
            cplx m;
            if (exact_table_)
            {
                std::int64_t r = (int_symbols_[i] * static_cast<std::int64_t>(j)) % mt;
                if (phase_.kind == PhaseKind::cosine_wave)
                    m = {roots_[static_cast<std::size_t>(r)].real(), 0.0};
                else
                {
                    r = ((sigma * r) % mt + mt) % mt;
                    m = roots_[static_cast<std::size_t>(r)];
                }
            }
            else if (phase_.kind == PhaseKind::cosine_wave)
                m = {std::cos(symbols_[i] * t), 0.0};
            else
                m = std::polar(1.0, sigma * symbols_[i] * t);
            buf[offsets_[i]] += coeffs_[i] * m;
        }
        ws.execute();
    }

private:
    GridSpec grid_;
    PhaseFunction phase_;
    QuadratureRule times_;
    std::vector<std::size_t> offsets_;
    std::vector<double> symbols_;
    std::vector<cplx> coeffs_;
    bool exact_table_ = false;
    std::vector<std::int64_t> int_symbols_;
    std::vector<cplx> roots_;
};

struct SampledField
{
    GridSpec grid;
    std::vector<cplx> values; // [time node][flattened space], axis 0 slowest
    std::string provenance;

    cplx at(std::size_t jt, std::size_t jx) const { return values[jt * grid.spatial_size() + jx]; }
};

inline SampledField evaluate_field(const FrequencySet& set, const PhaseFunction& phase, const GridSpec& grid,
                                   const Budget& budget = {})
{
    SliceEvaluator ev(set, phase, grid);
    budget.check_grid(grid.samples() * sizeof(cplx), "sampled field");
    SampledField f{grid, std::vector<cplx>(grid.samples()),
                   (set.label.empty() ? std::string("set") : set.label) + "/" + std::string(phase.name())};
    const std::size_t ns = grid.spatial_size();
    parallel_for_with_state(
        static_cast<std::size_t>(grid.mt), [&] { return ev.make_workspace(); },
        [&](SpatialTransform& ws, std::size_t j) {
            ev.evaluate(j, ws);
            std::copy(ws.data(), ws.data() + ns, f.values.begin() + static_cast<std::ptrdiff_t>(j * ns));
        });
    return f;
}

// ---------------------------------------------------------------------------
// Lebesgue norms
// ---------------------------------------------------------------------------

/// L^q_t L^p_x exponents; infinity allowed. q == p is the pure norm.
struct NormSpec
{
    double q = 2.0;
    double p = 2.0;

    bool pure() const { return q == p; }
};

namespace detail
{
// Spatial functional of one slice: max |u| when p = inf, else cell * sum |u|^p.
inline double slice_statistic(const cplx* u, std::size_t n, double p, double cell)
{
    if (std::isinf(p))
    {
        double m = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            m = std::max(m, std::abs(u[i]));
        return m;
    }
    double s = 0.0;
    if (p == 2.0)
        for (std::size_t i = 0; i < n; ++i)
            s += std::norm(u[i]);
    else if (p == 4.0)
        for (std::size_t i = 0; i < n; ++i)
        {
            double a = std::norm(u[i]);
            s += a * a;
        }
    else
        for (std::size_t i = 0; i < n; ++i)
            s += std::pow(std::norm(u[i]), 0.5 * p);
    return s * cell;
}

inline double combine_slices(const std::vector<double>& stat, const std::vector<double>& w, NormSpec spec)
{
    const bool pinf = std::isinf(spec.p);
    if (!pinf && spec.q == spec.p)
    {
        double s = 0.0;
        for (std::size_t j = 0; j < stat.size(); ++j)
            s += w[j] * stat[j];
        return std::pow(s, 1.0 / spec.p);
    }
    double acc = 0.0;
    for (std::size_t j = 0; j < stat.size(); ++j)
    {
        const double nj = pinf ? stat[j] : std::pow(stat[j], 1.0 / spec.p);
        if (std::isinf(spec.q))
            acc = std::max(acc, nj);
        else
            acc += w[j] * std::pow(nj, spec.q);
    }
    return std::isinf(spec.q) ? acc : std::pow(acc, 1.0 / spec.q);
}

inline void check_norm_spec(NormSpec spec)
{
    require(spec.p >= 1.0 && spec.q >= 1.0, "norm exponents must be >= 1");
}
} // namespace detail

/// Quadrature of ||u||_{L^q_t L^p_x} with the measure of T^{d+1} equal to
/// (2 pi)^{d+1}; spatial rectangle rule, time rule from the grid.
inline double lp_norm(const SampledField& field, NormSpec spec)
{
    detail::check_norm_spec(spec);
    const auto& g = field.grid;
    const auto tr = g.time_rule();
    const std::size_t ns = g.spatial_size();
    std::vector<double> stat(static_cast<std::size_t>(g.mt));
    for (std::size_t j = 0; j < stat.size(); ++j)
        stat[j] = detail::slice_statistic(field.values.data() + j * ns, ns, spec.p, g.cell_volume());
    return detail::combine_slices(stat, tr.weights, spec);
}

/// Same quadrature without materialising the field: slices are synthesised
/// and reduced one at a time.
inline double lp_norm_streaming(const FrequencySet& set, const PhaseFunction& phase, const GridSpec& grid,
                                NormSpec spec, const Budget& budget = {})
{
    detail::check_norm_spec(spec);
    SliceEvaluator ev(set, phase, grid);
    const std::size_t workers = std::min<std::size_t>(worker_count(), static_cast<std::size_t>(grid.mt));
    budget.check_grid(workers * grid.spatial_size() * sizeof(cplx), "slice workspace");
    std::vector<double> stat(static_cast<std::size_t>(grid.mt));
    const double cell = grid.cell_volume();
    parallel_for_with_state(
        stat.size(), [&] { return ev.make_workspace(); },
        [&](SpatialTransform& ws, std::size_t j) {
            ev.evaluate(j, ws);
            stat[j] = detail::slice_statistic(ws.data(), ws.size(), spec.p, cell);
        });
    return detail::combine_slices(stat, ev.times().weights, spec);
}

// ---------------------------------------------------------------------------
// L^4 by counting additive quadruples
// ---------------------------------------------------------------------------

namespace detail
{
inline constexpr std::int64_t kKeyOffset = std::int64_t{1} << 15;

// Packs the trailing coordinates (1..d-1) of a pair sum and the square sum.
inline u128 pack_tail(const LatticePoint& s, std::int64_t m)
{
    u128 key = static_cast<std::uint64_t>(m);
    for (int i = 1; i < s.dim(); ++i)
        key |= static_cast<u128>(static_cast<std::uint64_t>(s[i] + kKeyOffset)) << (64 + 16 * (i - 1));
    return key;
}

struct FirstAxisGroups
{
    std::int64_t lo = 0, hi = -1;
    std::vector<std::vector<std::size_t>> members; // indexed by coordinate - lo
};

inline FirstAxisGroups group_by_first_axis(const FrequencySet& set)
{
    FirstAxisGroups g;
    if (set.empty())
        return g;
    g.lo = set.point(0)[0];
    g.hi = g.lo;
    for (const auto& p : set.points())
    {
        g.lo = std::min(g.lo, p[0]);
        g.hi = std::max(g.hi, p[0]);
    }
    g.members.resize(static_cast<std::size_t>(g.hi - g.lo + 1));
    for (std::size_t i = 0; i < set.size(); ++i)
        g.members[static_cast<std::size_t>(set.point(i)[0] - g.lo)].push_back(i);
    return g;
}

// Sharded over the first coordinate of the pair sum; per shard, aggregate
// ordered pairs by (remaining sum coordinates, square sum), then reduce.
template <class V, class Weight, class Reduce>
void pair_aggregate(const FrequencySet& set, const Budget& budget, Weight&& weight, Reduce&& reduce)
{
    const std::uint64_t n = set.size();
    budget.check_pairs(n * n, "pair aggregation over " + std::to_string(n) + " frequencies");
    for (int i = 0; i < set.dim(); ++i)
        require(set.kmax(i) < kKeyOffset / 2, "frequencies too large for packed pair keys");
    if (set.empty())
        return;

    const auto groups = group_by_first_axis(set);
    const std::int64_t lo = 2 * groups.lo, hi = 2 * groups.hi;
    std::vector<std::int64_t> norms(set.size());
    for (std::size_t i = 0; i < set.size(); ++i)
        norms[i] = set.point(i).norm2();

    parallel_for(static_cast<std::size_t>(hi - lo + 1), [&](std::size_t shard) {
        const std::int64_t s1 = lo + static_cast<std::int64_t>(shard);
        FlatMap128<V> agg(64);
        for (std::int64_t a = groups.lo; a <= groups.hi; ++a)
        {
            const std::int64_t b = s1 - a;
            if (b < groups.lo || b > groups.hi)
                continue;
            const auto& ga = groups.members[static_cast<std::size_t>(a - groups.lo)];
            const auto& gb = groups.members[static_cast<std::size_t>(b - groups.lo)];
            for (auto i : ga)
                for (auto j : gb)
                    agg[pack_tail(set.point(i) + set.point(j), norms[i] + norms[j])] += weight(i, j);
        }
        reduce(shard, agg);
    });
}
} // namespace detail

/// sum over (s, m) of |sum_{k1+k2=s, |k1|^2+|k2|^2=m} a_k1 a_k2|^2, i.e. the
/// weighted resonance sum over k1+k2=k3+k4 with matching square sums.
inline double resonance_sum(const FrequencySet& set, const Budget& budget = {})
{
    const auto groups = detail::group_by_first_axis(set);
    std::vector<double> per_shard(set.empty() ? 0 : static_cast<std::size_t>(2 * (groups.hi - groups.lo) + 1));
    const auto& c = set.coeffs();
    detail::pair_aggregate<cplx>(
        set, budget, [&](std::size_t i, std::size_t j) { return c[i] * c[j]; },
        [&](std::size_t shard, const FlatMap128<cplx>& agg) {
            double s = 0.0;
            agg.for_each([&](u128, const cplx& v) { s += std::norm(v); });
            per_shard[shard] = s;
        });
    double total = 0.0;
    for (double s : per_shard)
        total += s;
    return total;
}

/// Exact number of ordered quadruples (k1,k2,k3,k4) in the support with
/// k1+k2 = k3+k4 and |k1|^2+|k2|^2 = |k3|^2+|k4|^2. Coefficients ignored.
inline std::uint64_t quadruple_count(const FrequencySet& set, const Budget& budget = {})
{
    const auto groups = detail::group_by_first_axis(set);
    std::vector<std::uint64_t> per_shard(set.empty() ? 0 : static_cast<std::size_t>(2 * (groups.hi - groups.lo) + 1));
    detail::pair_aggregate<std::uint64_t>(
        set, budget, [](std::size_t, std::size_t) { return std::uint64_t{1}; },
        [&](std::size_t shard, const FlatMap128<std::uint64_t>& agg) {
            std::uint64_t s = 0;
            agg.for_each([&](u128, std::uint64_t v) { s += v * v; });
            per_shard[shard] = s;
        });
    std::uint64_t total = 0;
    for (auto s : per_shard)
        total += s;
    return total;
}

/// ||e^{it Delta} f||_{L^4(T^{d+1})} = ((2 pi)^{d+1} * resonance_sum)^{1/4}.
inline double l4_norm_by_counting(const FrequencySet& set, const PhaseFunction& phase = {},
                                  const Budget& budget = {})
{
    require(phase.kind == PhaseKind::schrodinger, "L4 counting applies to the Schrodinger phase");
    return std::pow(std::pow(kTwoPi, set.dim() + 1) * resonance_sum(set, budget), 0.25);
}

/// Quadruple count of the indicator of {lo2 <= |k|^2 <= hi2}, using the
/// hyperoctahedral symmetry of the pair-sum s.
inline std::uint64_t radial_quadruple_count(int dim, const RadialBounds& rb, const Budget& budget = {})
{
    if (rb.empty())
        return 0;
    const std::uint64_t n = radial_point_count(dim, rb);
    std::uint64_t group = 1;
    for (int i = 1; i <= dim; ++i)
        group *= 2 * static_cast<std::uint64_t>(i);
    budget.check_pairs(n * n / group, "radial quadruple count");

    const auto orbits = hyperoctahedral_orbits(dim, 4 * rb.hi2);
    const std::int64_t base = 2 * rb.lo2;
    const std::size_t width = static_cast<std::size_t>(2 * (rb.hi2 - rb.lo2) + 1);
    std::vector<std::uint64_t> per_orbit(orbits.size());
    parallel_for_with_state(
        orbits.size(), [&] { return std::vector<std::uint32_t>(width, 0); },
        [&](std::vector<std::uint32_t>& hist, std::size_t o) {
            std::int64_t mn = std::numeric_limits<std::int64_t>::max(), mx = -1;
            for_each_radial_pair(orbits[o].rep, rb, [&](std::int64_t nx, std::int64_t ny) {
                const std::int64_t m = nx + ny - base;
                ++hist[static_cast<std::size_t>(m)];
                mn = std::min(mn, m);
                mx = std::max(mx, m);
            });
            std::uint64_t s = 0;
            for (std::int64_t m = mn; m <= mx; ++m)
            {
                const std::uint64_t r = hist[static_cast<std::size_t>(m)];
                s += r * r;
                hist[static_cast<std::size_t>(m)] = 0;
            }
            per_orbit[o] = s * orbits[o].size;
        });
    std::uint64_t total = 0;
    for (auto s : per_orbit)
        total += s;
    return total;
}

// ---------------------------------------------------------------------------
// Norm dispatch
// ---------------------------------------------------------------------------

struct NormOptions
{
    double oversample = 4.0; // starting factor for non-even exponents
    double tol = 1e-6;       // relative change that stops refinement
    int max_refine = 3;
    bool allow_exact = true; // Plancherel / counting shortcuts
    bool recenter = true;    // Galilean shift of Schrodinger data before gridding
    Budget budget;
};

struct NormResult
{
    double value = 0.0;
    std::string path;       // plancherel | counting | grid
    double tolerance = 0.0; // last relative refinement change (0 when exact)
    GridSpec grid;
};

namespace detail
{
inline bool is_even_integer(double p) { return p >= 2.0 && p <= 64.0 && std::fmod(p, 2.0) == 0.0; }

// Translate by the integer midpoint of the bounding box; Schrodinger norms
// (pure and mixed) are invariant under integer frequency shifts.
inline FrequencySet recentred(const FrequencySet& set)
{
    if (set.empty())
        return set;
    LatticePoint shift(set.dim());
    for (int i = 0; i < set.dim(); ++i)
    {
        std::int64_t lo = set.point(0)[i], hi = lo;
        for (const auto& p : set.points())
        {
            lo = std::min(lo, p[i]);
            hi = std::max(hi, p[i]);
        }
        shift.set(i, -floor_div(lo + hi, 2));
    }
    return set.translated(shift);
}
} // namespace detail

/// ||u||_{L^q_t L^p_x(T^{d+1})} for u = sum a_k e^{i(k.x + sigma phi(k) t)},
/// over the full period. Exact routes when available, otherwise grid
/// quadrature refined by doubling the oversampling factor.
inline NormResult lp_norm(const FrequencySet& set_in, const PhaseFunction& phase, NormSpec spec,
                          const NormOptions& opt = {})
{
    detail::check_norm_spec(spec);
    require(!set_in.empty(), "norm of an empty frequency set");
    const int d = set_in.dim();
    NormResult out;

    if (opt.allow_exact && spec.p == 2.0 && phase.unitary())
    {
        // ||u(t)||_{L^2_x} = (2 pi)^{d/2} ||a||_2 for every t.
        const double slice = std::pow(kTwoPi, 0.5 * d) * set_in.l2();
        out.value = std::isinf(spec.q) ? slice : slice * std::pow(kTwoPi, 1.0 / spec.q);
        out.path = "plancherel";
        return out;
    }
    if (opt.allow_exact && spec.p == 4.0 && spec.q == 4.0 && phase.kind == PhaseKind::schrodinger
        && static_cast<std::uint64_t>(set_in.size()) * set_in.size() <= opt.budget.max_pairs)
    {
        out.value = l4_norm_by_counting(set_in, phase, opt.budget);
        out.path = "counting";
        return out;
    }

    const FrequencySet set =
        (opt.recenter && phase.kind == PhaseKind::schrodinger) ? detail::recentred(set_in) : set_in;
    out.path = "grid";

    // |u|^p is a trigonometric polynomial of p/2 times the bandwidth: one
    // evaluation on a grid oversampled by p/2 is exact.
    // Non-integer temporal frequencies: space stays exact, and Gauss-Legendre
    // panels get 16 nodes per 4 pi of phase (error below 1e-15).
    if (detail::is_even_integer(spec.p) && spec.q == spec.p)
    {
        out.grid = integral_frequencies(set, phase) ? make_grid(set, phase, spec.p / 2.0)
                                                    : make_grid(set, phase, spec.p / 2.0, 4.0 * spec.p);
        out.value = lp_norm_streaming(set, phase, out.grid, spec, opt.budget);
        return out;
    }

    double factor = opt.oversample;
    out.grid = make_grid(set, phase, factor);
    out.value = lp_norm_streaming(set, phase, out.grid, spec, opt.budget);
    out.tolerance = kInf;
    for (int r = 0; r < opt.max_refine; ++r)
    {
        factor *= 2.0;
        GridSpec g = make_grid(set, phase, factor);
        const double v = lp_norm_streaming(set, phase, g, spec, opt.budget);
        out.tolerance = std::abs(v - out.value) / std::max(std::abs(v), 1e-300);
        out.value = v;
        out.grid = g;
        if (out.tolerance < opt.tol)
            break;
    }
    return out;
}

} // namespace zlab
