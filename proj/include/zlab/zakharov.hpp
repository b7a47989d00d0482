#pragma once

#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "fft.hpp"
#include "lattice.hpp"
#include "report.hpp"

// First-order Zakharov system on T^d, w = n + i<grad>^{-1} n_t:
//   i u_t + Delta u = n u,                     n = (w + conj w)/2,
//   i w_t - <grad> w = -<grad>^{-1} Delta |u|^2 - <grad>^{-1} n.
// Strang splitting: exact linear half-steps e^{-i|k|^2 dt/2}, e^{-i<k> dt/2}
// around an explicit-midpoint step of
//   u_t = -i n u,   w^_t = -i <k>^{-1} (|k|^2 (|u|^2)^ - n^).
// The second component is conjugate-odd, so n is constant over that step.

namespace zlab
{
struct SolverState
{
    int dim = 2;
    std::vector<int> mx;     // points per axis
    std::vector<cplx> uhat;  // FFT order, axis 0 slowest
    std::vector<cplx> what;
    double t = 0.0;
    bool zero_mean_velocity = true; // n1^(0) == 0 in the initial data

    std::size_t size() const { return uhat.size(); }
};

struct ConservedReport
{
    double mass = 0.0;
    double energy = 0.0;
    double mass_drift = 0.0;   // relative to the supplied baseline
    double energy_drift = 0.0;
};

struct SolverOptions
{
    bool coupling = true;   // n u and Delta |u|^2
    bool correction = true; // -<grad>^{-1} n
    bool dealias = true;
    int refresh_every = 50; // steps between stability-bound updates
    double safety = 0.5;    // dt <= safety / (1 + max |n|)
};

/// Mode geometry of an M_1 x ... x M_d grid in FFT order.
class SpectralGrid
{
public:
    SpectralGrid() = default;

    explicit SpectralGrid(std::vector<int> mx) : mx_(std::move(mx))
    {
        require(!mx_.empty() && static_cast<int>(mx_.size()) <= kMaxDim, "grid dimension must be in 1..4");
        for (int m : mx_)
            require(m >= 4, "grid needs at least 4 points per axis");
        std::size_t n = 1;
        for (int m : mx_)
            n *= static_cast<std::size_t>(m);
        k2_.resize(n);
        flip_.resize(n);
        mask_.resize(n);
        const int d = dim();
        std::vector<int> j(d, 0);
        for (std::size_t idx = 0; idx < n; ++idx)
        {
            std::int64_t s = 0;
            bool keep = true;
            std::size_t f = 0;
            for (int a = 0; a < d; ++a)
            {
                const std::int64_t k = wavenumber(a, j[a]);
                s += k * k;
                keep = keep && 3 * std::abs(k) < mx_[a];
                f = f * static_cast<std::size_t>(mx_[a]) + static_cast<std::size_t>((mx_[a] - j[a]) % mx_[a]);
            }
            k2_[idx] = s;
            flip_[idx] = f;
            mask_[idx] = keep;
            for (int a = d - 1; a >= 0; --a)
            {
                if (++j[a] < mx_[a])
                    break;
                j[a] = 0;
            }
        }
    }

    int dim() const { return static_cast<int>(mx_.size()); }
    const std::vector<int>& shape() const { return mx_; }
    std::size_t size() const { return k2_.size(); }

    /// Signed wavenumber of index j on an axis with M points.
    std::int64_t wavenumber(int axis, int j) const { return j <= mx_[axis] / 2 ? j : j - mx_[axis]; }

    std::int64_t k2(std::size_t i) const { return k2_[i]; }
    double bracket(std::size_t i) const { return std::sqrt(1.0 + static_cast<double>(k2_[i])); }
    std::size_t flip(std::size_t i) const { return flip_[i]; } // index of -k
    bool kept(std::size_t i) const { return mask_[i] != 0; }    // 2/3 rule: 3|k_a| < M_a

    /// Index of k, or npos when k is outside the grid's wavenumber range.
    std::size_t index(const LatticePoint& k) const
    {
        std::size_t f = 0;
        for (int a = 0; a < dim(); ++a)
        {
            const std::int64_t m = mx_[a];
            if (k[a] > m / 2 || k[a] < m / 2 - m + 1)
                return npos;
            f = f * static_cast<std::size_t>(m) + static_cast<std::size_t>(((k[a] % m) + m) % m);
        }
        return f;
    }

    static constexpr std::size_t npos = static_cast<std::size_t>(-1);

private:
    std::vector<int> mx_;
    std::vector<std::int64_t> k2_;
    std::vector<std::size_t> flip_;
    std::vector<unsigned char> mask_;
};

namespace detail
{
inline std::vector<cplx> embed(const FrequencySet& set, const SpectralGrid& g, const char* what)
{
    std::vector<cplx> out(g.size());
    if (set.empty())
        return out;
    require(set.dim() == g.dim(), std::string(what) + ": dimension mismatch");
    for (std::size_t i = 0; i < set.size(); ++i)
    {
        const std::size_t idx = g.index(set.point(i));
        require(idx != SpectralGrid::npos, std::string(what) + ": frequency outside the grid");
        out[idx] += set.coeff(i);
    }
    return out;
}

inline bool conjugate_even(const std::vector<cplx>& a, const SpectralGrid& g)
{
    double scale = 0.0, defect = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
    {
        scale = std::max(scale, std::abs(a[i]));
        defect = std::max(defect, std::abs(a[i] - std::conj(a[g.flip(i)])));
    }
    return defect <= 1e-12 * std::max(scale, 1.0);
}
} // namespace detail

/// w^ = n0^ + i <k>^{-1} n1^. n0, n1 must be conjugate-even. Modes outside
/// the 2/3 mask are dropped so the state starts alias-free.
inline SolverState init_state(const FrequencySet& u0, const FrequencySet& n0, const FrequencySet& n1,
                              const std::vector<int>& mx, bool dealias = true)
{
    const SpectralGrid g(mx);
    SolverState s;
    s.dim = g.dim();
    s.mx = mx;
    s.uhat = detail::embed(u0, g, "u0");
    const auto a0 = detail::embed(n0, g, "n0");
    const auto a1 = detail::embed(n1, g, "n1");
    if (!detail::conjugate_even(a0, g) || !detail::conjugate_even(a1, g))
        fail(Errc::invalid_argument, "n must be real: n0 and n1 spectra must be conjugate-even");
    s.what.resize(g.size());
    for (std::size_t i = 0; i < g.size(); ++i)
        s.what[i] = a0[i] + cplx(0.0, 1.0) * a1[i] / g.bracket(i);
    s.zero_mean_velocity = std::abs(a1[0]) <= 1e-12;
    if (dealias)
        for (std::size_t i = 0; i < g.size(); ++i)
            if (!g.kept(i))
                s.uhat[i] = s.what[i] = 0.0;
    return s;
}

/// n^ = (w^(k) + conj w^(-k)) / 2.
inline std::vector<cplx> density_hat(const SolverState& s, const SpectralGrid& g)
{
    std::vector<cplx> n(s.size());
    for (std::size_t i = 0; i < n.size(); ++i)
        n[i] = 0.5 * (s.what[i] + std::conj(s.what[g.flip(i)]));
    return n;
}

/// (n_t)^ = <k> (w^(k) - conj w^(-k)) / (2i).
inline std::vector<cplx> velocity_hat(const SolverState& s, const SpectralGrid& g)
{
    std::vector<cplx> v(s.size());
    for (std::size_t i = 0; i < v.size(); ++i)
        v[i] = g.bracket(i) * (s.what[i] - std::conj(s.what[g.flip(i)])) / cplx(0.0, 2.0);
    return v;
}

class ZakharovSolver
{
public:
    explicit ZakharovSolver(std::vector<int> mx, SolverOptions opt = {})
        : grid_(std::move(mx)), opt_(opt), fwd_(grid_.shape(), -1), bwd_(grid_.shape(), +1)
    {
    }

    const SpectralGrid& grid() const { return grid_; }
    const SolverOptions& options() const { return opt_; }

    /// safety / (1 + max_x |n(x)|).
    double stability_bound(const SolverState& s)
    {
        synthesize(density_hat(s, grid_));
        double m = 0.0;
        for (std::size_t i = 0; i < bwd_.size(); ++i)
            m = std::max(m, std::abs(bwd_.data()[i].real()));
        return opt_.safety / (1.0 + m);
    }

    /// One Strang step; negative dt runs backwards.
    void step(SolverState& s, double dt)
    {
        check_state(s);
        if (steps_since_refresh_ == 0 || steps_since_refresh_ >= opt_.refresh_every)
        {
            bound_ = stability_bound(s);
            steps_since_refresh_ = 0;
        }
        if (std::abs(dt) > bound_)
            fail(Errc::invalid_argument, "dt " + format_real(dt) + " exceeds the stability bound "
                                             + format_real(bound_));
        ++steps_since_refresh_;

        linear(s, 0.5 * dt);
        if (opt_.coupling || opt_.correction)
            nonlinear(s, dt);
        linear(s, 0.5 * dt);
        s.t += dt;

        for (std::size_t i = 0; i < s.size(); ++i)
            if (!std::isfinite(s.uhat[i].real()) || !std::isfinite(s.uhat[i].imag())
                || !std::isfinite(s.what[i].real()) || !std::isfinite(s.what[i].imag()))
                fail(Errc::blowup, "blowup or instability at t=" + format_real(s.t));
    }

    /// Mass (2 pi)^d sum |u^|^2 and energy
    /// (2 pi)^d [sum |k|^2 |u^|^2 + (sum |n^|^2 + sum_{k!=0} |n_t^|^2/|k|^2)/2] + int n |u|^2.
    ConservedReport conserved(const SolverState& s, bool with_energy = true)
    {
        check_state(s);
        const double vol = std::pow(kTwoPi, grid_.dim());
        ConservedReport r;
        double mass = 0.0, grad = 0.0;
        for (std::size_t i = 0; i < s.size(); ++i)
        {
            const double a = std::norm(s.uhat[i]);
            mass += a;
            grad += static_cast<double>(grid_.k2(i)) * a;
        }
        r.mass = vol * mass;
        if (!with_energy)
            return r;
        if (!s.zero_mean_velocity)
            fail(Errc::invalid_argument, "energy needs zero-mean initial velocity n1^(0) = 0");
        const auto nh = density_hat(s, grid_);
        const auto vh = velocity_hat(s, grid_);
        double pot = 0.0, kin = 0.0;
        for (std::size_t i = 0; i < s.size(); ++i)
        {
            pot += std::norm(nh[i]);
            if (grid_.k2(i) != 0)
                kin += std::norm(vh[i]) / static_cast<double>(grid_.k2(i));
        }
        // int n |u|^2 on the grid; exact for masked fields.
        std::vector<double> n(s.size());
        synthesize(nh);
        for (std::size_t i = 0; i < n.size(); ++i)
            n[i] = bwd_.data()[i].real();
        synthesize(s.uhat);
        double coupling = 0.0;
        for (std::size_t i = 0; i < n.size(); ++i)
            coupling += n[i] * std::norm(bwd_.data()[i]);
        coupling *= vol / static_cast<double>(s.size());
        r.energy = vol * (grad + 0.5 * (pot + kin)) + coupling;
        return r;
    }

    ConservedReport drift(const SolverState& s, const ConservedReport& base, bool with_energy = true)
    {
        ConservedReport r = conserved(s, with_energy);
        r.mass_drift = base.mass != 0.0 ? std::abs(r.mass - base.mass) / std::abs(base.mass) : std::abs(r.mass);
        if (with_energy)
            r.energy_drift =
                base.energy != 0.0 ? std::abs(r.energy - base.energy) / std::abs(base.energy) : std::abs(r.energy);
        return r;
    }

    /// max |n^(k) - conj n^(-k)| of the recovered density (0 for a consistent state).
    double reality_defect(const SolverState& s) const
    {
        const auto nh = density_hat(s, grid_);
        double m = 0.0;
        for (std::size_t i = 0; i < nh.size(); ++i)
            m = std::max(m, std::abs(nh[i] - std::conj(nh[grid_.flip(i)])));
        return m;
    }

private:
    void check_state(const SolverState& s) const
    {
        require(s.mx == grid_.shape() && s.uhat.size() == grid_.size() && s.what.size() == grid_.size(),
                "state does not match the solver grid");
    }

    void linear(SolverState& s, double h) const
    {
        for (std::size_t i = 0; i < s.size(); ++i)
        {
            s.uhat[i] *= std::polar(1.0, -h * static_cast<double>(grid_.k2(i)));
            s.what[i] *= std::polar(1.0, -h * grid_.bracket(i));
        }
    }

    // bwd_ <- values of the spectral array a
    void synthesize(const std::vector<cplx>& a)
    {
        std::copy(a.begin(), a.end(), bwd_.data());
        bwd_.execute();
    }

    // fwd_ already holds values; out <- masked coefficients
    void analyse(std::vector<cplx>& out)
    {
        fwd_.execute();
        const double inv = 1.0 / static_cast<double>(fwd_.size());
        for (std::size_t i = 0; i < out.size(); ++i)
            out[i] = (opt_.dealias && !grid_.kept(i)) ? cplx(0.0) : fwd_.data()[i] * inv;
    }

    // F(u) with n fixed: fu = -i (n u)^, fw = -i <k>^{-1} (|k|^2 (|u|^2)^ - n^).
    void rhs(const std::vector<cplx>& uh, const std::vector<double>& n, const std::vector<cplx>& nh,
             std::vector<cplx>& fu, std::vector<cplx>& fw)
    {
        const cplx mi(0.0, -1.0);
        std::fill(fu.begin(), fu.end(), cplx(0.0));
        std::vector<cplx> rho(uh.size());
        if (opt_.coupling)
        {
            synthesize(uh);
            for (std::size_t i = 0; i < n.size(); ++i)
                fwd_.data()[i] = n[i] * bwd_.data()[i];
            analyse(fu);
            for (auto& v : fu)
                v *= mi;
            for (std::size_t i = 0; i < n.size(); ++i)
                fwd_.data()[i] = std::norm(bwd_.data()[i]);
            analyse(rho);
        }
        for (std::size_t i = 0; i < fw.size(); ++i)
        {
            cplx src = opt_.coupling ? static_cast<double>(grid_.k2(i)) * rho[i] : cplx(0.0);
            if (opt_.correction)
                src -= nh[i];
            fw[i] = mi * src / grid_.bracket(i);
        }
    }

    void nonlinear(SolverState& s, double dt)
    {
        const auto nh = density_hat(s, grid_);
        std::vector<double> n(s.size());
        synthesize(nh);
        for (std::size_t i = 0; i < n.size(); ++i)
            n[i] = bwd_.data()[i].real();

        std::vector<cplx> fu(s.size()), fw(s.size()), um(s.size());
        rhs(s.uhat, n, nh, fu, fw);
        for (std::size_t i = 0; i < s.size(); ++i)
            um[i] = s.uhat[i] + 0.5 * dt * fu[i];
        rhs(um, n, nh, fu, fw);
        for (std::size_t i = 0; i < s.size(); ++i)
        {
            s.uhat[i] += dt * fu[i];
            s.what[i] += dt * fw[i];
        }
    }

    SpectralGrid grid_;
    SolverOptions opt_;
    SpatialTransform fwd_, bwd_;
    double bound_ = 0.0;
    int steps_since_refresh_ = 0;
};

// ---------------------------------------------------------------------------
// Initial data and runs
// ---------------------------------------------------------------------------

struct ZakharovData
{
    FrequencySet u0, n0, n1;
};

/// Gaussian-damped random data on |k| <= kmax: complex u0, real n0 and n1
/// (conjugate-even spectra), n1^(0) = 0.
inline ZakharovData random_zakharov_data(int d, std::uint64_t seed, std::int64_t kmax = 4, double amplitude = 0.5)
{
    const FrequencySet modes = enumerate(Ball{std::vector<double>(static_cast<std::size_t>(d), 0.0),
                                              static_cast<double>(kmax)},
                                         d);
    auto rng = make_rng(seed, 0);
    std::normal_distribution<double> nd(0.0, 1.0);
    auto damp = [&](const LatticePoint& k) { return amplitude * std::exp(-0.125 * static_cast<double>(k.norm2())); };
    std::vector<cplx> u(modes.size());
    for (std::size_t i = 0; i < modes.size(); ++i)
    {
        const double re = nd(rng);
        u[i] = damp(modes.point(i)) * cplx(re, nd(rng));
    }
    // real fields: draw on the lexicographically positive half, mirror
    auto real_field = [&](bool zero_mean) {
        std::vector<cplx> c(modes.size());
        for (std::size_t i = 0; i < modes.size(); ++i)
        {
            const auto& k = modes.point(i);
            const LatticePoint nk = -k;
            if (nk < k)
                continue;
            const double re = nd(rng);
            const double im = nd(rng);
            cplx v = damp(k) * cplx(re, k == nk ? 0.0 : im);
            if (k == nk && zero_mean)
                v = 0.0;
            c[i] = v;
        }
        for (std::size_t i = 0; i < modes.size(); ++i)
        {
            const auto& k = modes.point(i);
            const LatticePoint nk = -k;
            if (nk < k)
            {
                // modes is lexicographic and symmetric: -k sits at the mirrored index
                c[i] = std::conj(c[modes.size() - 1 - i]);
            }
        }
        return c;
    };
    ZakharovData z;
    z.u0 = modes.with_coeffs(std::move(u));
    z.n0 = modes.with_coeffs(real_field(false));
    z.n1 = modes.with_coeffs(real_field(true));
    return z;
}

/// u0 = eps e^{i x_1}, n = 0.
inline ZakharovData single_mode_data(int d, double eps)
{
    LatticePoint e(d);
    e.set(0, 1);
    ZakharovData z;
    z.u0 = FrequencySet(d, {e}, {cplx(eps)});
    z.n0 = FrequencySet(d, {}, {});
    z.n1 = FrequencySet(d, {}, {});
    return z;
}

struct ZakharovRunConfig
{
    int d = 2;
    int grid = 64;
    double dt = 1e-3;
    int steps = 200;
    int report_every = 20;
    std::string data_kind = "random"; // random | single_mode | file
    std::uint64_t seed = 0;
    std::string u0_file, n0_file, n1_file;
    std::string snapshot_file; // final u^ in the text format, optional
};

struct ZakharovRunResult
{
    double max_mass_drift = 0.0;
    double max_energy_drift = 0.0;
    SolverState final_state;
    Outcome outcome;
};

inline ZakharovData load_zakharov_data(const ZakharovRunConfig& c)
{
    if (c.data_kind == "random")
        return random_zakharov_data(c.d, c.seed);
    if (c.data_kind == "single_mode")
        return single_mode_data(c.d, 0.1);
    if (c.data_kind == "file")
    {
        auto load = [&](const std::string& path) {
            if (path.empty())
                return FrequencySet(c.d, {}, {});
            std::ifstream is(path);
            if (!is)
                fail(Errc::parse, "cannot open " + path);
            return read_text(is);
        };
        return {load(c.u0_file), load(c.n0_file), load(c.n1_file)};
    }
    fail(Errc::invalid_argument, "unknown data kind '" + c.data_kind + "'");
}

/// Time series of mass and energy with drifts relative to t = 0.
inline ZakharovRunResult zakharov_run(const ZakharovRunConfig& c, const Budget& budget = {})
{
    require(c.d >= 1 && c.d <= 3, "zakharov runs support d = 1..3");
    require(c.steps >= 0 && c.report_every >= 1, "steps >= 0 and report_every >= 1 required");
    const std::vector<int> mx(static_cast<std::size_t>(c.d), c.grid);
    std::uint64_t cells = 1;
    for (int m : mx)
        cells *= static_cast<std::uint64_t>(m);
    budget.check_grid(cells * sizeof(cplx) * 12, "zakharov solver arrays");

    const ZakharovData z = load_zakharov_data(c);
    ZakharovRunResult res;
    SolverState s = init_state(z.u0, z.n0, z.n1, mx);
    ZakharovSolver solver(mx);
    const ConservedReport base = solver.conserved(s);
    auto& out = res.outcome;
    out.table.header = {"step", "t", "mass", "energy", "mass_drift", "energy_drift"};
    auto record = [&](int k) {
        const ConservedReport r = solver.drift(s, base);
        res.max_mass_drift = std::max(res.max_mass_drift, r.mass_drift);
        res.max_energy_drift = std::max(res.max_energy_drift, r.energy_drift);
        out.table.add({cell(k), cell(s.t), cell(r.mass), cell(r.energy), cell(r.mass_drift), cell(r.energy_drift)});
    };
    record(0);
    for (int k = 1; k <= c.steps; ++k)
    {
        solver.step(s, c.dt);
        if (k % c.report_every == 0 || k == c.steps)
            record(k);
    }
    if (!c.snapshot_file.empty())
    {
        std::vector<LatticePoint> pts;
        std::vector<cplx> co;
        const auto& g = solver.grid();
        for (std::size_t i = 0; i < s.size(); ++i)
            if (s.uhat[i] != cplx(0.0))
            {
                LatticePoint k(c.d);
                std::size_t rem = i;
                for (int a = c.d - 1; a >= 0; --a)
                {
                    k.set(a, g.wavenumber(a, static_cast<int>(rem % static_cast<std::size_t>(mx[a]))));
                    rem /= static_cast<std::size_t>(mx[a]);
                }
                pts.push_back(k);
                co.push_back(s.uhat[i]);
            }
        std::ofstream os(c.snapshot_file);
        if (!os)
            fail(Errc::parse, "cannot write " + c.snapshot_file);
        write_text(os, FrequencySet(c.d, std::move(pts), std::move(co)));
    }
    out.summary["max_mass_drift"] = res.max_mass_drift;
    out.summary["max_energy_drift"] = res.max_energy_drift;
    out.summary["mass0"] = base.mass;
    out.summary["energy0"] = base.energy;
    res.final_state = std::move(s);
    return res;
}

} // namespace zlab
