#pragma once

#include <fftw3.h>

#include <complex>
#include <cstring>
#include <mutex>
#include <numeric>
#include <vector>

#include "core.hpp"

namespace zlab
{
namespace detail
{
// The FFTW planner is not re-entrant; execution on distinct plans is.
inline std::mutex& fftw_planner_mutex()
{
    static std::mutex m;
    return m;
}
} // namespace detail

/// In-place multi-dimensional complex DFT on a row-major array (axis 0
/// slowest). Sign +1 synthesises values from coefficients,
/// out[j] = sum_k in[k] exp(+2 pi i j.k / M); sign -1 is the unnormalised
/// analysis transform.
class SpatialTransform
{
public:
    SpatialTransform(std::vector<int> shape, int sign) : shape_(std::move(shape))
    {
        require(!shape_.empty(), "transform needs at least one axis");
        size_ = std::accumulate(shape_.begin(), shape_.end(), std::size_t{1},
                                [](std::size_t a, int b) { return a * static_cast<std::size_t>(b); });
        buf_ = fftw_alloc_complex(size_);
        if (!buf_)
            fail(Errc::grid_too_large, "fftw allocation failed");
        std::lock_guard lock(detail::fftw_planner_mutex());
        plan_ = fftw_plan_dft(static_cast<int>(shape_.size()), shape_.data(), buf_, buf_,
                              sign > 0 ? FFTW_BACKWARD : FFTW_FORWARD, FFTW_ESTIMATE);
    }

    SpatialTransform(const SpatialTransform&) = delete;
    SpatialTransform& operator=(const SpatialTransform&) = delete;

    SpatialTransform(SpatialTransform&& o) noexcept
        : shape_(std::move(o.shape_)), size_(o.size_), buf_(o.buf_), plan_(o.plan_)
    {
        o.buf_ = nullptr;
        o.plan_ = nullptr;
    }

    ~SpatialTransform()
    {
        std::lock_guard lock(detail::fftw_planner_mutex());
        if (plan_)
            fftw_destroy_plan(plan_);
        if (buf_)
            fftw_free(buf_);
    }

    std::complex<double>* data() noexcept { return reinterpret_cast<std::complex<double>*>(buf_); }
    const std::complex<double>* data() const noexcept
    {
        return reinterpret_cast<const std::complex<double>*>(buf_);
    }
    std::size_t size() const noexcept { return size_; }
    const std::vector<int>& shape() const noexcept { return shape_; }

    void zero() noexcept { std::memset(static_cast<void*>(buf_), 0, size_ * sizeof(fftw_complex)); }
    void execute() noexcept { fftw_execute(plan_); }

private:
    std::vector<int> shape_;
    std::size_t size_ = 0;
    fftw_complex* buf_ = nullptr;
    fftw_plan plan_ = nullptr;
};

/// Smallest n >= x whose prime factors are all in {2, 3, 5, 7}.
inline int fft_friendly_size(double x)
{
    int n = std::max(1, static_cast<int>(std::ceil(x - 1e-9)));
    for (;; ++n)
    {
        int m = n;
        for (int p : {2, 3, 5, 7})
            while (m % p == 0)
                m /= p;
        if (m == 1)
            return n;
    }
}

} // namespace zlab
