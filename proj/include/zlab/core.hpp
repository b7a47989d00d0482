#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace zlab
{
inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Failure categories. The CLI maps these onto exit codes.
enum class Errc
{
    invalid_argument,
    unbounded,
    aliasing,
    grid_too_large,
    budget_exceeded,
    blowup,
    parse,
};

class Error : public std::runtime_error
{
public:
    Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}

    Errc code() const noexcept { return code_; }

    bool is_budget() const noexcept
    {
        return code_ == Errc::budget_exceeded || code_ == Errc::grid_too_large;
    }

private:
    Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) { throw Error(code, what); }

inline void require(bool cond, const std::string& what)
{
    if (!cond)
        fail(Errc::invalid_argument, what);
}

/// Resource caps shared by every experiment. A zero cap refuses all work.
struct Budget
{
    std::uint64_t max_pairs = 20'000'000'000ull;
    std::uint64_t max_grid_bytes = 1ull << 30;
    double max_seconds = 0.0; // 0 = unlimited

    void check_pairs(std::uint64_t pairs, const std::string& what) const
    {
        if (pairs > max_pairs)
            fail(Errc::budget_exceeded, "counting budget exceeded: " + what + " needs "
                                            + std::to_string(pairs) + " pair visits, cap "
                                            + std::to_string(max_pairs));
    }

    void check_grid(std::uint64_t bytes, const std::string& what) const
    {
        if (bytes > max_grid_bytes)
            fail(Errc::grid_too_large, "grid too large: " + what + " needs "
                                           + std::to_string(bytes) + " bytes, cap "
                                           + std::to_string(max_grid_bytes));
    }
};

// ---------------------------------------------------------------------------
// Worker pool sizing. ZLAB_THREADS overrides hardware parallelism.
// ---------------------------------------------------------------------------
namespace detail
{
inline std::atomic<unsigned>& worker_override()
{
    static std::atomic<unsigned> n{0};
    return n;
}
} // namespace detail

inline unsigned worker_count()
{
    if (unsigned n = detail::worker_override().load(); n != 0)
        return n;
    if (const char* env = std::getenv("ZLAB_THREADS"))
    {
        int v = std::atoi(env);
        if (v > 0)
            return static_cast<unsigned>(v);
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

/// 0 restores the environment/hardware default.
inline void set_worker_count(unsigned n) { detail::worker_override().store(n); }

/// Runs fn(state, i) for i in [0, n). Each worker owns one state built by
/// make_state(). Results must be written to per-index slots so that the
/// outcome does not depend on the number of workers.
template <class MakeState, class Fn>
void parallel_for_with_state(std::size_t n, MakeState&& make_state, Fn&& fn)
{
    const std::size_t workers = std::min<std::size_t>(worker_count(), n);
    if (workers <= 1)
    {
        auto state = make_state();
        for (std::size_t i = 0; i < n; ++i)
            fn(state, i);
        return;
    }

    std::atomic<std::size_t> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    auto body = [&] {
        try
        {
            auto state = make_state();
            for (;;)
            {
                std::size_t i = next.fetch_add(1);
                if (i >= n)
                    break;
                fn(state, i);
            }
        }
        catch (...)
        {
            std::lock_guard lock(error_mutex);
            if (!first_error)
                first_error = std::current_exception();
            next.store(n);
        }
    };

    std::vector<std::thread> pool;
    pool.reserve(workers - 1);
    for (std::size_t w = 1; w < workers; ++w)
        pool.emplace_back(body);
    body();
    for (auto& th : pool)
        th.join();
    if (first_error)
        std::rethrow_exception(first_error);
}

template <class Fn>
void parallel_for(std::size_t n, Fn&& fn)
{
    parallel_for_with_state(
        n, [] { return 0; }, [&](int&, std::size_t i) { fn(i); });
}

// ---------------------------------------------------------------------------
// Seeded randomness. Streams are derived from (seed, index) so that a trial
// draws the same numbers no matter which worker runs it.
// ---------------------------------------------------------------------------
inline std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

inline std::mt19937_64 make_rng(std::uint64_t seed, std::uint64_t stream = 0)
{
    return std::mt19937_64(splitmix64(seed ^ splitmix64(stream + 0x632be59bd9b4e019ull)));
}

class Stopwatch
{
public:
    Stopwatch() : start_(std::chrono::steady_clock::now()) {}

    double seconds() const
    {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_;
};

/// Exact floor(sqrt(n)) for n >= 0.
inline std::int64_t isqrt(std::int64_t n)
{
    if (n <= 0)
        return 0;
    auto r = static_cast<std::int64_t>(std::sqrt(static_cast<double>(n)));
    while (r * r > n)
        --r;
    while ((r + 1) * (r + 1) <= n)
        ++r;
    return r;
}

/// Smallest r >= 0 with r*r >= n.
inline std::int64_t isqrt_ceil(std::int64_t n)
{
    if (n <= 0)
        return 0;
    std::int64_t r = isqrt(n);
    return r * r == n ? r : r + 1;
}

inline std::int64_t floor_div(std::int64_t a, std::int64_t b)
{
    std::int64_t q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0)))
        --q;
    return q;
}

} // namespace zlab
