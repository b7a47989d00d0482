#pragma once

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "core.hpp"

namespace zlab
{
/// Least-squares line through (log N, log value).
struct ExponentFit
{
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 1.0;
    std::vector<std::pair<double, double>> points; // (N, value)

    double predict(double n) const { return std::exp(intercept + slope * std::log(n)); }
};

/// Values enter through log(v_i / v_0), so scaling every value by a power of
/// two leaves the slope bit-identical.
inline ExponentFit fit_exponent(std::vector<std::pair<double, double>> points)
{
    require(points.size() >= 3, "exponent fit needs at least 3 points");
    for (std::size_t i = 0; i < points.size(); ++i)
    {
        require(points[i].first > 0.0 && std::isfinite(points[i].first), "N must be positive");
        require(points[i].second > 0.0 && std::isfinite(points[i].second),
                "exponent fit needs positive finite values");
        for (std::size_t j = 0; j < i; ++j)
            require(points[i].first != points[j].first, "Ns distinct");
    }
    const std::size_t n = points.size();
    const double v0 = points[0].second;
    std::vector<double> x(n), y(n);
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i)
    {
        x[i] = std::log(points[i].first);
        y[i] = std::log(points[i].second / v0);
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < n; ++i)
    {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    ExponentFit f;
    f.slope = sxy / sxx;
    f.intercept = std::log(v0) + my - f.slope * mx;
    double sse = 0.0;
    for (std::size_t i = 0; i < n; ++i)
    {
        const double r = y[i] - my - f.slope * (x[i] - mx);
        sse += r * r;
    }
    f.r_squared = syy > 0.0 ? 1.0 - sse / syy : 1.0;
    f.points = std::move(points);
    return f;
}

} // namespace zlab
