#pragma once

#include <cmath>
#include <vector>

#include "core.hpp"

namespace zlab
{
struct QuadratureRule
{
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// n-point Gauss-Legendre rule on [-1, 1] (Newton iteration on P_n).
inline QuadratureRule gauss_legendre(int n)
{
    require(n >= 1, "Gauss-Legendre order must be >= 1");
    QuadratureRule r;
    r.nodes.resize(n);
    r.weights.resize(n);
    for (int i = 0; i < (n + 1) / 2; ++i)
    {
        double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it)
        {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k)
            {
                double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = pk;
            }
            double pn = n == 1 ? x : p1;
            double pn1 = n == 1 ? 1.0 : p0;
            dp = n * (x * pn - pn1) / (x * x - 1.0);
            double dx = pn / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16)
                break;
        }
        double w = 2.0 / ((1.0 - x * x) * dp * dp);
        r.nodes[i] = -x;
        r.nodes[n - 1 - i] = x;
        r.weights[i] = w;
        r.weights[n - 1 - i] = w;
    }
    if (n % 2 == 1)
        r.nodes[n / 2] = 0.0;
    return r;
}

/// Composite Gauss-Legendre on [a, b] with equal panels.
inline QuadratureRule composite_gauss_legendre(double a, double b, int panels, int order)
{
    require(panels >= 1, "need at least one panel");
    const QuadratureRule base = gauss_legendre(order);
    QuadratureRule r;
    const double h = (b - a) / panels;
    r.nodes.reserve(static_cast<std::size_t>(panels) * order);
    r.weights.reserve(static_cast<std::size_t>(panels) * order);
    for (int p = 0; p < panels; ++p)
    {
        const double mid = a + (p + 0.5) * h;
        for (int i = 0; i < order; ++i)
        {
            r.nodes.push_back(mid + 0.5 * h * base.nodes[i]);
            r.weights.push_back(0.5 * h * base.weights[i]);
        }
    }
    return r;
}

} // namespace zlab
