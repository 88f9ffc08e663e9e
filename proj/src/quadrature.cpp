// SPDX-License-Identifier: Apache-2.0
//! \file quadrature.cpp
#include "uvnlos/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <utility>
#include <stdexcept>

#include "uvnlos/common.hpp"

namespace uvnlos
{
namespace
{
//! P_n(x) and P_n'(x) by the three-term recurrence.
std::pair<double, double> legendre(int n, double x)
{
    double p0 = 1;
    double p1 = x;
    for (int k = 2; k <= n; ++k)
    {
        double const p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    return {p1, n * (x * p1 - p0) / (x * x - 1)};
}

QuadRule compute_gauss_legendre(int n)
{
    QuadRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    for (int i = 0; i < (n + 1) / 2; ++i)
    {
        double x = std::cos(pi * (i + 0.75) / (n + 0.5));
        for (int iter = 0; iter < 100; ++iter)
        {
            auto const [p, dp] = legendre(n, x);
            double const dx = p / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16)
                break;
        }
        double const dp = legendre(n, x).second;
        double const w = 2 / ((1 - x * x) * dp * dp);
        rule.nodes[i] = -x;
        rule.nodes[n - 1 - i] = x;
        rule.weights[i] = w;
        rule.weights[n - 1 - i] = w;
    }
    if (n % 2 == 1)
        rule.nodes[n / 2] = 0;
    return rule;
}
}  // namespace

QuadRule const& gauss_legendre(int n)
{
    if (n < 1)
        throw DomainError("gauss_legendre: n must be >= 1");
    static std::mutex mutex;
    static std::map<int, QuadRule> cache;
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find(n);
    if (it == cache.end())
    {
        if (n == 1)
            it = cache.emplace(n, QuadRule{{0.0}, {2.0}}).first;
        else
            it = cache.emplace(n, compute_gauss_legendre(n)).first;
    }
    return it->second;
}

QuadRule gauss_on(double a, double b, int n)
{
    QuadRule const& ref = gauss_legendre(n);
    QuadRule out;
    out.nodes.resize(n);
    out.weights.resize(n);
    double const half = 0.5 * (b - a);
    double const mid = 0.5 * (a + b);
    for (int i = 0; i < n; ++i)
    {
        out.nodes[i] = mid + half * ref.nodes[i];
        out.weights[i] = half * ref.weights[i];
    }
    return out;
}

QuadRule cosine_mapped(double a, double b, int n)
{
    QuadRule const& ref = gauss_legendre(n);
    QuadRule out;
    out.nodes.resize(n);
    out.weights.resize(n);
    double const half = 0.5 * (b - a);
    for (int i = 0; i < n; ++i)
    {
        double const theta = 0.5 * pi * (ref.nodes[i] + 1);
        out.nodes[i] = a + half * (1 - std::cos(theta));
        out.weights[i] = 0.5 * pi * ref.weights[i] * half * std::sin(theta);
    }
    return out;
}

QuadRule log_mapped(double a, double b, double scale, int n)
{
    if (!(scale > 0))
        throw DomainError("log_mapped: scale must be positive");
    double const s_max = std::log1p((b - a) / scale);
    QuadRule const& ref = gauss_legendre(n);
    QuadRule out;
    out.nodes.resize(n);
    out.weights.resize(n);
    double const half = 0.5 * s_max;
    for (int i = 0; i < n; ++i)
    {
        double const s = half * (ref.nodes[i] + 1);
        double const e = std::exp(s);
        out.nodes[i] = a + scale * (e - 1);
        out.weights[i] = half * ref.weights[i] * scale * e;
    }
    return out;
}

}  // namespace uvnlos
