// SPDX-License-Identifier: Apache-2.0
//! \file uvnlos/quadrature.hpp
//! One-dimensional Gauss-Legendre rules and the interval maps used by the
//! energy cubatures.
#pragma once

#include <vector>

namespace uvnlos
{
//! Nodes and weights of a rule on a given interval.
struct QuadRule
{
    std::vector<double> nodes;
    std::vector<double> weights;

    std::size_t size() const { return nodes.size(); }
};

//! n-point Gauss-Legendre rule on [-1, 1], nodes ascending.
QuadRule const& gauss_legendre(int n);

//! Gauss-Legendre mapped affinely onto [a, b].
QuadRule gauss_on(double a, double b, int n);

//! Gauss-Legendre in theta for x = a + (b - a)(1 - cos theta)/2. The
//! endpoint clustering absorbs square-root behaviour at either end.
QuadRule cosine_mapped(double a, double b, int n);

//! Gauss-Legendre in s for x = a + scale (exp(s) - 1), s in
//! [0, log(1 + (b - a)/scale)]. Suited to integrands decaying like
//! exp(-(x - a)/scale) on long intervals.
QuadRule log_mapped(double a, double b, double scale, int n);

}  // namespace uvnlos
