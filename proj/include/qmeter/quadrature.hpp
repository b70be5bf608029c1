#pragma once

#include <functional>
#include <span>
#include <vector>

#include "qmeter/types.hpp"

namespace qmeter {

/// Adaptive quadrature of f over [a, b] to absolute tolerance abs_tol.
/// Throws NumericError if the error estimate cannot be pushed below abs_tol.
double integrate(const std::function<double(double)>& f, double a, double b,
                 double abs_tol = 1e-10);

/// Quadrature of an integrand oscillating at angular frequency omega:
/// composite Gauss-Kronrod panels at most half a period wide, with an
/// adaptive fallback if the summed error estimate misses abs_tol.
double integrate_with_frequency(const std::function<double(double)>& f, double a, double b,
                                double omega, double abs_tol = 1e-10);

/// Composite Simpson rule on a uniformly spaced sample (n >= 3).
/// An even sample count is closed with one trapezoid panel at the right end.
double simpson_uniform(std::span<const double> values, double spacing);

/// Composite Simpson rule on an arbitrary monotone grid (piecewise quadratic).
double simpson_sampled(std::span<const double> t, std::span<const double> values);

/// Trapezoid rule on an arbitrary monotone grid.
double trapezoid_sampled(std::span<const double> t, std::span<const double> values);

/// Fourth-order central finite differences on a uniform grid
/// (one-sided second-order stencils at the edges).
std::vector<cplx> derivative_uniform(std::span<const cplx> values, double spacing);

} // namespace qmeter
