#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "movframe/grid.hpp"

namespace movframe::fd {

// Second-order central differences. Periodic grids wrap; open grids use the
// one-sided three-point stencils at the two ends. The end stencils are
// written so that reversing the input negates the output bit for bit.

std::vector<double> derivative(std::span<const double> f, double h, Boundary b);
std::vector<double> second_derivative(std::span<const double> f, double h, Boundary b);

/// Fourth-order first derivative (five-point central, five-point one-sided
/// near open ends). Used where derivatives are nested and for post-hoc
/// residual checks.
std::vector<double> derivative4(std::span<const double> f, double h, Boundary b = Boundary::open);

Field2D d_du(const Field2D& f, const Grid1D& u);
Field2D d_dv(const Field2D& f, const Grid1D& v);

/// Cumulative trapezoidal integral, starting at 0.
std::vector<double> cumulative_trapezoid(std::span<const double> f, double h);

/// Maximum of |f(i,j)| over points at least `margin` nodes away from every
/// open boundary. Periodic directions are not trimmed.
double interior_max_abs(const Field2D& f, const Grid1D& u, const Grid1D& v, std::size_t margin);

/// Observed convergence order from residuals at spacing h and h/2.
double convergence_order(double coarse, double fine);

}  // namespace movframe::fd
