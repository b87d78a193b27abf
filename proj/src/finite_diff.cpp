#include "movframe/finite_diff.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>

namespace movframe::fd {

std::vector<double> derivative(std::span<const double> f, double h, Boundary b)
{
    const std::size_t n = f.size();
    std::vector<double> out(n, 0.0);
    if (n < 3) return out;
    const double inv = 1.0 / (2.0 * h);
    for (std::size_t i = 1; i + 1 < n; ++i) out[i] = (f[i + 1] - f[i - 1]) * inv;
    if (b == Boundary::periodic) {
        out[0] = (f[1] - f[n - 1]) * inv;
        out[n - 1] = (f[0] - f[n - 2]) * inv;
    } else {
        out[0] = ((-3.0 * f[0] + 4.0 * f[1]) - f[2]) * inv;
        out[n - 1] = ((3.0 * f[n - 1] - 4.0 * f[n - 2]) + f[n - 3]) * inv;
    }
    return out;
}

std::vector<double> second_derivative(std::span<const double> f, double h, Boundary b)
{
    const std::size_t n = f.size();
    std::vector<double> out(n, 0.0);
    if (n < 4) return out;
    const double inv = 1.0 / (h * h);
    for (std::size_t i = 1; i + 1 < n; ++i) out[i] = (f[i + 1] - 2.0 * f[i] + f[i - 1]) * inv;
    if (b == Boundary::periodic) {
        out[0] = (f[1] - 2.0 * f[0] + f[n - 1]) * inv;
        out[n - 1] = (f[0] - 2.0 * f[n - 1] + f[n - 2]) * inv;
    } else {
        out[0] = (2.0 * f[0] - 5.0 * f[1] + 4.0 * f[2] - f[3]) * inv;
        out[n - 1] = (2.0 * f[n - 1] - 5.0 * f[n - 2] + 4.0 * f[n - 3] - f[n - 4]) * inv;
    }
    return out;
}

std::vector<double> derivative4(std::span<const double> f, double h, Boundary b)
{
    const std::size_t n = f.size();
    assert(n >= 5);
    std::vector<double> out(n, 0.0);
    const double inv = 1.0 / (12.0 * h);
    for (std::size_t i = 2; i + 2 < n; ++i)
        out[i] = ((f[i - 2] - 8.0 * f[i - 1]) + (8.0 * f[i + 1] - f[i + 2])) * inv;
    if (b == Boundary::periodic) {
        auto at = [&](std::ptrdiff_t k) { return f[static_cast<std::size_t>((k + static_cast<std::ptrdiff_t>(n)) % static_cast<std::ptrdiff_t>(n))]; };
        for (std::ptrdiff_t i : {std::ptrdiff_t{0}, std::ptrdiff_t{1}, static_cast<std::ptrdiff_t>(n) - 2, static_cast<std::ptrdiff_t>(n) - 1})
            out[static_cast<std::size_t>(i)] = ((at(i - 2) - 8.0 * at(i - 1)) + (8.0 * at(i + 1) - at(i + 2))) * inv;
        return out;
    }
    out[0] = (-25.0 * f[0] + 48.0 * f[1] - 36.0 * f[2] + 16.0 * f[3] - 3.0 * f[4]) * inv;
    out[1] = (-3.0 * f[0] - 10.0 * f[1] + 18.0 * f[2] - 6.0 * f[3] + f[4]) * inv;
    const std::size_t m = n - 1;
    out[m] = (25.0 * f[m] - 48.0 * f[m - 1] + 36.0 * f[m - 2] - 16.0 * f[m - 3] + 3.0 * f[m - 4]) * inv;
    out[m - 1] = (3.0 * f[m] + 10.0 * f[m - 1] - 18.0 * f[m - 2] + 6.0 * f[m - 3] - f[m - 4]) * inv;
    return out;
}

Field2D d_du(const Field2D& f, const Grid1D& u)
{
    assert(f.nu() == u.n);
    Field2D out(f.nu(), f.nv());
    std::vector<double> column(f.nu());
    for (std::size_t j = 0; j < f.nv(); ++j) {
        for (std::size_t i = 0; i < f.nu(); ++i) column[i] = f(i, j);
        const auto d = derivative(column, u.step, u.boundary);
        for (std::size_t i = 0; i < f.nu(); ++i) out(i, j) = d[i];
    }
    return out;
}

Field2D d_dv(const Field2D& f, const Grid1D& v)
{
    assert(f.nv() == v.n);
    Field2D out(f.nu(), f.nv());
    for (std::size_t i = 0; i < f.nu(); ++i) {
        const auto d = derivative(f.row(i), v.step, v.boundary);
        std::copy(d.begin(), d.end(), out.row(i).begin());
    }
    return out;
}

std::vector<double> cumulative_trapezoid(std::span<const double> f, double h)
{
    std::vector<double> out(f.size(), 0.0);
    for (std::size_t i = 1; i < f.size(); ++i) out[i] = out[i - 1] + 0.5 * h * (f[i - 1] + f[i]);
    return out;
}

double interior_max_abs(const Field2D& f, const Grid1D& u, const Grid1D& v, std::size_t margin)
{
    const std::size_t mu = u.boundary == Boundary::periodic ? 0 : margin;
    const std::size_t mv = v.boundary == Boundary::periodic ? 0 : margin;
    double m = 0.0;
    for (std::size_t i = mu; i + mu < f.nu(); ++i)
        for (std::size_t j = mv; j + mv < f.nv(); ++j) m = std::max(m, std::abs(f(i, j)));
    return m;
}

double convergence_order(double coarse, double fine)
{
    if (fine <= 0.0 || coarse <= 0.0) return std::numeric_limits<double>::infinity();
    return std::log2(coarse / fine);
}

}  // namespace movframe::fd
