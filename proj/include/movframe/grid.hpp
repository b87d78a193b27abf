#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace movframe {

enum class Boundary { open, periodic };

/// Uniform 1D grid. Periodic grids hold `n` distinct samples covering one
/// period `n * step`; open grids hold `n` samples spanning `(n-1) * step`.
struct Grid1D {
    double start = 0.0;
    double step = 1.0;
    std::size_t n = 0;
    Boundary boundary = Boundary::open;

    double operator[](std::size_t i) const { return start + static_cast<double>(i) * step; }
    double length() const
    {
        return boundary == Boundary::periodic ? static_cast<double>(n) * step
                                              : static_cast<double>(n - 1) * step;
    }
    std::vector<double> nodes() const;

    /// Open grid with `n` nodes on [a, b].
    static Grid1D spanning(double a, double b, std::size_t n);
    /// Periodic grid with `n` distinct nodes on [a, b).
    static Grid1D periodic(double a, double b, std::size_t n);
};

/// Scalar field on a tensor grid, row-major with `u` as the slow index.
class Field2D {
public:
    Field2D() = default;
    Field2D(std::size_t nu, std::size_t nv, double value = 0.0)
        : nu_(nu), nv_(nv), data_(nu * nv, value)
    {
    }

    std::size_t nu() const { return nu_; }
    std::size_t nv() const { return nv_; }
    std::size_t size() const { return data_.size(); }

    double& operator()(std::size_t i, std::size_t j) { return data_[i * nv_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * nv_ + j]; }

    std::span<double> row(std::size_t i) { return {data_.data() + i * nv_, nv_}; }
    std::span<const double> row(std::size_t i) const { return {data_.data() + i * nv_, nv_}; }

    std::vector<double>& data() { return data_; }
    const std::vector<double>& data() const { return data_; }

    bool same_shape(const Field2D& other) const { return nu_ == other.nu_ && nv_ == other.nv_; }

    Field2D& operator+=(const Field2D& o);
    Field2D& operator-=(const Field2D& o);
    Field2D& operator*=(double a);

private:
    std::size_t nu_ = 0;
    std::size_t nv_ = 0;
    std::vector<double> data_;
};

Field2D operator+(Field2D a, const Field2D& b);
Field2D operator-(Field2D a, const Field2D& b);
Field2D operator*(double a, Field2D b);
/// Pointwise product.
Field2D operator*(const Field2D& a, const Field2D& b);
/// Pointwise quotient.
Field2D operator/(const Field2D& a, const Field2D& b);

/// Sample `f(u, v)` on the tensor grid.
template <typename F>
Field2D sample(const Grid1D& u, const Grid1D& v, F&& f)
{
    Field2D out(u.n, v.n);
    for (std::size_t i = 0; i < u.n; ++i)
        for (std::size_t j = 0; j < v.n; ++j) out(i, j) = f(u[i], v[j]);
    return out;
}

}  // namespace movframe
