#include "movframe/grid.hpp"

#include <cassert>

namespace movframe {

std::vector<double> Grid1D::nodes() const
{
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = (*this)[i];
    return out;
}

Grid1D Grid1D::spanning(double a, double b, std::size_t n)
{
    assert(n >= 2);
    return {a, (b - a) / static_cast<double>(n - 1), n, Boundary::open};
}

Grid1D Grid1D::periodic(double a, double b, std::size_t n)
{
    assert(n >= 1);
    return {a, (b - a) / static_cast<double>(n), n, Boundary::periodic};
}

Field2D& Field2D::operator+=(const Field2D& o)
{
    assert(same_shape(o));
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
    return *this;
}

Field2D& Field2D::operator-=(const Field2D& o)
{
    assert(same_shape(o));
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= o.data_[k];
    return *this;
}

Field2D& Field2D::operator*=(double a)
{
    for (double& x : data_) x *= a;
    return *this;
}

Field2D operator+(Field2D a, const Field2D& b) { return a += b; }
Field2D operator-(Field2D a, const Field2D& b) { return a -= b; }
Field2D operator*(double a, Field2D b) { return b *= a; }

Field2D operator*(const Field2D& a, const Field2D& b)
{
    assert(a.same_shape(b));
    Field2D out(a.nu(), a.nv());
    for (std::size_t k = 0; k < a.size(); ++k) out.data()[k] = a.data()[k] * b.data()[k];
    return out;
}

Field2D operator/(const Field2D& a, const Field2D& b)
{
    assert(a.same_shape(b));
    Field2D out(a.nu(), a.nv());
    for (std::size_t k = 0; k < a.size(); ++k) out.data()[k] = a.data()[k] / b.data()[k];
    return out;
}

}  // namespace movframe
