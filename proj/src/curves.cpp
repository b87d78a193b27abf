#include "movframe/curves.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "movframe/errors.hpp"
#include "movframe/finite_diff.hpp"

namespace movframe {

namespace {

double sinc(double x)
{
    if (std::abs(x) < 1e-4) return 1.0 - x * x / 6.0;
    return std::sin(x) / x;
}

std::vector<double> component(std::span<const Vec3> v, int c)
{
    std::vector<double> out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[i][c];
    return out;
}

// Fourth-order so that three nested derivatives keep O(h^2) at open ends.
std::vector<Vec3> derivative(std::span<const Vec3> v, double h, Boundary b)
{
    const auto dx = fd::derivative4(component(v, 0), h, b);
    const auto dy = fd::derivative4(component(v, 1), h, b);
    const auto dz = fd::derivative4(component(v, 2), h, b);
    std::vector<Vec3> out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = Vec3(dx[i], dy[i], dz[i]);
    return out;
}

}  // namespace

void CurvatureProfile::validate() const
{
    if (!(step > 0.0)) throw ConstraintError("curvature profile: step must be > 0");
    if (tau && tau->size() != kappa.size())
        throw ConstraintError("curvature profile: kappa has " + std::to_string(kappa.size()) +
                              " samples but tau has " + std::to_string(tau->size()));
}

MonotoneCubic::MonotoneCubic(std::vector<double> x, std::vector<double> y)
    : x_(std::move(x)), y_(std::move(y)), d_(x_.size(), 0.0)
{
    const std::size_t n = x_.size();
    if (n < 2 || y_.size() != n) throw Error("MonotoneCubic: need at least two matching samples");
    std::vector<double> h(n - 1), delta(n - 1);
    for (std::size_t k = 0; k + 1 < n; ++k) {
        h[k] = x_[k + 1] - x_[k];
        if (!(h[k] > 0.0)) throw Error("MonotoneCubic: abscissae must be strictly increasing");
        delta[k] = (y_[k + 1] - y_[k]) / h[k];
    }
    if (n == 2) {
        d_[0] = d_[1] = delta[0];
        return;
    }
    for (std::size_t k = 1; k + 1 < n; ++k) {
        if (delta[k - 1] * delta[k] <= 0.0) continue;
        const double w1 = 2.0 * h[k] + h[k - 1];
        const double w2 = h[k] + 2.0 * h[k - 1];
        d_[k] = (w1 + w2) / (w1 / delta[k - 1] + w2 / delta[k]);
    }
    auto end_slope = [](double h0, double h1, double m0, double m1) {
        double d = ((2.0 * h0 + h1) * m0 - h0 * m1) / (h0 + h1);
        if (std::signbit(d) != std::signbit(m0))
            d = 0.0;
        else if (std::signbit(m0) != std::signbit(m1) && std::abs(d) > std::abs(3.0 * m0))
            d = 3.0 * m0;
        return d;
    };
    d_[0] = end_slope(h[0], h[1], delta[0], delta[1]);
    d_[n - 1] = end_slope(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
}

double MonotoneCubic::operator()(double x) const
{
    auto it = std::upper_bound(x_.begin(), x_.end(), x);
    std::size_t k = it == x_.begin() ? 0 : static_cast<std::size_t>(it - x_.begin()) - 1;
    k = std::min(k, x_.size() - 2);
    const double h = x_[k + 1] - x_[k];
    const double t = (x - x_[k]) / h;
    const double t2 = t * t, t3 = t2 * t;
    return (2 * t3 - 3 * t2 + 1) * y_[k] + (t3 - 2 * t2 + t) * h * d_[k] + (-2 * t3 + 3 * t2) * y_[k + 1] +
           (t3 - t2) * h * d_[k + 1];
}

CubicSpline::CubicSpline(std::vector<double> x, std::vector<double> y)
    : x_(std::move(x)), y_(std::move(y)), m_(x_.size(), 0.0)
{
    const std::size_t n = x_.size();
    if (n < 2 || y_.size() != n) throw Error("CubicSpline: need at least two matching samples");
    if (n == 2) return;
    // Thomas algorithm for the interior second derivatives.
    std::vector<double> c(n, 0.0), d(n, 0.0);
    for (std::size_t k = 1; k + 1 < n; ++k) {
        const double h0 = x_[k] - x_[k - 1], h1 = x_[k + 1] - x_[k];
        const double a = h0 / 6.0, b = (h0 + h1) / 3.0, cc = h1 / 6.0;
        const double rhs = (y_[k + 1] - y_[k]) / h1 - (y_[k] - y_[k - 1]) / h0;
        const double denom = b - a * c[k - 1];
        c[k] = cc / denom;
        d[k] = (rhs - a * d[k - 1]) / denom;
    }
    for (std::size_t k = n - 2; k >= 1; --k) m_[k] = d[k] - c[k] * m_[k + 1];
}

double CubicSpline::operator()(double x) const
{
    auto it = std::upper_bound(x_.begin(), x_.end(), x);
    std::size_t k = it == x_.begin() ? 0 : static_cast<std::size_t>(it - x_.begin()) - 1;
    k = std::min(k, x_.size() - 2);
    const double h = x_[k + 1] - x_[k];
    const double a = (x_[k + 1] - x) / h, b = (x - x_[k]) / h;
    return a * y_[k] + b * y_[k + 1] + ((a * a * a - a) * m_[k] + (b * b * b - b) * m_[k + 1]) * h * h / 6.0;
}

ArclengthCurve resample_arclength(const ParametricCurve& r, double t0, double t1, std::size_t n,
                                  bool closed, int dimension)
{
    if (n < 8) throw ConstraintError("resample_arclength: n must be >= 8, got " + std::to_string(n));
    const std::size_t coarse = std::max<std::size_t>(64 * n, 8192);
    const std::size_t fine = 2 * coarse;
    const double dt = (t1 - t0) / static_cast<double>(fine);

    std::vector<Vec3> dense(fine + 1);
    for (std::size_t k = 0; k <= fine; ++k) dense[k] = r(t0 + static_cast<double>(k) * dt);

    // Richardson extrapolation of chord sums at spacing dt and 2 dt.
    std::vector<double> c(coarse + 1, 0.0), t(coarse + 1, 0.0);
    double cf = 0.0, cc = 0.0;
    t[0] = t0;
    for (std::size_t k = 1; k <= coarse; ++k) {
        cf += (dense[2 * k - 1] - dense[2 * k - 2]).norm() + (dense[2 * k] - dense[2 * k - 1]).norm();
        cc += (dense[2 * k] - dense[2 * k - 2]).norm();
        c[k] = (4.0 * cf - cc) / 3.0;
        t[k] = t0 + static_cast<double>(2 * k) * dt;
    }
    const double length = c[coarse];
    if (!(length >= 1e-12)) throw DegenerateCurve("resample_arclength: cumulative length below 1e-12");
    for (std::size_t k = 1; k <= coarse; ++k)
        if (!(c[k] > c[k - 1])) throw DegenerateCurve("resample_arclength: curve is not regular (stationary parameter)");

    MonotoneCubic inverse(std::move(c), std::move(t));
    ArclengthCurve out;
    out.closed = closed;
    out.dimension = dimension;
    out.length = length;
    out.step = length / static_cast<double>(n - 1);
    out.points.resize(n);
    for (std::size_t i = 0; i < n; ++i) out.points[i] = r(inverse(static_cast<double>(i) * out.step));
    out.points.front() = dense.front();
    out.points.back() = dense.back();
    if (closed) {
        const double gap = (out.points.back() - out.points.front()).norm();
        if (gap > 1e-9)
            throw ConstraintError("resample_arclength: closed curve endpoints differ by " + std::to_string(gap));
        out.points.back() = out.points.front();
    }
    return out;
}

ArclengthCurve resample_arclength(std::span<const Vec3> raw, std::size_t n, bool closed, int dimension)
{
    if (raw.size() < 2) throw DegenerateCurve("resample_arclength: need at least two points");
    for (std::size_t i = 1; i < raw.size(); ++i)
        if ((raw[i] - raw[i - 1]).norm() == 0.0)
            throw DegenerateCurve("resample_arclength: repeated consecutive point at index " + std::to_string(i));

    std::vector<Vec3> pts(raw.begin(), raw.end());
    std::size_t first = 0, last = pts.size() - 1;
    if (closed) {
        const double gap = (pts.back() - pts.front()).norm();
        if (gap > 1e-9)
            throw ConstraintError("resample_arclength: closed curve endpoints differ by " + std::to_string(gap));
        if (pts.size() < 4) throw DegenerateCurve("resample_arclength: closed curve needs at least three distinct points");
        // Pad with wrapped neighbours so the spline is smooth across the seam.
        const std::size_t m = pts.size() - 1;
        const std::size_t pad = std::min<std::size_t>(8, m - 1);
        std::vector<Vec3> ext;
        for (std::size_t k = pad; k >= 1; --k) ext.push_back(pts[m - k]);
        for (std::size_t k = 0; k <= m; ++k) ext.push_back(pts[k]);
        for (std::size_t k = 1; k <= pad; ++k) ext.push_back(pts[k]);
        first = pad;
        last = pad + m;
        pts = std::move(ext);
    }

    std::vector<double> c(pts.size(), 0.0);
    for (std::size_t k = 1; k < pts.size(); ++k) c[k] = c[k - 1] + (pts[k] - pts[k - 1]).norm();
    const CubicSpline x(c, component(pts, 0));
    const CubicSpline y(c, component(pts, 1));
    const CubicSpline z(c, component(pts, 2));
    auto spline = [&](double t) { return Vec3(x(t), y(t), z(t)); };
    auto out = resample_arclength(spline, c[first], c[last], n, false, dimension);
    if (closed) {
        out.closed = true;
        out.points.back() = out.points.front();
    }
    return out;
}

CurvatureProfile curvature_planar(const ArclengthCurve& curve)
{
    if (curve.dimension != 2) throw ConstraintError("curvature_planar: curve is not planar");
    const std::size_t m = curve.distinct();
    const Boundary b = curve.closed ? Boundary::periodic : Boundary::open;
    const std::span<const Vec3> pts(curve.points.data(), m);

    auto tx = fd::derivative(component(pts, 0), curve.step, b);
    auto ty = fd::derivative(component(pts, 1), curve.step, b);
    for (std::size_t i = 0; i < m; ++i) {
        const double norm = std::hypot(tx[i], ty[i]);
        tx[i] /= norm;
        ty[i] /= norm;
    }
    const auto dtx = fd::derivative(tx, curve.step, b);
    const auto dty = fd::derivative(ty, curve.step, b);

    CurvatureProfile out;
    out.step = curve.step;
    out.boundary = b;
    out.kappa.resize(m);
    for (std::size_t i = 0; i < m; ++i) out.kappa[i] = tx[i] * dty[i] - ty[i] * dtx[i];
    return out;
}

FrenetData frenet_apparatus(const ArclengthCurve& curve, double kappa_min)
{
    const std::size_t m = curve.distinct();
    const Boundary b = curve.closed ? Boundary::periodic : Boundary::open;
    const std::span<const Vec3> pts(curve.points.data(), m);

    FrenetData out;
    out.tangent = derivative(pts, curve.step, b);
    for (auto& t : out.tangent) t.normalize();
    const auto dt = derivative(out.tangent, curve.step, b);

    out.profile.step = curve.step;
    out.profile.boundary = b;
    out.profile.kappa.resize(m);
    out.normal.resize(m);
    out.binormal.resize(m);
    for (std::size_t i = 0; i < m; ++i) {
        const Vec3 perp = dt[i] - dt[i].dot(out.tangent[i]) * out.tangent[i];
        const double kappa = perp.norm();
        if (!(kappa >= kappa_min))
            throw VanishingCurvature("frenet_apparatus: curvature " + std::to_string(kappa) +
                                     " below threshold at sample " + std::to_string(i));
        out.profile.kappa[i] = kappa;
        out.normal[i] = perp / kappa;
        out.binormal[i] = out.tangent[i].cross(out.normal[i]);
    }
    const auto dn = derivative(out.normal, curve.step, b);
    const auto db = derivative(out.binormal, curve.step, b);
    std::vector<double> tau(m);
    for (std::size_t i = 0; i < m; ++i)
        tau[i] = 0.5 * (dn[i].dot(out.binormal[i]) - db[i].dot(out.normal[i]));
    out.profile.tau = std::move(tau);
    return out;
}

Eigen::Matrix3d frenet_matrix(double kappa, double tau)
{
    Eigen::Matrix3d a = Eigen::Matrix3d::Zero();
    a(0, 1) = kappa;
    a(1, 0) = -kappa;
    a(1, 2) = tau;
    a(2, 1) = -tau;
    return a;
}

Eigen::Matrix3d frenet_matrix(const CurvatureProfile& profile, std::size_t i)
{
    if (!profile.tau) throw MissingTorsion("frenet_matrix: profile carries no torsion");
    return frenet_matrix(profile.kappa.at(i), profile.tau->at(i));
}

std::vector<double> quadratic_invariant(const CurvatureProfile& profile)
{
    std::vector<double> out(profile.size());
    for (std::size_t i = 0; i < out.size(); ++i) {
        const double k = profile.kappa[i];
        const double t = profile.tau ? (*profile.tau)[i] : 0.0;
        out[i] = k * k + t * t;
    }
    return out;
}

ArclengthCurve curve_from_curvature(const CurvatureProfile& profile, PlanarFrame initial)
{
    profile.validate();
    const std::size_t m = profile.size();
    const bool wrap = profile.boundary == Boundary::periodic;
    const std::size_t steps = wrap ? m : m - 1;
    const double h = profile.step;

    ArclengthCurve out;
    out.dimension = 2;
    out.step = h;
    out.length = static_cast<double>(steps) * h;
    out.points.resize(steps + 1);
    out.points[0] = Vec3(initial.x, initial.y, 0.0);
    double theta = initial.angle;
    for (std::size_t i = 0; i < steps; ++i) {
        const double k0 = profile.kappa[i];
        const double k1 = profile.kappa[(i + 1) % m];
        const double dtheta = 0.5 * h * (k0 + k1);
        const double mid = theta + 0.5 * dtheta;
        const double chord = h * sinc(0.5 * dtheta);
        out.points[i + 1] = out.points[i] + Vec3(chord * std::cos(mid), chord * std::sin(mid), 0.0);
        theta += dtheta;
    }
    return out;
}

double closure_gap(const ArclengthCurve& curve)
{
    return (curve.points.back() - curve.points.front()).norm();
}

ArclengthCurve make_circle(double radius, std::size_t n)
{
    auto r = [radius](double t) { return Vec3(radius * std::cos(t), radius * std::sin(t), 0.0); };
    return resample_arclength(r, 0.0, 2.0 * std::numbers::pi, n, true, 2);
}

ArclengthCurve make_ellipse(double a, double b, std::size_t n)
{
    auto r = [a, b](double t) { return Vec3(a * std::cos(t), b * std::sin(t), 0.0); };
    return resample_arclength(r, 0.0, 2.0 * std::numbers::pi, n, true, 2);
}

ArclengthCurve make_helix(double a, double b, double turns, std::size_t n)
{
    auto r = [a, b](double t) { return Vec3(a * std::cos(t), a * std::sin(t), b * t); };
    return resample_arclength(r, 0.0, 2.0 * std::numbers::pi * turns, n, false, 3);
}

ArclengthCurve make_segment(const Vec3& p, const Vec3& q, std::size_t n)
{
    const std::vector<Vec3> raw{p, q};
    const int dim = (p.z() == 0.0 && q.z() == 0.0) ? 2 : 3;
    return resample_arclength(raw, n, false, dim);
}

CurvatureProfile tanh_profile(double amplitude, double s0, double s1, std::size_t n)
{
    const Grid1D g = Grid1D::spanning(s0, s1, n);
    CurvatureProfile out;
    out.step = g.step;
    out.start = s0;
    out.kappa.resize(n);
    for (std::size_t i = 0; i < n; ++i) out.kappa[i] = amplitude * std::tanh(g[i]);
    return out;
}

CurvatureProfile constant_profile(double kappa, double s0, double s1, std::size_t n, Boundary boundary)
{
    const Grid1D g = boundary == Boundary::periodic ? Grid1D::periodic(s0, s1, n) : Grid1D::spanning(s0, s1, n);
    CurvatureProfile out;
    out.step = g.step;
    out.start = s0;
    out.boundary = boundary;
    out.kappa.assign(n, kappa);
    return out;
}

}  // namespace movframe
