#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "movframe/grid.hpp"

namespace movframe {

using Vec3 = Eigen::Vector3d;

/// Curve sampled at uniform arclength spacing. Planar curves live in the
/// z = 0 plane and carry `dimension == 2`. Closed curves repeat the first
/// sample at the end, so `points.size() - 1` intervals cover the length.
struct ArclengthCurve {
    std::vector<Vec3> points;
    double step = 0.0;
    double length = 0.0;
    bool closed = false;
    int dimension = 2;

    std::size_t size() const { return points.size(); }
    /// Number of distinct samples (drops the repeated endpoint of a closed curve).
    std::size_t distinct() const { return closed ? points.size() - 1 : points.size(); }
};

/// Curvature (and optionally torsion) along a uniform arclength grid.
/// Periodic profiles store one period of distinct samples.
struct CurvatureProfile {
    std::vector<double> kappa;
    std::optional<std::vector<double>> tau;
    double step = 1.0;
    double start = 0.0;
    Boundary boundary = Boundary::open;

    std::size_t size() const { return kappa.size(); }
    Grid1D grid() const { return {start, step, kappa.size(), boundary}; }
    /// Throws ConstraintError when the invariants are broken.
    void validate() const;
};

/// Frenet frames and the curvature/torsion profile they induce.
struct FrenetData {
    CurvatureProfile profile;
    std::vector<Vec3> tangent;
    std::vector<Vec3> normal;
    std::vector<Vec3> binormal;
};

using ParametricCurve = std::function<Vec3(double)>;

/// Resample a parametric curve r(t), t in [t0, t1], at `n` points of uniform
/// arclength. Arclength is measured by Richardson-extrapolated chord sums on
/// a dense parameter grid and inverted with monotone cubic interpolation.
ArclengthCurve resample_arclength(const ParametricCurve& r, double t0, double t1, std::size_t n,
                                  bool closed, int dimension);

/// Resample a polyline. Coordinates are joined by a natural cubic spline in
/// the cumulative chord parameter; closed input is padded with wrapped
/// samples so the seam is smooth.
ArclengthCurve resample_arclength(std::span<const Vec3> raw, std::size_t n, bool closed, int dimension);

/// Signed curvature of a planar curve; N is T rotated by +90 degrees.
CurvatureProfile curvature_planar(const ArclengthCurve& curve);

inline constexpr double default_kappa_min = 1e-8;

FrenetData frenet_apparatus(const ArclengthCurve& curve, double kappa_min = default_kappa_min);

/// Frenet generator at sample `i`: rows (0, k, 0), (-k, 0, t), (0, -t, 0).
Eigen::Matrix3d frenet_matrix(const CurvatureProfile& profile, std::size_t i);
Eigen::Matrix3d frenet_matrix(double kappa, double tau);

/// kappa^2 + tau^2 per sample (kappa^2 when no torsion is present).
std::vector<double> quadratic_invariant(const CurvatureProfile& profile);

struct PlanarFrame {
    double x = 0.0;
    double y = 0.0;
    double angle = 0.0;  ///< tangent direction
};

/// Integrate the planar frame equations for a curvature profile. Each step
/// is an exact circular arc for the linearly interpolated turning angle.
/// The result is always reported as an open curve; use closure_gap().
ArclengthCurve curve_from_curvature(const CurvatureProfile& profile, PlanarFrame initial = {});

double closure_gap(const ArclengthCurve& curve);

// Named curves.
ArclengthCurve make_circle(double radius, std::size_t n);
ArclengthCurve make_ellipse(double a, double b, std::size_t n);
ArclengthCurve make_helix(double a, double b, double turns, std::size_t n);
ArclengthCurve make_segment(const Vec3& p, const Vec3& q, std::size_t n);

/// kappa(s) = amplitude * tanh(s) on an open grid of n samples over [s0, s1].
CurvatureProfile tanh_profile(double amplitude, double s0, double s1, std::size_t n);
CurvatureProfile constant_profile(double kappa, double s0, double s1, std::size_t n,
                                  Boundary boundary = Boundary::open);

/// Monotone piecewise cubic (Fritsch-Carlson) interpolant.
class MonotoneCubic {
public:
    MonotoneCubic(std::vector<double> x, std::vector<double> y);
    double operator()(double x) const;

private:
    std::vector<double> x_, y_, d_;
};

/// Natural cubic spline (C^2) through strictly increasing abscissae.
class CubicSpline {
public:
    CubicSpline(std::vector<double> x, std::vector<double> y);
    double operator()(double x) const;

private:
    std::vector<double> x_, y_, m_;  // m_: second derivatives at the knots
};

}  // namespace movframe
