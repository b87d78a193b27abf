#pragma once

#include <functional>
#include <vector>

#include "movframe/curves.hpp"
#include "movframe/grid.hpp"

namespace movframe {

/// Sampled parametrization r(u_i, v_j), row-major with u as the slow index.
/// Either direction may be periodic.
struct SurfacePatch {
    Grid1D u;
    Grid1D v;
    std::vector<Vec3> points;

    const Vec3& operator()(std::size_t i, std::size_t j) const { return points[i * v.n + j]; }
};

using Parametrization = std::function<Vec3(double, double)>;

SurfacePatch sample_patch(const Grid1D& u, const Grid1D& v, const Parametrization& r);

/// Rows of grid points next to an open boundary excluded from max-norms.
inline constexpr std::size_t surface_margin = 3;

struct FundamentalForms {
    Field2D E, F, G;
    Field2D L, M, N;
    Field2D H;  ///< mean curvature for the normal r_u x r_v / |r_u x r_v|
    Field2D K;
    /// Points on an open edge where EG - F^2 vanishes (a coordinate singularity
    /// such as a pole); H and K are set to 0 there.
    std::size_t singular_points = 0;
};

/// Central differences (one-sided on open edges). Throws DegeneratePatch when
/// |r_u x r_v| <= 1e-10 at a point away from the open edges.
FundamentalForms fundamental_forms(const SurfacePatch& patch);

/// Connection form omega^1_2 of the orthonormal coframe theta^1 = sqrt(E) du,
/// theta^2 = sqrt(G) dv, oriented so that d omega^1_2 = -K theta^1 ^ theta^2.
/// Coordinate components: omega = du_part du + dv_part dv with
/// du_part = -d_v sqrt(E) / sqrt(G), dv_part = d_u sqrt(G) / sqrt(E).
/// Coframe components: omega = theta1 theta^1 + theta2 theta^2.
/// Where sqrt(G) (or sqrt(E)) vanishes the affected component is set to 0.
/// This is minus the orientation of net_connection.
struct SurfaceConnection {
    Field2D du_part;
    Field2D dv_part;
    Field2D theta1;
    Field2D theta2;
};

/// Throws NonOrthogonalPatch if max |F| / sqrt(EG) > 1e-6.
SurfaceConnection connection_form(const SurfacePatch& patch, const FundamentalForms& forms);
SurfaceConnection connection_form(const SurfacePatch& patch);

/// Max over interior points of |d_u dv_part - d_v du_part + K sqrt(EG)|.
double obstruction_residual(const SurfacePatch& patch, std::size_t margin = surface_margin);

/// Coordinate rectangle [u0, u1] x [v0, v1]. Corners must fall on grid nodes.
/// For a periodic direction, a span of one full period means the closed strip.
struct CoordinateRectangle {
    double u0 = 0.0, u1 = 0.0;
    double v0 = 0.0, v1 = 0.0;
};

struct HolonomyReport {
    double loop_integral = 0.0;   ///< counter-clockwise line integral of omega^1_2
    double area_integral = 0.0;   ///< integral of K dA over the rectangle
    double mismatch = 0.0;        ///< |loop + area|
    double half_holonomy_factor = 0.0;  ///< exp(-loop / 2)
};

/// Trapezoidal loop and area integrals; Stokes predicts loop = -area.
HolonomyReport holonomy_check(const SurfacePatch& patch, const CoordinateRectangle& rect);

struct DevelopableReport {
    bool is_developable = false;
    double max_abs_K = 0.0;
    double tolerance = 0.0;
    Field2D dacosta;  ///< -(H^2 - K)
};

/// max |K| over interior points against `tol`; a negative tol selects
/// 1e-6 * max(max H^2, 1e-12).
DevelopableReport developable_check(const SurfacePatch& patch, double tol = -1.0,
                                    std::size_t margin = surface_margin);

// Named patches.

/// z = 0 over [x0, x1] x [y0, y1].
SurfacePatch plane_patch(double x0, double x1, double y0, double y1, std::size_t nx, std::size_t ny);
/// (R cos t, R sin t, z), t periodic on [0, 2 pi).
SurfacePatch cylinder_patch(double radius, double z0, double z1, std::size_t nt, std::size_t nz);
/// Ruled cone (r cos t, r sin t, r cot(alpha)) for r in [r0, r1] with u = r and periodic t.
SurfacePatch cone_patch(double half_angle, double r0, double r1, std::size_t nr, std::size_t nt);
/// u = colatitude in [theta0, theta1], v = longitude periodic.
SurfacePatch sphere_patch(double radius, double theta0, double theta1, std::size_t ntheta, std::size_t nphi);
/// Both angles periodic; major radius R, tube radius a.
SurfacePatch torus_patch(double major, double minor, std::size_t nu, std::size_t nv);
/// Graph z = f(rho) in polar coordinates: (rho cos t, rho sin t, f(rho)).
SurfacePatch graph_patch(const std::function<double(double)>& height, double rho0, double rho1, std::size_t nrho,
                         std::size_t nt);

}  // namespace movframe
