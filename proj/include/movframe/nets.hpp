#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "movframe/curves.hpp"
#include "movframe/grid.hpp"

namespace movframe {

/// Planar orthogonal coordinate net given by its Lame coefficients.
/// Frames: e1 = (1/h1) d/du, e2 = (1/h2) d/dv.
struct OrthogonalNet {
    Grid1D u;
    Grid1D v;
    Field2D h1;
    Field2D h2;

    /// Throws ConstraintError if shapes disagree or a coefficient is not > 0.
    void validate() const;
};

/// Coefficients of the connection form omega = k1 theta^1 + k2 theta^2.
///
/// Orientation: k1 = (d_v h1) / (h1 h2), k2 = -(d_u h2) / (h1 h2). This is the
/// orientation in which the structure equations read
/// d theta^1 = -omega ^ theta^2, d theta^2 = omega ^ theta^1, the Laplacian is
/// e1^2 + e2^2 - k2 e1 + k1 e2, flat nets satisfy e1 k2 - e2 k1 = k1^2 + k2^2,
/// and on a Fermi strip k1 = kappa / (1 + rho kappa) with e2 k1 = -k1^2.
/// In this orientation the frame commutator is [e1, e2] = k1 e1 + k2 e2.
struct ConnectionCoefficients {
    Field2D k1;
    Field2D k2;
};

/// Rows of grid points closest to an open boundary excluded from residual norms.
inline constexpr std::size_t default_margin = 3;

ConnectionCoefficients net_connection(const OrthogonalNet& net);

Field2D apply_e1(const OrthogonalNet& net, const Field2D& f);
Field2D apply_e2(const OrthogonalNet& net, const Field2D& f);

/// Pointwise e1 k2 - e2 k1 - (k1^2 + k2^2).
Field2D gauss_residual_field(const OrthogonalNet& net);
/// Interior max-norm of gauss_residual_field.
double gauss_residual(const OrthogonalNet& net, std::size_t margin = default_margin);

enum class CommutatorSign {
    plus,   ///< [e1, e2] = k1 e1 + k2 e2, the relation that holds in our orientation
    minus,  ///< [e1, e2] = -k1 e1 - k2 e2 (does not hold; kept as a control)
};

double commutator_residual(const OrthogonalNet& net, const Field2D& f, CommutatorSign sign = CommutatorSign::plus,
                           std::size_t margin = default_margin);

/// e1^2 f + e2^2 f - k2 e1 f + k1 e2 f with e_i^2 = e_i o e_i.
Field2D moving_frame_laplacian(const OrthogonalNet& net, const Field2D& f);

/// (1/(h1 h2)) [d_u(h2/h1 d_u f) + d_v(h1/h2 d_v f)] on the compact staggered
/// stencil. Rows on open boundaries are left at zero.
Field2D divergence_laplacian(const OrthogonalNet& net, const Field2D& f);

/// Fermi strip around a planar reference curve: u = s, v = rho in
/// [-rho_max, rho_max], h1 = 1 + rho kappa(s), h2 = 1.
/// Throws FocalPointInStrip if 1 + rho kappa <= 0 anywhere.
OrthogonalNet fermi_net(const CurvatureProfile& profile, double rho_max, std::size_t n_rho);

OrthogonalNet lame_net(const Grid1D& u, const Grid1D& v, const std::function<double(double, double)>& h1,
                       const std::function<double(double, double)>& h2);

OrthogonalNet cartesian_net(const Grid1D& x, const Grid1D& y);
/// u = r, v = phi; h1 = 1, h2 = r.
OrthogonalNet polar_net(const Grid1D& r, const Grid1D& phi);

/// k1^2 + k2^2 per grid point.
Field2D connection_invariant(const ConnectionCoefficients& k);

/// One coefficient omega^i_{j alpha} of a connection form in an orthonormal coframe.
struct ConnectionComponent {
    int i = 0;
    int j = 0;
    int alpha = 0;
    double value = 0.0;
};

/// Sum of squares of the independent (i < j) coefficients.
/// Throws ConstraintError on an index pair with i >= j.
double connection_invariant(std::span<const ConnectionComponent> coefficients);

using Frame = std::array<Vec3, 3>;

/// Angular velocity of a moving frame sampled along a curve.
struct DarbouxField {
    /// (omega^2_3, omega^3_1, omega^1_2): components in the frame basis.
    std::vector<Vec3> components;
    /// The same vector in ambient coordinates.
    std::vector<Vec3> vector;
};

/// Omega_D = (1/2) sum_i e_i x e_i', so that e_i' = Omega_D x e_i.
DarbouxField darboux_vector(std::span<const Frame> frames, double h, Boundary boundary);
std::vector<Frame> frames_of(const FrenetData& frenet);

/// max_i,s |e_i' - Omega_D x e_i| over samples away from open ends.
double darboux_residual(std::span<const Frame> frames, const DarbouxField& field, double h, Boundary boundary,
                        std::size_t margin = default_margin);

}  // namespace movframe
