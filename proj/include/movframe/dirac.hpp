#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "movframe/nets.hpp"
#include "movframe/potentials.hpp"
#include "movframe/spectral.hpp"

namespace movframe {

enum class FrameOperatorKind { a, b };

/// First-order constituents of the planar Dirac operator on an orthogonal
/// net: A f = e1 f - (k2/2) f and B f = e2 f + (k1/2) f. Applied by action on
/// grid functions; no global matrix is assembled.
class FrameOperator {
public:
    FrameOperator(const OrthogonalNet& net, FrameOperatorKind kind);

    FrameOperatorKind kind() const { return kind_; }
    const OrthogonalNet& net() const { return net_; }
    Field2D operator()(const Field2D& f) const;

private:
    OrthogonalNet net_;
    FrameOperatorKind kind_;
    ConnectionCoefficients k_;
};

/// sum f g h1 h2 du dv over the whole grid.
double riemannian_inner(const OrthogonalNet& net, const Field2D& f, const Field2D& g);

/// <Op f, g> + <f, Op g>; vanishes up to boundary and truncation terms.
double antisymmetry_defect(const FrameOperator& op, const Field2D& f, const Field2D& g);

/// Interior max of [-(A^2 + B^2) - (-Laplacian + (k1^2 + k2^2)/4)] f.
double scalar_identity_residual(const OrthogonalNet& net, const Field2D& f, std::size_t margin = default_margin);

/// Interior max of ([A, B] - (s (k1 e1 + k2 e2) + (e1 k1 + e2 k2)/2)) f, where
/// s = +1 is the frame commutator of our orientation and s = -1 the control.
double commutator_AB_residual(const OrthogonalNet& net, const Field2D& f, CommutatorSign sign = CommutatorSign::plus,
                              std::size_t margin = default_margin);

/// [A, B] f evaluated on the grid.
Field2D commutator_AB(const OrthogonalNet& net, const Field2D& f);

struct TestFunction {
    std::string name;
    std::function<double(double, double)> f;
};

/// Trigonometric-times-Gaussian products and low-degree polynomials in the
/// net coordinates (u, v).
std::vector<TestFunction> default_test_functions();

/// Quadratic geometric terms along the reference curve and their sum.
struct CancellationReport {
    PotentialGrid dacosta;
    std::vector<double> dirac_quadratic;
    std::vector<double> sum;

    double max_abs_sum() const;
};

/// Fermi congruence: dirac_quadratic is the negated da Costa array, so the sum
/// is the zero array.
CancellationReport fermi_cancellation_report(const CurvatureProfile& profile);
/// General congruence with transverse coefficient k2 along the curve; the sum
/// is k2^2 / 4.
CancellationReport fermi_cancellation_report(const CurvatureProfile& profile, std::span<const double> k2);

/// Reduced spinor operator -d^2/ds^2 + (kappa'/2) Sigma on the reference curve.
/// Sigma = diag(+1, -1) is the Clifford product in its diagonal basis; the real
/// antisymmetric generator J has eigenvalues +-i and the factor i is absorbed
/// into the sign convention of the Clifford algebra.
struct ReducedDiracOperator {
    SchrodingerOperator op;  ///< block size 2
    Eigen::Matrix2d sigma = Eigen::Vector2d(1.0, -1.0).asDiagonal();
    Eigen::Matrix2d clifford_generator = (Eigen::Matrix2d() << 0.0, -1.0, 1.0, 0.0).finished();

    /// The two decoupled scalar operators -d^2 +- kappa'/2.
    SchrodingerOperator component(int index) const;
};

ReducedDiracOperator reduced_dirac(const CurvatureProfile& profile,
                                   SpectralBoundary boundary = SpectralBoundary::dirichlet);

/// Integrates dk1/drho = -k1^2 from k1(0) = kappa0 with classical RK4 at the
/// spacing of `rho`. Nodes on either side of rho = 0 are reached by marching
/// outward. Throws FocalPoint once |k1| exceeds 1 / h_rho or stops being finite.
std::vector<double> riccati_flow(double kappa0, const Grid1D& rho);
/// One row per sample of the profile.
Field2D riccati_flow(const CurvatureProfile& profile, const Grid1D& rho);

/// max |d k1/d rho + k1^2| with fourth-order differences.
double riccati_residual(std::span<const double> k1, const Grid1D& rho);

}  // namespace movframe
