#pragma once

#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "movframe/grid.hpp"
#include "movframe/potentials.hpp"

namespace movframe {

enum class SpectralBoundary { dirichlet, periodic };

std::string_view to_string(SpectralBoundary b);

/// Symmetric tridiagonal matrix: `diagonal` has m entries, `off_diagonal` m-1.
struct SymmetricTridiagonal {
    std::vector<double> diagonal;
    std::vector<double> off_diagonal;

    std::size_t size() const { return diagonal.size(); }
    /// Gershgorin bound on the spectral radius.
    double norm_bound() const;
    Eigen::VectorXd apply(const Eigen::VectorXd& x) const;
};

/// Discretized -d^2/ds^2 + V with the three-point stencil. The potential holds
/// one d x d block per grid node (d = 1 for scalar problems). Dirichlet
/// operators act on the interior nodes; periodic operators on every node of a
/// periodic grid.
struct SchrodingerOperator {
    Grid1D grid;
    SpectralBoundary boundary = SpectralBoundary::dirichlet;
    std::size_t block = 1;
    std::vector<Eigen::MatrixXd> potential;

    /// First node carrying an unknown and the number of such nodes.
    std::size_t first_node() const { return boundary == SpectralBoundary::dirichlet ? 1 : 0; }
    std::size_t unknown_nodes() const { return boundary == SpectralBoundary::dirichlet ? grid.n - 2 : grid.n; }
    std::size_t dimension() const { return unknown_nodes() * block; }

    Eigen::MatrixXd dense() const;
    /// Scalar Dirichlet operators only.
    SymmetricTridiagonal tridiagonal() const;
    double norm_bound() const;
    /// max |H - H^T|.
    double symmetry_error() const;
};

/// Throws GridTooSmall below 16 nodes. Periodic operators need a periodic grid.
SchrodingerOperator discretize(std::span<const double> potential, const Grid1D& grid, SpectralBoundary boundary);
SchrodingerOperator discretize(const PotentialGrid& potential);
SchrodingerOperator discretize(std::span<const Eigen::Matrix3d> potential, const Grid1D& grid,
                               SpectralBoundary boundary);

struct Spectrum {
    std::vector<double> values;  ///< ascending
    /// Column j is the j-th eigenvector on the full grid, node-major, unit norm
    /// in sum_i h |psi_i|^2. Dirichlet end nodes hold zeros.
    std::optional<Eigen::MatrixXd> vectors;
    /// max over pairs of ||H psi - E psi||_2 with ||psi||_2 = 1.
    double max_residual = 0.0;
};

/// Lowest k eigenpairs of a symmetric tridiagonal matrix by Sturm bisection
/// and inverse iteration. Vectors are unit in the plain 2-norm.
Spectrum tridiagonal_eigen(const SymmetricTridiagonal& t, std::size_t k, bool with_vectors = true);

/// Lowest k eigenpairs. Scalar Dirichlet operators go through the
/// tridiagonal solver, everything else through a dense symmetric solve.
/// Throws NonSymmetricOperator when the assembled matrix is not symmetric.
Spectrum eigen(const SchrodingerOperator& op, std::size_t k, bool with_vectors = true);

enum class PartnerSide { plus, minus };

std::string_view to_string(PartnerSide side);

struct PairedLevel {
    double plus = 0.0;
    double minus = 0.0;
    double gap = 0.0;
};

struct UnpairedLevel {
    double value = 0.0;
    PartnerSide side = PartnerSide::minus;
};

struct PairingReport {
    std::vector<PairedLevel> pairs;
    std::vector<UnpairedLevel> unpaired;
    double tolerance = 0.0;
    double floor = 0.0;

    double max_gap() const;
    /// Unpaired levels at or below the floor.
    std::size_t near_zero_count() const;
    /// Unpaired levels above the floor on the given side.
    std::size_t unpaired_above_floor(PartnerSide side) const;
};

inline constexpr double default_pairing_tolerance = 5e-3;

/// Greedy matching of levels above `floor`: each minus level takes the nearest
/// unused plus level when it lies within `tol`. Every input value ends up in
/// exactly one pair or one unpaired entry.
PairingReport susy_pairing(std::span<const double> plus, std::span<const double> minus, double floor, double tol);
PairingReport susy_pairing(const Spectrum& plus, const Spectrum& minus,
                           double floor = 5 * default_pairing_tolerance, double tol = default_pairing_tolerance);

/// Discrete factorization Q = D + W on the staggered grid. Q^T Q acts on all
/// nodes and approximates -d^2 + W^2 - W' with the natural boundary condition
/// psi' + W psi = 0; Q Q^T acts on the midpoints and approximates
/// -d^2 + W^2 + W'. Their nonzero spectra coincide to rounding.
struct FactorizedPartners {
    SymmetricTridiagonal minus;  ///< Q^T Q
    SymmetricTridiagonal plus;   ///< Q Q^T
};

FactorizedPartners factorized_partners(std::span<const double> superpotential, const Grid1D& grid);

/// psi_i = psi0 exp(-1/2 int_0^{s_i} A) by trapezoidal accumulation.
std::vector<double> ground_state_transport(std::span<const double> connection, const Grid1D& grid,
                                           double psi0 = 1.0);

/// Ordered product U_i = E_{i-1} ... E_0 with E_j = exp(-h/2 (A_j + A_{j+1})/2).
/// Periodic grids take one extra step back to the first node, so the last
/// entry is the propagator over a full period.
std::vector<Eigen::MatrixXd> transport_propagator(std::span<const Eigen::MatrixXd> connection, const Grid1D& grid);
std::vector<Eigen::MatrixXd> transport_propagator(std::span<const Eigen::Matrix3d> connection, const Grid1D& grid);

std::vector<Eigen::VectorXd> ground_state_transport(std::span<const Eigen::Matrix3d> connection, const Grid1D& grid,
                                                    const Eigen::VectorXd& psi0);

/// Sign of the connection term in the covariant derivative psi' + (sign/2) A psi.
/// `plus` is the annihilating convention; `minus` is kept as a control.
enum class CovariantSign { plus, minus };

/// max over interior nodes of |psi' + (sign/2) A psi| / max |psi|, with
/// central differences.
double annihilation_residual(std::span<const double> psi, std::span<const double> connection, const Grid1D& grid,
                             CovariantSign sign = CovariantSign::plus);
double annihilation_residual(std::span<const Eigen::VectorXd> psi, std::span<const Eigen::Matrix3d> connection,
                             const Grid1D& grid, CovariantSign sign = CovariantSign::plus);

double cosine_similarity(std::span<const double> a, std::span<const double> b);

}  // namespace movframe
