#pragma once

#include <span>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "movframe/curves.hpp"
#include "movframe/grid.hpp"

namespace movframe {

enum class PotentialLabel { dacosta_curve, dacosta_surface, susy_plus, susy_minus, transverse_residual, matrix_partner };

std::string_view to_string(PotentialLabel label);

/// Potential sampled on a 1D grid. Geometric units are 1/length^2.
struct PotentialGrid {
    std::vector<double> values;
    Grid1D grid;
    PotentialLabel label = PotentialLabel::dacosta_curve;
};

/// V = -kappa^2 / 4.
PotentialGrid dacosta_curve(const CurvatureProfile& profile);

/// V = -(H^2 - K).
double dacosta_surface(double mean, double gaussian);
Field2D dacosta_surface(const Field2D& mean, const Field2D& gaussian);

/// Scalar superpotential W = kappa / 2 and its arclength derivative.
struct ScalarSuperpotential {
    std::vector<double> w;
    std::vector<double> dw;
};

ScalarSuperpotential scalar_superpotential(const CurvatureProfile& profile);

struct SusyPartners {
    PotentialGrid plus;   ///< W^2 + W'
    PotentialGrid minus;  ///< W^2 - W'
    ScalarSuperpotential superpotential;
};

SusyPartners susy_partners(const CurvatureProfile& profile);

/// s -> -s by index reversal; kappa keeps its sign, so kappa' changes sign
/// and the partners V+ and V- trade places.
CurvatureProfile orientation_reverse(const CurvatureProfile& profile);

/// c^2 / 4 for a connection coefficient sampled along the reference curve
/// (k2 of a non-Fermi congruence, or k3, or tau).
PotentialGrid transverse_residual(std::span<const double> coefficient, const Grid1D& grid);

/// Matrix superpotential W = A / 2 built from the Frenet generator, its
/// derivative, and the partner potentials W^2 +- W'.
struct MatrixSuperpotential {
    std::vector<Eigen::Matrix3d> w;
    std::vector<Eigen::Matrix3d> dw;
    std::vector<Eigen::Matrix3d> plus;
    std::vector<Eigen::Matrix3d> minus;
    Grid1D grid;
};

/// Throws MissingTorsion when the profile has no torsion.
MatrixSuperpotential matrix_superpotential(const CurvatureProfile& profile);

namespace codata {
// CODATA 2018 exact or recommended values.
inline constexpr double hbar = 1.054571817e-34;            // J s
inline constexpr double electron_mass = 9.1093837015e-31;  // kg
inline constexpr double electron_volt = 1.602176634e-19;   // J
}  // namespace codata

struct EnergyEstimate {
    double radius_m = 0.0;
    double mass_kg = 0.0;
    double joules = 0.0;
    double mev = 0.0;
};

/// Magnitude hbar^2 / (8 m R^2) of the curvature potential for a curve of radius R.
EnergyEstimate energy_scale(double radius_m, double mass_kg);

}  // namespace movframe
