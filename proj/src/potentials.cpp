#include "movframe/potentials.hpp"

#include <algorithm>

#include "movframe/errors.hpp"
#include "movframe/finite_diff.hpp"

namespace movframe {

std::string_view to_string(PotentialLabel label)
{
    switch (label) {
    case PotentialLabel::dacosta_curve: return "dacosta_curve";
    case PotentialLabel::dacosta_surface: return "dacosta_surface";
    case PotentialLabel::susy_plus: return "susy_plus";
    case PotentialLabel::susy_minus: return "susy_minus";
    case PotentialLabel::transverse_residual: return "transverse_residual";
    case PotentialLabel::matrix_partner: return "matrix_partner";
    }
    return "unknown";
}

PotentialGrid dacosta_curve(const CurvatureProfile& profile)
{
    PotentialGrid out{std::vector<double>(profile.size()), profile.grid(), PotentialLabel::dacosta_curve};
    for (std::size_t i = 0; i < profile.size(); ++i) out.values[i] = -0.25 * profile.kappa[i] * profile.kappa[i];
    return out;
}

double dacosta_surface(double mean, double gaussian) { return -(mean * mean - gaussian); }

Field2D dacosta_surface(const Field2D& mean, const Field2D& gaussian)
{
    Field2D out(mean.nu(), mean.nv());
    for (std::size_t k = 0; k < out.size(); ++k) out.data()[k] = dacosta_surface(mean.data()[k], gaussian.data()[k]);
    return out;
}

ScalarSuperpotential scalar_superpotential(const CurvatureProfile& profile)
{
    profile.validate();
    ScalarSuperpotential out;
    out.w.resize(profile.size());
    for (std::size_t i = 0; i < profile.size(); ++i) out.w[i] = 0.5 * profile.kappa[i];
    out.dw = fd::derivative(out.w, profile.step, profile.boundary);
    return out;
}

SusyPartners susy_partners(const CurvatureProfile& profile)
{
    SusyPartners out;
    out.superpotential = scalar_superpotential(profile);
    const auto& w = out.superpotential.w;
    const auto& dw = out.superpotential.dw;
    out.plus = {std::vector<double>(w.size()), profile.grid(), PotentialLabel::susy_plus};
    out.minus = {std::vector<double>(w.size()), profile.grid(), PotentialLabel::susy_minus};
    for (std::size_t i = 0; i < w.size(); ++i) {
        const double w2 = w[i] * w[i];
        out.plus.values[i] = w2 + dw[i];
        out.minus.values[i] = w2 - dw[i];
    }
    return out;
}

CurvatureProfile orientation_reverse(const CurvatureProfile& profile)
{
    CurvatureProfile out = profile;
    std::reverse(out.kappa.begin(), out.kappa.end());
    if (out.tau) std::reverse(out.tau->begin(), out.tau->end());
    out.start = -(profile.start + static_cast<double>(profile.size() - 1) * profile.step);
    return out;
}

PotentialGrid transverse_residual(std::span<const double> coefficient, const Grid1D& grid)
{
    PotentialGrid out{std::vector<double>(coefficient.size()), grid, PotentialLabel::transverse_residual};
    for (std::size_t i = 0; i < coefficient.size(); ++i) out.values[i] = 0.25 * coefficient[i] * coefficient[i];
    return out;
}

MatrixSuperpotential matrix_superpotential(const CurvatureProfile& profile)
{
    profile.validate();
    if (!profile.tau) throw MissingTorsion("matrix_superpotential: profile carries no torsion");
    const auto dkappa = fd::derivative(profile.kappa, profile.step, profile.boundary);
    const auto dtau = fd::derivative(*profile.tau, profile.step, profile.boundary);
    MatrixSuperpotential out;
    out.grid = profile.grid();
    const std::size_t n = profile.size();
    out.w.resize(n);
    out.dw.resize(n);
    out.plus.resize(n);
    out.minus.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        out.w[i] = 0.5 * frenet_matrix(profile.kappa[i], (*profile.tau)[i]);
        out.dw[i] = 0.5 * frenet_matrix(dkappa[i], dtau[i]);
        const Eigen::Matrix3d w2 = out.w[i] * out.w[i];
        out.plus[i] = w2 + out.dw[i];
        out.minus[i] = w2 - out.dw[i];
    }
    return out;
}

EnergyEstimate energy_scale(double radius_m, double mass_kg)
{
    if (!(radius_m > 0.0) || !(mass_kg > 0.0)) throw ConstraintError("energy_scale: radius and mass must be > 0");
    EnergyEstimate out;
    out.radius_m = radius_m;
    out.mass_kg = mass_kg;
    out.joules = codata::hbar * codata::hbar / (8.0 * mass_kg * radius_m * radius_m);
    out.mev = out.joules / (codata::electron_volt * 1e-3);
    return out;
}

}  // namespace movframe
