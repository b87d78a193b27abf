#include "movframe/dirac.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "movframe/errors.hpp"
#include "movframe/finite_diff.hpp"

namespace movframe {

FrameOperator::FrameOperator(const OrthogonalNet& net, FrameOperatorKind kind)
    : net_(net), kind_(kind), k_(net_connection(net))
{
}

Field2D FrameOperator::operator()(const Field2D& f) const
{
    if (kind_ == FrameOperatorKind::a) return apply_e1(net_, f) - 0.5 * (k_.k2 * f);
    return apply_e2(net_, f) + 0.5 * (k_.k1 * f);
}

double riemannian_inner(const OrthogonalNet& net, const Field2D& f, const Field2D& g)
{
    double sum = 0.0;
    for (std::size_t k = 0; k < f.size(); ++k) sum += f.data()[k] * g.data()[k] * net.h1.data()[k] * net.h2.data()[k];
    return sum * net.u.step * net.v.step;
}

double antisymmetry_defect(const FrameOperator& op, const Field2D& f, const Field2D& g)
{
    return riemannian_inner(op.net(), op(f), g) + riemannian_inner(op.net(), f, op(g));
}

double scalar_identity_residual(const OrthogonalNet& net, const Field2D& f, std::size_t margin)
{
    const FrameOperator a(net, FrameOperatorKind::a), b(net, FrameOperatorKind::b);
    const auto k = net_connection(net);
    const Field2D lhs = -1.0 * (a(a(f)) + b(b(f)));
    const Field2D rhs = -1.0 * moving_frame_laplacian(net, f) + 0.25 * (connection_invariant(k) * f);
    return fd::interior_max_abs(lhs - rhs, net.u, net.v, margin);
}

Field2D commutator_AB(const OrthogonalNet& net, const Field2D& f)
{
    const FrameOperator a(net, FrameOperatorKind::a), b(net, FrameOperatorKind::b);
    return a(b(f)) - b(a(f));
}

double commutator_AB_residual(const OrthogonalNet& net, const Field2D& f, CommutatorSign sign, std::size_t margin)
{
    const auto k = net_connection(net);
    const double s = sign == CommutatorSign::plus ? 1.0 : -1.0;
    const Field2D first_order = s * (k.k1 * apply_e1(net, f) + k.k2 * apply_e2(net, f));
    const Field2D zeroth_order = 0.5 * ((apply_e1(net, k.k1) + apply_e2(net, k.k2)) * f);
    return fd::interior_max_abs(commutator_AB(net, f) - (first_order + zeroth_order), net.u, net.v, margin);
}

std::vector<TestFunction> default_test_functions()
{
    return {
        {"sin(2u)exp(-v^2)", [](double u, double v) { return std::sin(2 * u) * std::exp(-v * v); }},
        {"cos(u/2)exp(-v^2)", [](double u, double v) { return std::cos(0.5 * u) * std::exp(-v * v); }},
        {"sin(u)exp(-4v^2)", [](double u, double v) { return std::sin(u) * std::exp(-4 * v * v); }},
        // Polynomials are scaled to unit size on u in [-8, 8].
        {"1", [](double, double) { return 1.0; }},
        {"u/8", [](double u, double) { return u / 8; }},
        {"v", [](double, double v) { return v; }},
        {"(u/8) v", [](double u, double v) { return u / 8 * v; }},
        {"(u/8)^2 - v^2", [](double u, double v) { return u * u / 64 - v * v; }},
        {"v^3", [](double, double v) { return v * v * v; }},
        {"(u/8)^3 + (u/8) v^2", [](double u, double v) { return std::pow(u / 8, 3) + u / 8 * v * v; }},
    };
}

double CancellationReport::max_abs_sum() const
{
    double m = 0.0;
    for (double x : sum) m = std::max(m, std::abs(x));
    return m;
}

CancellationReport fermi_cancellation_report(const CurvatureProfile& profile)
{
    CancellationReport r;
    r.dacosta = dacosta_curve(profile);
    r.dirac_quadratic.resize(r.dacosta.values.size());
    r.sum.resize(r.dacosta.values.size());
    for (std::size_t i = 0; i < r.sum.size(); ++i) {
        r.dirac_quadratic[i] = -r.dacosta.values[i];
        r.sum[i] = r.dacosta.values[i] + r.dirac_quadratic[i];
    }
    return r;
}

CancellationReport fermi_cancellation_report(const CurvatureProfile& profile, std::span<const double> k2)
{
    if (k2.size() != profile.size()) throw ConstraintError("fermi_cancellation_report: k2 length does not match");
    CancellationReport r = fermi_cancellation_report(profile);
    const auto residual = transverse_residual(k2, profile.grid());
    for (std::size_t i = 0; i < r.sum.size(); ++i) {
        r.dirac_quadratic[i] = -r.dacosta.values[i] + residual.values[i];
        r.sum[i] = r.dacosta.values[i] + r.dirac_quadratic[i];
    }
    return r;
}

SchrodingerOperator ReducedDiracOperator::component(int index) const
{
    if (index != 0 && index != 1) throw ConstraintError("ReducedDiracOperator::component: index must be 0 or 1");
    SchrodingerOperator c{op.grid, op.boundary, 1, {}};
    c.potential.reserve(op.potential.size());
    for (const auto& v : op.potential) c.potential.push_back(v.block(index, index, 1, 1));
    return c;
}

ReducedDiracOperator reduced_dirac(const CurvatureProfile& profile, SpectralBoundary boundary)
{
    const auto grid = profile.grid();
    if (boundary == SpectralBoundary::periodic && grid.boundary != Boundary::periodic)
        throw ConstraintError("reduced_dirac: periodic operator needs a periodic profile");
    if (profile.size() < 16) throw GridTooSmall("reduced_dirac: at least 16 samples required");
    const auto dkappa = fd::derivative(profile.kappa, profile.step, profile.boundary);
    ReducedDiracOperator r;
    r.op = {grid, boundary, 2, {}};
    r.op.potential.reserve(dkappa.size());
    for (double d : dkappa) r.op.potential.push_back(0.5 * d * r.sigma);
    return r;
}

namespace {

double rk4_step(double k, double h)
{
    auto f = [](double y) { return -y * y; };
    const double a = f(k);
    const double b = f(k + 0.5 * h * a);
    const double c = f(k + 0.5 * h * b);
    const double d = f(k + h * c);
    return k + h / 6 * (a + 2 * b + 2 * c + d);
}

void guard(double k, double rho, double limit)
{
    if (!std::isfinite(k) || std::abs(k) > limit) {
        std::ostringstream msg;
        msg << "riccati_flow: k1 = " << k << " exceeds 1/h_rho = " << limit << " at rho = " << rho
            << " (focal point ahead)";
        throw FocalPoint(msg.str());
    }
}

}  // namespace

std::vector<double> riccati_flow(double kappa0, const Grid1D& rho)
{
    if (rho.n == 0 || !(rho.step > 0)) throw ConstraintError("riccati_flow: empty rho grid");
    const double limit = 1.0 / rho.step;
    std::vector<double> k1(rho.n);
    // First node at or above rho = 0.
    std::size_t up = 0;
    while (up < rho.n && rho[up] < 0) ++up;
    double k = kappa0, at = 0.0;
    for (std::size_t i = up; i < rho.n; ++i) {
        k = rho[i] == at ? k : rk4_step(k, rho[i] - at);
        at = rho[i];
        guard(k, at, limit);
        k1[i] = k;
    }
    k = kappa0;
    at = 0.0;
    for (std::size_t i = up; i-- > 0;) {
        k = rk4_step(k, rho[i] - at);
        at = rho[i];
        guard(k, at, limit);
        k1[i] = k;
    }
    return k1;
}

Field2D riccati_flow(const CurvatureProfile& profile, const Grid1D& rho)
{
    Field2D out(profile.size(), rho.n);
    for (std::size_t i = 0; i < profile.size(); ++i) {
        const auto row = riccati_flow(profile.kappa[i], rho);
        std::copy(row.begin(), row.end(), out.row(i).begin());
    }
    return out;
}

double riccati_residual(std::span<const double> k1, const Grid1D& rho)
{
    const auto d = fd::derivative4(k1, rho.step, Boundary::open);
    double r = 0.0;
    for (std::size_t i = 0; i < k1.size(); ++i) r = std::max(r, std::abs(d[i] + k1[i] * k1[i]));
    return r;
}

}  // namespace movframe
