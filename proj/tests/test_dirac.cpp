#include "doctest.h"

#include <cmath>
#include <numbers>

#include "movframe/dirac.hpp"
#include "movframe/errors.hpp"
#include "movframe/finite_diff.hpp"

using namespace movframe;
using std::numbers::pi;

namespace {

OrthogonalNet tanh_fermi(std::size_t ns, std::size_t nr) { return fermi_net(tanh_profile(2.0, -8, 8, ns), 0.1, nr); }

Field2D on(const OrthogonalNet& net, const TestFunction& t) { return sample(net.u, net.v, t.f); }

OrthogonalNet wavy_net(std::size_t n)
{
    // h1 depends on v through a non-affine factor, so the Gauss relation fails.
    return lame_net(Grid1D::spanning(0, 3, n), Grid1D::spanning(0.5, 2, n),
                    [](double u, double v) { return 1 + 0.2 * std::sin(u) * v * v; }, [](double, double) { return 1.0; });
}

}  // namespace

TEST_CASE("FrameOperator is linear")
{
    const auto net = tanh_fermi(64, 16);
    const FrameOperator a(net, FrameOperatorKind::a), b(net, FrameOperatorKind::b);
    const auto suite = default_test_functions();
    const Field2D f = on(net, suite[0]), g = on(net, suite[6]);
    for (const auto* op : {&a, &b}) {
        const Field2D lhs = (*op)(2.5 * f + (-1.5) * g);
        const Field2D rhs = 2.5 * (*op)(f) + (-1.5) * (*op)(g);
        double err = 0.0;
        for (std::size_t k = 0; k < lhs.size(); ++k) err = std::max(err, std::abs(lhs.data()[k] - rhs.data()[k]));
        CHECK(err < 1e-12);
    }
}

TEST_CASE("scalar identity on a constant-curvature Fermi net")
{
    const auto f = [](double s, double r) { return std::sin(2 * s) * std::exp(-r * r); };
    const auto coarse = fermi_net(constant_profile(1.0, -8, 8, 256), 0.25, 64);
    const auto fine = fermi_net(constant_profile(1.0, -8, 8, 511), 0.25, 127);
    const double rc = scalar_identity_residual(coarse, sample(coarse.u, coarse.v, f));
    const double rf = scalar_identity_residual(fine, sample(fine.u, fine.v, f), 2 * default_margin);
    CHECK(rc < 5e-3);
    CHECK(fd::convergence_order(rc, rf) >= 1.8);
}

TEST_CASE("scalar identity across the test-function suite")
{
    const auto coarse = tanh_fermi(256, 64);
    const auto fine = tanh_fermi(511, 127);
    for (const auto& t : default_test_functions()) {
        CAPTURE(t.name);
        const double rc = scalar_identity_residual(coarse, on(coarse, t));
        const double rf = scalar_identity_residual(fine, on(fine, t), 2 * default_margin);
        CHECK(rc < 5e-3);
        if (rc > 1e-9) CHECK(fd::convergence_order(rc, rf) >= 1.8);
    }
}

TEST_CASE("scalar identity: flat and non-flat controls")
{
    // Constant Lame coefficients: both sides reduce to the same stencil.
    const auto cart = cartesian_net(Grid1D::spanning(0, 2, 64), Grid1D::spanning(0, 2, 64));
    for (const auto& t : default_test_functions()) CHECK(scalar_identity_residual(cart, on(cart, t)) < 1e-9);

    const auto f = [](double u, double v) { return std::sin(u) * std::exp(-v * v); };
    const auto w1 = wavy_net(64), w2 = wavy_net(127);
    const double r1 = scalar_identity_residual(w1, sample(w1.u, w1.v, f));
    const double r2 = scalar_identity_residual(w2, sample(w2.u, w2.v, f), 2 * default_margin);
    CHECK(r1 > 1e-2);
    CHECK(r2 > 0.5 * r1);
}

TEST_CASE("commutator of A and B")
{
    const auto coarse = tanh_fermi(256, 64);
    const auto fine = tanh_fermi(511, 127);
    for (const auto& t : default_test_functions()) {
        CAPTURE(t.name);
        const double rc = commutator_AB_residual(coarse, on(coarse, t));
        const double rf = commutator_AB_residual(fine, on(fine, t), CommutatorSign::plus, 2 * default_margin);
        CHECK(rc < 1e-2);
        if (rc > 1e-9) CHECK(fd::convergence_order(rc, rf) >= 1.8);
    }
    const auto smooth = [](double s, double r) { return std::sin(s) * std::exp(-4 * r * r); };
    CHECK(commutator_AB_residual(coarse, sample(coarse.u, coarse.v, smooth)) < 5e-3);
    const auto t0 = default_test_functions()[0];
    CHECK(commutator_AB_residual(coarse, on(coarse, t0), CommutatorSign::minus) > 0.5);

    const auto cart = cartesian_net(Grid1D::spanning(0, 2, 64), Grid1D::spanning(0, 2, 64));
    for (const auto& t : default_test_functions()) CHECK(commutator_AB_residual(cart, on(cart, t)) < 1e-9);
}

TEST_CASE("commutator on the reference line")
{
    // Odd rho count puts a row on rho = 0, where [A,B] f = kappa f_s + kappa'/2 f.
    auto line_error = [](std::size_t ns, std::size_t margin) {
        const auto net = fermi_net(tanh_profile(2.0, -8, 8, ns), 0.1, 65);
        const auto f = [](double s, double r) { return std::sin(2 * s) * std::exp(-r * r); };
        const Field2D c = commutator_AB(net, sample(net.u, net.v, f));
        const std::size_t j0 = 32;
        REQUIRE(std::abs(net.v[j0]) < 1e-15);
        double err = 0.0;
        for (std::size_t i = margin; i + margin < net.u.n; ++i) {
            const double s = net.u[i];
            const double kappa = 2 * std::tanh(s), dkappa = 2 / std::pow(std::cosh(s), 2);
            err = std::max(err, std::abs(c(i, j0) - (kappa * 2 * std::cos(2 * s) + 0.5 * dkappa * std::sin(2 * s))));
        }
        return err;
    };
    const double coarse = line_error(256, default_margin);
    CHECK(coarse < 2e-2);
    CHECK(fd::convergence_order(coarse, line_error(511, 2 * default_margin)) >= 1.8);
}

TEST_CASE("A and B are anti-self-adjoint")
{
    auto bump = [](double cu, double cv, double wu, double wv) {
        return [=](double u, double v) {
            return std::exp(-(u - cu) * (u - cu) / (wu * wu) - (v - cv) * (v - cv) / (wv * wv));
        };
    };
    // Constant Lame coefficients: exact up to rounding for interior supports.
    const auto cart = cartesian_net(Grid1D::spanning(-4, 4, 129), Grid1D::spanning(-4, 4, 129));
    const Field2D f = sample(cart.u, cart.v, bump(-0.3, 0.2, 0.5, 0.5)), g = sample(cart.u, cart.v, bump(0.4, -0.1, 0.6, 0.6));
    for (auto kind : {FrameOperatorKind::a, FrameOperatorKind::b})
        CHECK(std::abs(antisymmetry_defect(FrameOperator(cart, kind), f, g)) < 1e-10);

    // Fermi net: the defect is a truncation term that shrinks under refinement.
    double prev = 0.0;
    for (std::size_t n : {64, 127, 253}) {
        const auto net = fermi_net(tanh_profile(2.0, -4, 4, n), 0.2, n);
        const Field2D ff = sample(net.u, net.v, bump(0.1, 0.0, 0.6, 0.04));
        const Field2D gg = sample(net.u, net.v, bump(-0.2, 0.01, 0.5, 0.03));
        const double norm = std::sqrt(riemannian_inner(net, ff, ff) * riemannian_inner(net, gg, gg));
        double defect = 0.0;
        for (auto kind : {FrameOperatorKind::a, FrameOperatorKind::b})
            defect = std::max(defect, std::abs(antisymmetry_defect(FrameOperator(net, kind), ff, gg)));
        CHECK(defect <= 10 * net.u.step * norm);
        if (prev > 0) CHECK(defect < 0.5 * prev);
        prev = defect;
    }
}

TEST_CASE("Fermi cancellation")
{
    for (const auto& p : {tanh_profile(2.0, -8, 8, 257), constant_profile(0.7, 0, 3, 64), constant_profile(0, 0, 1, 16)}) {
        const auto r = fermi_cancellation_report(p);
        for (double x : r.sum) CHECK(x == 0.0);
        CHECK(r.max_abs_sum() == 0.0);
        for (std::size_t i = 0; i < p.size(); ++i)
            CHECK(r.dirac_quadratic[i] == doctest::Approx(p.kappa[i] * p.kappa[i] / 4));
    }
    const auto zero = fermi_cancellation_report(constant_profile(0, 0, 1, 16));
    for (std::size_t i = 0; i < 16; ++i) {
        CHECK(zero.dacosta.values[i] == 0.0);
        CHECK(zero.dirac_quadratic[i] == 0.0);
    }

    const auto p = tanh_profile(2.0, -8, 8, 257);
    const auto general = fermi_cancellation_report(p, std::vector<double>(p.size(), 0.4));
    for (double x : general.sum) CHECK(std::abs(x - 0.04) < 1e-12);
    CHECK_THROWS_AS(fermi_cancellation_report(p, std::vector<double>(3, 0.4)), ConstraintError);
}

TEST_CASE("reduced Dirac operator")
{
    const std::size_t n = 200;
    const auto c = reduced_dirac(constant_profile(0.8, 0, pi, n));
    const auto sc = eigen(c.op, 12, false);
    const auto free = eigen(discretize(std::vector<double>(n, 0.0), Grid1D::spanning(0, pi, n),
                                       SpectralBoundary::dirichlet), 6, false);
    for (std::size_t k = 0; k < 6; ++k) {
        CHECK(std::abs(sc.values[2 * k] - free.values[k]) < 1e-10);
        CHECK(std::abs(sc.values[2 * k + 1] - free.values[k]) < 1e-10);
    }
    CHECK(c.op.symmetry_error() == 0.0);
    CHECK((c.clifford_generator + c.clifford_generator.transpose()).norm() == 0.0);
    CHECK((c.clifford_generator * c.clifford_generator + Eigen::Matrix2d::Identity()).norm() == 0.0);

    // kappa = 2 tanh: components -d^2 +- sech^2; the attractive one binds below the free box.
    const auto p = tanh_profile(2.0, -12, 12, 1024);
    const auto r = reduced_dirac(p);
    const auto box = eigen(discretize(std::vector<double>(p.size(), 0.0), p.grid(), SpectralBoundary::dirichlet), 1,
                           false);
    const auto attractive = eigen(r.component(1), 1, false);
    const auto repulsive = eigen(r.component(0), 1, false);
    CHECK(attractive.values[0] < box.values[0]);
    CHECK(repulsive.values[0] > box.values[0]);
    for (std::size_t i = 0; i < p.size(); ++i) {
        const double sech2 = 1 / std::pow(std::cosh(p.grid()[i]), 2);
        CHECK(std::abs(r.op.potential[i](0, 0) - sech2) < 1e-3);
    }

    // kappa -> -kappa swaps the spinor components exactly.
    CurvatureProfile neg = p;
    for (auto& k : neg.kappa) k = -k;
    const Eigen::MatrixXd h = r.op.dense(), hn = reduced_dirac(neg).op.dense();
    Eigen::MatrixXd swap = Eigen::MatrixXd::Zero(h.rows(), h.cols());
    for (Eigen::Index k = 0; k < h.rows(); k += 2) swap(k, k + 1) = swap(k + 1, k) = 1;
    CHECK((swap * h * swap - hn).cwiseAbs().maxCoeff() == 0.0);

    // s -> -s together with the component swap leaves the spectrum unchanged.
    const auto a = eigen(r.op, 8, false);
    const auto b = eigen(reduced_dirac(orientation_reverse(p)).op, 8, false);
    for (std::size_t k = 0; k < 8; ++k) CHECK(std::abs(a.values[k] - b.values[k]) < 1e-9);

    CHECK_THROWS_AS(reduced_dirac(p, SpectralBoundary::periodic), ConstraintError);
}

TEST_CASE("Riccati flow")
{
    const auto rho = Grid1D::spanning(0, 0.5, 501);
    const auto k1 = riccati_flow(1.0, rho);
    CHECK(std::abs(k1.back() - 2.0 / 3.0) < 1e-8);
    CHECK(riccati_residual(k1, rho) < 1e-6);

    for (double x : riccati_flow(0.0, rho)) CHECK(x == 0.0);

    CHECK_THROWS_AS(riccati_flow(-1.0, Grid1D::spanning(0, 1, 1001)), FocalPoint);
    CHECK_THROWS_AS(riccati_flow(-1.0, Grid1D::spanning(0, 1.2, 1201)), FocalPoint);

    // Fourth order: halving the step divides the error by about 16.
    auto max_err = [](std::size_t n) {
        const auto g = Grid1D::spanning(0, 0.8, n);
        const auto k = riccati_flow(1.0, g);
        double e = 0.0;
        for (std::size_t i = 0; i < n; ++i) e = std::max(e, std::abs(k[i] - 1 / (1 + g[i])));
        return e;
    };
    CHECK(fd::convergence_order(max_err(17), max_err(33)) > 3.8);

    // Grids straddling rho = 0 without a node there.
    const auto sym = Grid1D::spanning(-0.3, 0.3, 64);
    const auto ks = riccati_flow(2.0, sym);
    for (std::size_t i = 0; i < sym.n; ++i) CHECK(ks[i] == doctest::Approx(2 / (1 + 2 * sym[i])).epsilon(1e-6));

    const auto field = riccati_flow(tanh_profile(2.0, -8, 8, 33), sym);
    CHECK(field.nu() == 33);
    CHECK(field(0, 10) == doctest::Approx(riccati_flow(2 * std::tanh(-8.0), sym)[10]));
}
