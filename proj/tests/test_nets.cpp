#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>

#include "movframe/errors.hpp"
#include "movframe/finite_diff.hpp"
#include "movframe/nets.hpp"

using namespace movframe;
using std::numbers::pi;

namespace {

double max_abs(const Field2D& f, const OrthogonalNet& net, std::size_t margin = default_margin)
{
    return fd::interior_max_abs(f, net.u, net.v, margin);
}

// Smooth random perturbation of a flat net; its metric has K != 0.
OrthogonalNet perturbed_net(std::size_t nu, std::size_t nv)
{
    std::mt19937 rng(1234);
    std::uniform_real_distribution<double> amp(0.02, 0.06), freq(0.5, 2.0), phase(0.0, 2 * pi);
    struct Mode { double a, fu, fv, p; };
    std::vector<Mode> modes;
    for (int k = 0; k < 4; ++k) modes.push_back({amp(rng), freq(rng), freq(rng), phase(rng)});
    auto h1 = [modes](double u, double v) {
        double h = 1.0;
        for (const auto& m : modes) h += m.a * std::sin(m.fu * u + m.p) * std::sin(m.fv * v);
        return h;
    };
    return lame_net(Grid1D::spanning(0, 4, nu), Grid1D::spanning(0.5, 2.5, nv), h1, [](double, double) { return 1.0; });
}

OrthogonalNet tanh_fermi(std::size_t ns, std::size_t nr, double rho_max = 0.1)
{
    return fermi_net(tanh_profile(2.0, -8, 8, ns), rho_max, nr);
}

}  // namespace

TEST_CASE("net_connection: Fermi, Cartesian and polar nets")
{
    const auto net = fermi_net(constant_profile(1.0, -8, 8, 256), 0.25, 64);
    const auto k = net_connection(net);
    double err = 0.0, k2max = 0.0;
    for (std::size_t i = 0; i < net.u.n; ++i)
        for (std::size_t j = 0; j < net.v.n; ++j) {
            err = std::max(err, std::abs(k.k1(i, j) - 1.0 / (1.0 + net.v[j])));
            k2max = std::max(k2max, std::abs(k.k2(i, j)));
        }
    CHECK(err < 1e-6);
    CHECK(k2max < 1e-12);

    const auto cart = cartesian_net(Grid1D::spanning(0, 1, 32), Grid1D::spanning(0, 1, 32));
    const auto kc = net_connection(cart);
    for (double x : kc.k1.data()) CHECK(x == 0.0);
    for (double x : kc.k2.data()) CHECK(x == 0.0);

    // Lame formulas with h1 = 1, h2 = r: the only coefficient is -(d_r r)/r = -1/r.
    const auto polar = polar_net(Grid1D::spanning(0.5, 2.0, 64), Grid1D::periodic(0, 2 * pi, 64));
    const auto kp = net_connection(polar);
    for (std::size_t i = 0; i < polar.u.n; ++i)
        for (std::size_t j = 0; j < polar.v.n; ++j) {
            CHECK(kp.k1(i, j) == 0.0);
            CHECK(kp.k2(i, j) == doctest::Approx(-1.0 / polar.u[i]).epsilon(1e-12));
        }
}

TEST_CASE("gauss_residual converges on flat nets")
{
    const auto coarse = gauss_residual(fermi_net(constant_profile(1.0, -8, 8, 256), 0.25, 64));
    // Refined residuals exclude the same physical boundary band (twice the rows).
    const auto fine = gauss_residual(fermi_net(constant_profile(1.0, -8, 8, 511), 0.25, 127), 2 * default_margin);
    CHECK(coarse < 1e-3);
    CHECK(coarse / fine >= 3.5);

    const double tc = gauss_residual(tanh_fermi(256, 64));
    const double tf = gauss_residual(tanh_fermi(511, 127), 2 * default_margin);
    CHECK(tc < 5e-3);
    CHECK(fd::convergence_order(tc, tf) >= 1.8);

    CHECK(gauss_residual(cartesian_net(Grid1D::spanning(0, 1, 16), Grid1D::spanning(0, 1, 16))) == 0.0);

    const double pc = gauss_residual(polar_net(Grid1D::spanning(0.5, 2.0, 64), Grid1D::periodic(0, 2 * pi, 64)));
    const double pf = gauss_residual(polar_net(Grid1D::spanning(0.5, 2.0, 127), Grid1D::periodic(0, 2 * pi, 128)),
                                     2 * default_margin);
    CHECK(fd::convergence_order(pc, pf) >= 1.8);
}

TEST_CASE("gauss_residual does not converge on a curved metric")
{
    const double coarse = gauss_residual(perturbed_net(64, 64));
    const double fine = gauss_residual(perturbed_net(127, 127));
    CHECK(coarse > 1e-2);
    CHECK(coarse / fine < 1.5);
}

TEST_CASE("commutator_residual")
{
    auto f_of = [](const OrthogonalNet& net) {
        return sample(net.u, net.v, [](double s, double r) { return std::sin(s) * std::exp(-r * r); });
    };
    const auto nc = fermi_net(constant_profile(1.0, -8, 8, 256), 0.25, 64);
    const auto nf = fermi_net(constant_profile(1.0, -8, 8, 511), 0.25, 127);
    const double rc = commutator_residual(nc, f_of(nc));
    const double rf = commutator_residual(nf, f_of(nf), CommutatorSign::plus, 2 * default_margin);
    CHECK(rc < 5e-3);
    CHECK(fd::convergence_order(rc, rf) >= 1.8);

    // The opposite sign is an O(1) mismatch that does not shrink.
    const double wc = commutator_residual(nc, f_of(nc), CommutatorSign::minus);
    const double wf = commutator_residual(nf, f_of(nf), CommutatorSign::minus);
    CHECK(wc > 0.1);
    CHECK(wc / wf < 1.5);

    CHECK(commutator_residual(nc, Field2D(nc.u.n, nc.v.n, 3.0)) == 0.0);

    const auto cart = cartesian_net(Grid1D::spanning(-1, 1, 64), Grid1D::spanning(-1, 1, 64));
    const auto g = sample(cart.u, cart.v, [](double x, double y) { return std::sin(2 * x) * std::cos(3 * y); });
    CHECK(commutator_residual(cart, g) < 1e-12);
}

TEST_CASE("moving_frame_laplacian")
{
    const auto cart = cartesian_net(Grid1D::spanning(-1, 1, 33), Grid1D::spanning(-1, 1, 33));
    const auto lc = moving_frame_laplacian(cart, sample(cart.u, cart.v, [](double x, double y) { return x * x + y * y; }));
    CHECK(fd::interior_max_abs(lc - Field2D(33, 33, 4.0), cart.u, cart.v, default_margin) < 1e-10);

    const auto polar = polar_net(Grid1D::spanning(0.5, 2.0, 64), Grid1D::periodic(0, 2 * pi, 64));
    const auto lp = moving_frame_laplacian(polar, sample(polar.u, polar.v, [](double r, double) { return r * r; }));
    CHECK(fd::interior_max_abs(lp - Field2D(64, 64, 4.0), polar.u, polar.v, default_margin) < 1e-10);

    // Cross-discretization: frame form against the conservative divergence form.
    auto diff = [](const OrthogonalNet& net, std::size_t margin) {
        const auto f = sample(net.u, net.v, [](double s, double r) { return std::cos(0.5 * s) * std::exp(-r * r); });
        return max_abs(moving_frame_laplacian(net, f) - divergence_laplacian(net, f), net, margin);
    };
    const double dc = diff(tanh_fermi(256, 64), default_margin);
    const double df = diff(tanh_fermi(511, 127), 2 * default_margin);
    CHECK(dc < 1e-3);
    CHECK(fd::convergence_order(dc, df) >= 1.8);

    // Polar cross-check with a non-radial function.
    const auto g = sample(polar.u, polar.v, [](double r, double p) { return r * r * r * std::cos(p); });
    CHECK(max_abs(moving_frame_laplacian(polar, g) - divergence_laplacian(polar, g), polar) < 5e-3);
}

TEST_CASE("fermi_net")
{
    CHECK_NOTHROW(fermi_net(constant_profile(1.0, 0, 1, 16), 0.5, 9));
    CHECK_THROWS_AS(fermi_net(constant_profile(1.0, 0, 1, 16), 1.5, 9), FocalPointInStrip);
    try {
        fermi_net(constant_profile(1.0, 0, 1, 16), 1.5, 9);
    } catch (const FocalPointInStrip& e) {
        CHECK(std::string(e.what()).find("(s, rho)") != std::string::npos);
    }

    const auto flat = fermi_net(constant_profile(0.0, 0, 1, 16), 0.5, 9);
    for (double h : flat.h1.data()) CHECK(h == 1.0);
    for (double h : flat.h2.data()) CHECK(h == 1.0);

    const auto p = tanh_profile(2.0, -8, 8, 257);
    const auto net = fermi_net(p, 0.25, 129);
    const auto k = net_connection(net);
    double err = 0.0, k2max = 0.0;
    for (std::size_t i = 0; i < net.u.n; ++i)
        for (std::size_t j = 0; j < net.v.n; ++j) {
            err = std::max(err, std::abs(k.k1(i, j) - p.kappa[i] / (1 + net.v[j] * p.kappa[i])));
            k2max = std::max(k2max, std::abs(k.k2(i, j)));
        }
    CHECK(err < 1e-6);
    CHECK(k2max < 1e-12);

    // Riccati sign on the strip: e2 k1 = -k1^2.
    const auto riccati = apply_e2(net, k.k1) + k.k1 * k.k1;
    CHECK(max_abs(riccati, net) < 1e-2);
}

TEST_CASE("OrthogonalNet::validate")
{
    auto net = cartesian_net(Grid1D::spanning(0, 1, 8), Grid1D::spanning(0, 1, 8));
    net.h1(3, 4) = -0.1;
    CHECK_THROWS_AS(net.validate(), ConstraintError);
    net.h1 = Field2D(7, 8, 1.0);
    CHECK_THROWS_AS(net.validate(), ConstraintError);
}

TEST_CASE("connection_invariant")
{
    const auto net = fermi_net(constant_profile(1.0, 0, 1, 16), 0.25, 9);
    const auto k = net_connection(net);
    const auto inv = connection_invariant(k);
    for (std::size_t n = 0; n < inv.size(); ++n)
        CHECK(inv.data()[n] == k.k1.data()[n] * k.k1.data()[n] + k.k2.data()[n] * k.k2.data()[n]);

    // Frenet data: omega^1_2 = kappa theta^s, omega^2_3 = tau theta^s.
    const std::vector<ConnectionComponent> frenet{{1, 2, 1, 0.12}, {2, 3, 1, 0.16}, {1, 3, 1, 0.0}};
    CHECK(connection_invariant(frenet) == doctest::Approx(0.04).epsilon(1e-14));
    const std::vector<ConnectionComponent> zero{{1, 2, 1, 0.0}, {1, 2, 2, 0.0}};
    CHECK(connection_invariant(zero) == 0.0);
    const std::vector<ConnectionComponent> bad{{2, 1, 1, 0.3}};
    CHECK_THROWS_AS(connection_invariant(bad), ConstraintError);
}

TEST_CASE("darboux_vector")
{
    const auto frenet = frenet_apparatus(make_helix(3.0, 4.0, 1.0, 1024));
    const auto frames = frames_of(frenet);
    const auto field = darboux_vector(frames, frenet.profile.step, frenet.profile.boundary);
    for (const auto& c : field.components) {
        CHECK(std::abs(c[0] - 0.16) < 1e-3);
        CHECK(std::abs(c[1]) < 1e-3);
        CHECK(std::abs(c[2] - 0.12) < 1e-3);
    }
    CHECK(darboux_residual(frames, field, frenet.profile.step, frenet.profile.boundary) < 1e-6);

    const std::vector<Frame> still(32, Frame{Vec3::UnitX(), Vec3::UnitY(), Vec3::UnitZ()});
    for (const auto& w : darboux_vector(still, 0.1, Boundary::open).vector) CHECK(w.norm() == 0.0);

    auto circle = make_circle(2.0, 256);
    circle.dimension = 3;
    const auto cf = frenet_apparatus(circle);
    for (const auto& w : darboux_vector(frames_of(cf), cf.profile.step, cf.profile.boundary).vector)
        CHECK(std::abs(w.norm() - 0.5) < 1e-4);
}
