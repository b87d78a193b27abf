#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>

#include "movframe/errors.hpp"
#include "movframe/finite_diff.hpp"
#include "movframe/spectral.hpp"

#include <unsupported/Eigen/MatrixFunctions>

using namespace movframe;
using std::numbers::pi;

namespace {

// Closed-form spectrum of the three-point Laplacian: Dirichlet with m interior
// nodes, or periodic with n nodes.
double dirichlet_laplacian(std::size_t k, double h) { return 4 / (h * h) * std::pow(std::sin(k * h / 2), 2); }

std::vector<double> column(const Spectrum& s, Eigen::Index j)
{
    const auto& v = *s.vectors;
    return {v.col(j).data(), v.col(j).data() + v.rows()};
}

CurvatureProfile helix_profile(std::size_t n)
{
    // One period of the helix with a = 3, b = 4 has length 10 pi.
    auto p = constant_profile(0.12, 0, 10 * pi, n, Boundary::periodic);
    p.tau = std::vector<double>(n, 0.16);
    return p;
}

double sech(double s) { return 1 / std::cosh(s); }

}  // namespace

TEST_CASE("discretize: stencil and errors")
{
    const auto g = Grid1D::spanning(0, 1, 20);
    std::vector<double> v(20);
    for (std::size_t i = 0; i < 20; ++i) v[i] = std::sin(double(i));
    const auto op = discretize(v, g, SpectralBoundary::dirichlet);
    CHECK(op.dimension() == 18);
    const auto t = op.tridiagonal();
    const double k = 1 / (g.step * g.step);
    for (std::size_t r = 0; r < 18; ++r) CHECK(t.diagonal[r] == doctest::Approx(2 * k + v[r + 1]));
    for (double e : t.off_diagonal) CHECK(e == -k);
    const Eigen::MatrixXd h = op.dense();
    CHECK((h - h.transpose()).cwiseAbs().maxCoeff() == 0.0);

    const auto pg = Grid1D::periodic(0, 1, 20);
    const Eigen::MatrixXd hp = discretize(v, pg, SpectralBoundary::periodic).dense();
    CHECK(hp(0, 19) == -1 / (pg.step * pg.step));
    CHECK(hp(19, 0) == hp(0, 19));

    CHECK_THROWS_AS(discretize(std::vector<double>(15, 0.0), Grid1D::spanning(0, 1, 15), SpectralBoundary::dirichlet),
                    GridTooSmall);
    CHECK_THROWS_AS(discretize(v, g, SpectralBoundary::periodic), ConstraintError);
    CHECK_THROWS_AS(discretize(v, Grid1D::spanning(0, 1, 21), SpectralBoundary::dirichlet), ConstraintError);
}

TEST_CASE("eigen: particle in a box")
{
    const std::size_t n = 2048;
    const auto g = Grid1D::spanning(0, pi, n);
    const auto op = discretize(std::vector<double>(n, 0.0), g, SpectralBoundary::dirichlet);
    const auto s = eigen(op, 6);
    CHECK(std::abs(s.values[0] - 1.0) < 1e-3);
    for (std::size_t k = 1; k <= 6; ++k) {
        CHECK(s.values[k - 1] == doctest::Approx(dirichlet_laplacian(k, g.step)).epsilon(1e-10));
        CHECK(std::abs(s.values[k - 1] - double(k * k)) < 1e-3 * double(k * k));
    }
    CHECK(s.max_residual <= 1e-8 * op.norm_bound());

    // Unit h-weighted norm, zero at the walls, matches sin(k s).
    const auto& v = *s.vectors;
    for (Eigen::Index j = 0; j < 6; ++j) {
        CHECK(v.col(j).squaredNorm() * g.step == doctest::Approx(1.0).epsilon(1e-10));
        CHECK(v(0, j) == 0.0);
        CHECK(v(Eigen::Index(n - 1), j) == 0.0);
    }
    std::vector<double> exact(n);
    for (std::size_t i = 0; i < n; ++i) exact[i] = std::sin(3 * g[i]);
    CHECK(std::abs(cosine_similarity(column(s, 2), exact)) > 1 - 1e-8);

    // Constant shift.
    const auto shifted = eigen(discretize(std::vector<double>(n, 0.75), g, SpectralBoundary::dirichlet), 6, false);
    for (std::size_t k = 0; k < 6; ++k) CHECK(std::abs(shifted.values[k] - s.values[k] - 0.75) < 1e-9);
    CHECK_FALSE(shifted.vectors.has_value());
}

TEST_CASE("eigen: periodic free particle")
{
    const std::size_t n = 256;
    const auto g = Grid1D::periodic(0, 2 * pi, n);
    const auto s = eigen(discretize(std::vector<double>(n, 0.0), g, SpectralBoundary::periodic), 7);
    CHECK(std::abs(s.values[0]) < 1e-12);
    for (std::size_t m = 1; m <= 3; ++m) {
        const double oracle = dirichlet_laplacian(m, g.step);
        CHECK(s.values[2 * m - 1] == doctest::Approx(oracle).epsilon(1e-10));
        CHECK(s.values[2 * m] == doctest::Approx(oracle).epsilon(1e-10));
        CHECK(std::abs(oracle - double(m * m)) < 5e-3 * double(m * m));
    }
}

TEST_CASE("tridiagonal solver agrees with the dense route")
{
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> u(-3, 3);
    for (int trial = 0; trial < 5; ++trial) {
        SymmetricTridiagonal t;
        const std::size_t m = 40 + 13 * trial;
        for (std::size_t i = 0; i < m; ++i) t.diagonal.push_back(u(rng));
        for (std::size_t i = 0; i + 1 < m; ++i) t.off_diagonal.push_back(u(rng));
        Eigen::MatrixXd d = Eigen::MatrixXd::Zero(Eigen::Index(m), Eigen::Index(m));
        for (std::size_t i = 0; i < m; ++i) d(Eigen::Index(i), Eigen::Index(i)) = t.diagonal[i];
        for (std::size_t i = 0; i + 1 < m; ++i)
            d(Eigen::Index(i), Eigen::Index(i + 1)) = d(Eigen::Index(i + 1), Eigen::Index(i)) = t.off_diagonal[i];
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(d);
        const auto s = tridiagonal_eigen(t, m);
        for (std::size_t j = 0; j < m; ++j) CHECK(std::abs(s.values[j] - es.eigenvalues()[Eigen::Index(j)]) < 1e-12);
        const Eigen::MatrixXd& v = *s.vectors;
        CHECK((v.transpose() * v - Eigen::MatrixXd::Identity(Eigen::Index(m), Eigen::Index(m))).cwiseAbs().maxCoeff() <
              1e-9);
        for (std::size_t i = 1; i < m; ++i) CHECK(s.values[i] >= s.values[i - 1]);
    }

    // Decoupled blocks give exact degeneracies.
    SymmetricTridiagonal t{{1, 2, 1, 2}, {1, 0, 1}};
    const auto s = tridiagonal_eigen(t, 4);
    CHECK(s.values[0] == doctest::Approx(s.values[1]));
    const Eigen::MatrixXd& v = *s.vectors;
    CHECK(std::abs(v.col(0).dot(v.col(1))) < 1e-12);
    CHECK_THROWS_AS(tridiagonal_eigen(t, 5), ConstraintError);
}

TEST_CASE("eigen: Poschl-Teller ground state")
{
    const std::size_t n = 2048;
    const auto p = tanh_profile(2.0, -12, 12, n);
    const auto sp = susy_partners(p);
    const auto op = discretize(sp.minus);
    const auto s = eigen(op, 4);
    CHECK(std::abs(s.values[0]) < 2e-3);
    CHECK(s.values[1] >= 1.0);
    CHECK(s.max_residual <= 1e-8 * op.norm_bound());
    std::vector<double> oracle(n);
    for (std::size_t i = 0; i < n; ++i) oracle[i] = sech(p.grid()[i]);
    CHECK(cosine_similarity(column(s, 0), oracle) > 1 - 1e-6);
}

TEST_CASE("susy_pairing bookkeeping")
{
    std::mt19937 rng(99);
    std::uniform_real_distribution<double> u(0, 2);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<double> a(10 + trial % 4), b(10);
        for (auto& x : a) x = u(rng);
        for (auto& x : b) x = u(rng);
        const auto r = susy_pairing(a, b, 0.1, 0.05);
        CHECK(r.pairs.size() * 2 + r.unpaired.size() == a.size() + b.size());
        std::size_t plus_seen = r.pairs.size(), minus_seen = r.pairs.size();
        for (const auto& up : r.unpaired) (up.side == PartnerSide::plus ? plus_seen : minus_seen)++;
        CHECK(plus_seen == a.size());
        CHECK(minus_seen == b.size());
        for (const auto& pr : r.pairs) {
            CHECK(pr.gap <= 0.05);
            CHECK(pr.plus > 0.1);
        }
    }

    const auto c = constant_profile(0.8, 0, 10, 256);
    const auto sp = susy_partners(c);
    const auto sa = eigen(discretize(sp.plus), 8, false);
    const auto sb = eigen(discretize(sp.minus), 8, false);
    const auto r = susy_pairing(sa, sb, 0.0, 0.0);
    CHECK(r.pairs.size() == 8);
    CHECK(r.max_gap() == 0.0);
}

TEST_CASE("factorized partners pair exactly with one zero mode")
{
    const std::size_t n = 2048;
    const auto p = tanh_profile(2.0, -12, 12, n);
    const auto w = susy_partners(p).superpotential.w;
    const auto fp = factorized_partners(w, p.grid());
    const auto sm = tridiagonal_eigen(fp.minus, 12, false);
    const auto spl = tridiagonal_eigen(fp.plus, 11, false);
    CHECK(std::abs(sm.values[0]) < 1e-8);
    const auto r = susy_pairing(spl, sm, 0.05, 1e-8);
    CHECK(r.pairs.size() == 11);
    CHECK(r.near_zero_count() == 1);
    CHECK(r.unpaired.front().side == PartnerSide::minus);
    // Continuum edge of the Poschl-Teller pair.
    CHECK(spl.values[0] > 1.0);
}

TEST_CASE("matrix partners")
{
    const std::size_t n = 96;
    const auto ms = matrix_superpotential(helix_profile(n));
    const auto hp = eigen(discretize(ms.plus, ms.grid, SpectralBoundary::periodic), 30, false);
    const auto hm = eigen(discretize(ms.minus, ms.grid, SpectralBoundary::periodic), 30, false);
    for (std::size_t j = 0; j < 30; ++j) CHECK(std::abs(hp.values[j] - hm.values[j]) < 1e-6);
    const auto r = susy_pairing(hp, hm, 1e-9, 1e-6);
    CHECK(r.unpaired_above_floor(PartnerSide::minus) == 0);

    // W' is antisymmetric, so a curved planar profile gives non-symmetric partners.
    auto planar = tanh_profile(2.0, -4, 4, 64);
    planar.tau = std::vector<double>(64, 0.0);
    const auto mp = matrix_superpotential(planar);
    CHECK_THROWS_AS(eigen(discretize(mp.plus, mp.grid, SpectralBoundary::dirichlet), 4), NonSymmetricOperator);
}

TEST_CASE("ground_state_transport: scalar")
{
    const std::size_t n = 2048;
    const auto p = tanh_profile(2.0, -12, 12, n);
    const auto psi = ground_state_transport(p.kappa, p.grid());
    const auto s = eigen(discretize(susy_partners(p).minus), 1);
    CHECK(cosine_similarity(psi, column(s, 0)) > 1 - 1e-4);
    for (std::size_t i = 0; i < n; i += 97)
        CHECK(psi[i] == doctest::Approx(sech(p.grid()[i]) * std::cosh(12.0)).epsilon(1e-4));

    const double coarse = annihilation_residual(psi, p.kappa, p.grid());
    const auto pf = tanh_profile(2.0, -12, 12, 2 * n - 1);
    const double fine = annihilation_residual(ground_state_transport(pf.kappa, pf.grid()), pf.kappa, pf.grid());
    CHECK(coarse < 1e-4);
    CHECK(fd::convergence_order(coarse, fine) >= 1.8);

    const double wrong = annihilation_residual(psi, p.kappa, p.grid(), CovariantSign::minus);
    const double wrong_fine =
        annihilation_residual(ground_state_transport(pf.kappa, pf.grid()), pf.kappa, pf.grid(), CovariantSign::minus);
    CHECK(wrong > 0.1);
    CHECK(wrong_fine > 0.5 * wrong);

    const auto g = Grid1D::spanning(0, 1, 32);
    const std::vector<double> zero(32, 0.0);
    const auto flat = ground_state_transport(zero, g, 2.5);
    for (double x : flat) CHECK(x == 2.5);
    CHECK(annihilation_residual(flat, zero, g) == 0.0);
}

TEST_CASE("ground_state_transport: helix frame")
{
    const std::size_t n = 1024;
    const auto p = helix_profile(n);
    std::vector<Eigen::Matrix3d> a(n);
    for (std::size_t i = 0; i < n; ++i) a[i] = frenet_matrix(p, i);
    const auto u = transport_propagator(a, p.grid());
    REQUIRE(u.size() == n + 1);
    const Eigen::Matrix3d r = u.back();
    CHECK((r.transpose() * r - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff() < 1e-8);
    CHECK(r.determinant() == doctest::Approx(1.0).epsilon(1e-10));
    // Constant generator: the ordered product is exp(-L A / 2).
    const Eigen::Matrix3d gen = -0.5 * p.grid().length() * a[0];
    const Eigen::Matrix3d exact = gen.exp();
    CHECK((r - exact).cwiseAbs().maxCoeff() < 1e-10);

    Eigen::VectorXd psi0 = Eigen::Vector3d(1, 0, 0);
    const auto psi = ground_state_transport(a, p.grid(), psi0);
    for (const auto& v : psi) CHECK(v.norm() == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(annihilation_residual(psi, a, p.grid()) < 1e-5);
    CHECK(annihilation_residual(psi, a, p.grid(), CovariantSign::minus) > 1e-2);
}
