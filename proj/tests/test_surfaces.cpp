#include "doctest.h"

#include <cmath>
#include <numbers>

#include "movframe/errors.hpp"
#include "movframe/finite_diff.hpp"
#include "movframe/potentials.hpp"
#include "movframe/surfaces.hpp"

using namespace movframe;
using std::numbers::pi;

namespace {

double interior_max(const Field2D& f, const SurfacePatch& p) { return fd::interior_max_abs(f, p.u, p.v, surface_margin); }

double interior_max_dev(const Field2D& f, const SurfacePatch& p, double target)
{
    Field2D d = f;
    for (double& x : d.data()) x = std::abs(x) - target;
    return interior_max(d, p);
}

void check_real_principal_curvatures(const SurfacePatch& p)
{
    const auto f = fundamental_forms(p);
    for (std::size_t k = 0; k < f.H.size(); ++k) CHECK(f.H.data()[k] * f.H.data()[k] - f.K.data()[k] >= -1e-9);
}

}  // namespace

TEST_CASE("fundamental forms of closed-form surfaces")
{
    const auto cyl = cylinder_patch(1.0, 0, 2, 512, 16);
    const auto fc = fundamental_forms(cyl);
    CHECK(interior_max(fc.K, cyl) < 1e-6);
    CHECK(interior_max_dev(fc.H, cyl, 0.5) < 1e-4);

    const auto sph = sphere_patch(2.0, pi / 8, 7 * pi / 8, 256, 256);
    const auto fs = fundamental_forms(sph);
    Field2D dk = fs.K;
    for (double& x : dk.data()) x -= 0.25;
    CHECK(interior_max(dk, sph) < 1e-4);
    CHECK(interior_max_dev(fs.H, sph, 0.5) < 1e-4);
    CHECK(fs.singular_points == 0);

    const auto pl = plane_patch(-1, 1, -1, 1, 32, 32);
    const auto fp = fundamental_forms(pl);
    for (double x : fp.H.data()) CHECK(x == 0.0);
    for (double x : fp.K.data()) CHECK(x == 0.0);

    for (const auto& p : {cyl, sph, pl, torus_patch(3, 1, 64, 48), cone_patch(0.5, 0.5, 2, 48, 64)})
        check_real_principal_curvatures(p);

    // Pole row: coordinate singularity on an open edge is tolerated.
    const auto cap = sphere_patch(1.0, 0, pi / 2, 65, 64);
    CHECK(fundamental_forms(cap).singular_points == 64);

    // Interior singular point.
    const auto bad = sample_patch(Grid1D::spanning(-1, 1, 21), Grid1D::spanning(-1, 1, 21),
                                  [](double u, double v) { return Vec3(u, v * v, 0); });
    CHECK_THROWS_AS(fundamental_forms(bad), DegeneratePatch);
}

TEST_CASE("connection form")
{
    const auto sph = sphere_patch(1.0, pi / 8, 7 * pi / 8, 128, 128);
    const auto c = connection_form(sph);
    double err_u = 0.0, err_v = 0.0;
    for (std::size_t i = 0; i < sph.u.n; ++i)
        for (std::size_t j = 0; j < sph.v.n; ++j) {
            err_u = std::max(err_u, std::abs(c.du_part(i, j)));
            if (i >= surface_margin && i + surface_margin < sph.u.n)
                err_v = std::max(err_v, std::abs(c.dv_part(i, j) - std::cos(sph.u[i])));
        }
    CHECK(err_u < 1e-12);
    CHECK(err_v < 1e-3);

    const auto pl = connection_form(plane_patch(0, 1, 0, 1, 16, 16));
    for (double x : pl.du_part.data()) CHECK(std::abs(x) < 1e-12);
    for (double x : pl.dv_part.data()) CHECK(std::abs(x) < 1e-12);

    const auto cyl = connection_form(cylinder_patch(1.5, 0, 1, 64, 16));
    for (double x : cyl.du_part.data()) CHECK(std::abs(x) < 1e-12);
    for (double x : cyl.dv_part.data()) CHECK(std::abs(x) < 1e-12);

    const auto saddle = sample_patch(Grid1D::spanning(-1, 1, 24), Grid1D::spanning(-1, 1, 24),
                                     [](double x, double y) { return Vec3(x, y, x * y); });
    CHECK_THROWS_AS(connection_form(saddle), NonOrthogonalPatch);
}

TEST_CASE("curvature obstruction")
{
    const double coarse = obstruction_residual(sphere_patch(1.0, pi / 8, 7 * pi / 8, 128, 128));
    const double fine = obstruction_residual(sphere_patch(1.0, pi / 8, 7 * pi / 8, 255, 256), 2 * surface_margin);
    CHECK(coarse < 1e-3);
    CHECK(fd::convergence_order(coarse, fine) >= 1.8);

    CHECK(obstruction_residual(plane_patch(0, 1, 0, 1, 16, 16)) == 0.0);
    const auto cyl = cylinder_patch(1.0, 0, 2, 128, 16);
    CHECK(obstruction_residual(cyl) < 1e-12);
    CHECK(interior_max(fundamental_forms(cyl).K, cyl) < 1e-12);

    const double tc = obstruction_residual(torus_patch(3, 1, 64, 64));
    const double tf = obstruction_residual(torus_patch(3, 1, 128, 128));
    CHECK(fd::convergence_order(tc, tf) >= 1.8);

    const auto bowl = [](double r) { return 0.5 * r * r; };
    const double gc = obstruction_residual(graph_patch(bowl, 0.2, 1.5, 64, 64));
    const double gf = obstruction_residual(graph_patch(bowl, 0.2, 1.5, 127, 128), 2 * surface_margin);
    CHECK(fd::convergence_order(gc, gf) >= 1.8);
}

TEST_CASE("holonomy around loops")
{
    const auto cap = sphere_patch(1.0, 0, pi / 2, 193, 128);
    const auto h = holonomy_check(cap, {0, pi / 3, 0, 2 * pi});
    CHECK(std::abs(h.area_integral - pi) < 2e-3);
    CHECK(std::abs(h.loop_integral + pi) < 2e-3);
    CHECK(h.mismatch < 2e-3);
    CHECK(h.half_holonomy_factor == doctest::Approx(std::exp(-0.5 * h.loop_integral)));

    // A rectangle that is not a strip: Stokes mismatch converges at second order.
    auto band = [](std::size_t nth, std::size_t nph) {
        return holonomy_check(sphere_patch(1.0, pi / 8, 7 * pi / 8, nth, nph), {pi / 4, 3 * pi / 4, pi / 2, pi});
    };
    const auto bc = band(97, 128), bf = band(193, 256);
    CHECK(bc.mismatch < 2e-3);
    CHECK(fd::convergence_order(bc.mismatch, bf.mismatch) >= 1.8);

    const auto pl = holonomy_check(plane_patch(0, 1, 0, 1, 17, 17), {0.25, 0.75, 0.25, 0.75});
    CHECK(pl.loop_integral == 0.0);
    CHECK(pl.area_integral == 0.0);

    const auto cyl = cylinder_patch(1.0, 0, 2, 128, 17);
    for (const auto& rect : {CoordinateRectangle{0, 2 * pi, 0.5, 1.5}, CoordinateRectangle{pi / 4, pi, 0.25, 1.75}}) {
        const auto hc = holonomy_check(cyl, rect);
        CHECK(std::abs(hc.loop_integral) < 1e-6);
        CHECK(std::abs(hc.area_integral) < 1e-6);
    }

    CHECK_THROWS_AS(holonomy_check(cap, {0.1234, pi / 3, 0, 2 * pi}), ConstraintError);
    CHECK_THROWS_AS(holonomy_check(cap, {0, pi, 0, 2 * pi}), ConstraintError);
}

TEST_CASE("developable surfaces")
{
    const auto cyl = cylinder_patch(1.0, 0, 2, 256, 16);
    const auto rc = developable_check(cyl);
    CHECK(rc.is_developable);
    CHECK(interior_max_dev(rc.dacosta, cyl, 0.25) < 1e-4);

    const auto cone = cone_patch(0.5, 0.5, 2, 48, 128);
    const auto rk = developable_check(cone);
    CHECK(rk.is_developable);
    const auto forms = fundamental_forms(cone);
    double lo = 1e300, hi = -1e300;
    for (std::size_t i = surface_margin; i + surface_margin < cone.u.n; ++i) {
        const double v = rk.dacosta(i, 0);
        CHECK(v < 0);
        lo = std::min(lo, v);
        hi = std::max(hi, v);
        // With K set to zero the potential is exactly -H^2.
        CHECK(std::abs(dacosta_surface(forms.H(i, 0), 0.0) + forms.H(i, 0) * forms.H(i, 0)) < 1e-9);
    }
    CHECK(hi - lo > 0.1 * std::abs(lo));

    CHECK_FALSE(developable_check(sphere_patch(1.0, pi / 8, 7 * pi / 8, 64, 64)).is_developable);
}

TEST_CASE("flat cylinder and plane strip share their intrinsic data")
{
    const double R = 1.3;
    const std::size_t nt = 64, nz = 16;
    const auto cyl = cylinder_patch(R, 0, 1, nt, nz);
    // Plane strip with the same E, F, G on the same parameter grid.
    const double s = std::sin(cyl.u.step) / cyl.u.step;
    Grid1D open_u = cyl.u;
    open_u.boundary = Boundary::open;
    const auto strip = sample_patch(open_u, cyl.v, [&](double t, double z) { return Vec3(R * s * t, z, 0); });
    const auto a = fundamental_forms(cyl), b = fundamental_forms(strip);
    const auto ca = connection_form(cyl, a), cb = connection_form(strip, b);
    for (std::size_t i = 1; i + 1 < nt; ++i)
        for (std::size_t j = 0; j < nz; ++j) {
            CHECK(std::abs(a.E(i, j) - b.E(i, j)) < 1e-12);
            CHECK(std::abs(a.G(i, j) - b.G(i, j)) < 1e-12);
            CHECK(std::abs(a.K(i, j) - b.K(i, j)) < 1e-12);
            CHECK(std::abs(ca.du_part(i, j) - cb.du_part(i, j)) < 1e-12);
            CHECK(std::abs(ca.dv_part(i, j) - cb.dv_part(i, j)) < 1e-12);
        }
}
