#include "movframe/surfaces.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "movframe/errors.hpp"
#include "movframe/finite_diff.hpp"
#include "movframe/potentials.hpp"

namespace movframe {

namespace {

constexpr double regular_floor = 1e-10;

struct VecField {
    Field2D x, y, z;

    Vec3 at(std::size_t i, std::size_t j) const { return {x(i, j), y(i, j), z(i, j)}; }
};

VecField components(const SurfacePatch& p)
{
    VecField f{Field2D(p.u.n, p.v.n), Field2D(p.u.n, p.v.n), Field2D(p.u.n, p.v.n)};
    for (std::size_t i = 0; i < p.u.n; ++i)
        for (std::size_t j = 0; j < p.v.n; ++j) {
            const Vec3& r = p(i, j);
            f.x(i, j) = r.x();
            f.y(i, j) = r.y();
            f.z(i, j) = r.z();
        }
    return f;
}

template <typename Op>
VecField map(const VecField& f, Op op)
{
    return {op(f.x), op(f.y), op(f.z)};
}

Field2D second_du(const Field2D& f, const Grid1D& u)
{
    Field2D out(f.nu(), f.nv());
    std::vector<double> line(f.nu());
    for (std::size_t j = 0; j < f.nv(); ++j) {
        for (std::size_t i = 0; i < f.nu(); ++i) line[i] = f(i, j);
        const auto d = fd::second_derivative(line, u.step, u.boundary);
        for (std::size_t i = 0; i < f.nu(); ++i) out(i, j) = d[i];
    }
    return out;
}

Field2D second_dv(const Field2D& f, const Grid1D& v)
{
    Field2D out(f.nu(), f.nv());
    for (std::size_t i = 0; i < f.nu(); ++i) {
        const auto d = fd::second_derivative(f.row(i), v.step, v.boundary);
        std::copy(d.begin(), d.end(), out.row(i).begin());
    }
    return out;
}

bool on_open_edge(const SurfacePatch& p, std::size_t i, std::size_t j)
{
    const bool iu = p.u.boundary == Boundary::open && (i == 0 || i + 1 == p.u.n);
    const bool iv = p.v.boundary == Boundary::open && (j == 0 || j + 1 == p.v.n);
    return iu || iv;
}

// Safe quotient: zero where the denominator vanishes.
double ratio(double num, double den) { return den > regular_floor ? num / den : 0.0; }

struct NodeSpan {
    std::size_t first = 0;
    std::size_t count = 0;  ///< number of intervals
    bool full_period = false;

    std::size_t node(std::size_t k, std::size_t n) const { return (first + k) % n; }
};

NodeSpan snap(const Grid1D& g, double a, double b, const char* axis)
{
    auto index = [&](double x) {
        const double t = (x - g.start) / g.step;
        const double r = std::round(t);
        if (std::abs(t - r) > 1e-6) {
            std::ostringstream msg;
            msg << "holonomy_check: " << axis << " = " << x << " is not a grid node";
            throw ConstraintError(msg.str());
        }
        return static_cast<long>(r);
    };
    if (!(b > a)) throw ConstraintError(std::string("holonomy_check: empty ") + axis + " range");
    const long ia = index(a), ib = index(b);
    NodeSpan s;
    if (g.boundary == Boundary::periodic) {
        const long n = static_cast<long>(g.n);
        s.first = static_cast<std::size_t>(((ia % n) + n) % n);
        s.count = static_cast<std::size_t>(ib - ia);
        if (s.count > g.n) throw ConstraintError(std::string("holonomy_check: ") + axis + " range exceeds one period");
        s.full_period = s.count == g.n;
    } else {
        if (ia < 0 || ib >= static_cast<long>(g.n))
            throw ConstraintError(std::string("holonomy_check: ") + axis + " range leaves the patch");
        s.first = static_cast<std::size_t>(ia);
        s.count = static_cast<std::size_t>(ib - ia);
    }
    return s;
}

}  // namespace

SurfacePatch sample_patch(const Grid1D& u, const Grid1D& v, const Parametrization& r)
{
    SurfacePatch p{u, v, {}};
    p.points.reserve(u.n * v.n);
    for (std::size_t i = 0; i < u.n; ++i)
        for (std::size_t j = 0; j < v.n; ++j) p.points.push_back(r(u[i], v[j]));
    return p;
}

FundamentalForms fundamental_forms(const SurfacePatch& patch)
{
    if (patch.points.size() != patch.u.n * patch.v.n) throw ConstraintError("fundamental_forms: point count mismatch");
    if (patch.u.n < 3 || patch.v.n < 3) throw GridTooSmall("fundamental_forms: need at least 3 x 3 points");
    const VecField r = components(patch);
    const auto& gu = patch.u;
    const auto& gv = patch.v;
    const VecField ru = map(r, [&](const Field2D& f) { return fd::d_du(f, gu); });
    const VecField rv = map(r, [&](const Field2D& f) { return fd::d_dv(f, gv); });
    const VecField ruu = map(r, [&](const Field2D& f) { return second_du(f, gu); });
    const VecField rvv = map(r, [&](const Field2D& f) { return second_dv(f, gv); });
    const VecField ruv = map(ru, [&](const Field2D& f) { return fd::d_dv(f, gv); });

    const std::size_t nu = gu.n, nv = gv.n;
    FundamentalForms out{Field2D(nu, nv), Field2D(nu, nv), Field2D(nu, nv), Field2D(nu, nv), Field2D(nu, nv),
                         Field2D(nu, nv), Field2D(nu, nv), Field2D(nu, nv), 0};
    for (std::size_t i = 0; i < nu; ++i)
        for (std::size_t j = 0; j < nv; ++j) {
            const Vec3 a = ru.at(i, j), b = rv.at(i, j);
            const Vec3 cross = a.cross(b);
            const double area = cross.norm();
            out.E(i, j) = a.dot(a);
            out.F(i, j) = a.dot(b);
            out.G(i, j) = b.dot(b);
            if (area <= regular_floor) {
                if (!on_open_edge(patch, i, j)) {
                    std::ostringstream msg;
                    msg << "fundamental_forms: |r_u x r_v| = " << area << " at (u, v) = (" << gu[i] << ", " << gv[j]
                        << ")";
                    throw DegeneratePatch(msg.str());
                }
                ++out.singular_points;
                continue;
            }
            const Vec3 n = cross / area;
            const double L = ruu.at(i, j).dot(n), M = ruv.at(i, j).dot(n), N = rvv.at(i, j).dot(n);
            out.L(i, j) = L;
            out.M(i, j) = M;
            out.N(i, j) = N;
            const double det = out.E(i, j) * out.G(i, j) - out.F(i, j) * out.F(i, j);
            out.H(i, j) = (out.E(i, j) * N - 2 * out.F(i, j) * M + out.G(i, j) * L) / (2 * det);
            out.K(i, j) = (L * N - M * M) / det;
        }
    return out;
}

SurfaceConnection connection_form(const SurfacePatch& patch, const FundamentalForms& forms)
{
    const std::size_t nu = patch.u.n, nv = patch.v.n;
    Field2D sqrtE(nu, nv), sqrtG(nu, nv);
    double skew = 0.0;
    for (std::size_t i = 0; i < nu; ++i)
        for (std::size_t j = 0; j < nv; ++j) {
            sqrtE(i, j) = std::sqrt(forms.E(i, j));
            sqrtG(i, j) = std::sqrt(forms.G(i, j));
            const double scale = sqrtE(i, j) * sqrtG(i, j);
            if (scale > regular_floor) skew = std::max(skew, std::abs(forms.F(i, j)) / scale);
        }
    if (skew > 1e-6) {
        std::ostringstream msg;
        msg << "connection_form: parametrization is not orthogonal (max |F|/sqrt(EG) = " << skew << ")";
        throw NonOrthogonalPatch(msg.str());
    }
    const Field2D dE = fd::d_dv(sqrtE, patch.v);
    const Field2D dG = fd::d_du(sqrtG, patch.u);
    SurfaceConnection c{Field2D(nu, nv), Field2D(nu, nv), Field2D(nu, nv), Field2D(nu, nv)};
    for (std::size_t i = 0; i < nu; ++i)
        for (std::size_t j = 0; j < nv; ++j) {
            c.du_part(i, j) = -ratio(dE(i, j), sqrtG(i, j));
            c.dv_part(i, j) = ratio(dG(i, j), sqrtE(i, j));
            c.theta1(i, j) = ratio(c.du_part(i, j), sqrtE(i, j));
            c.theta2(i, j) = ratio(c.dv_part(i, j), sqrtG(i, j));
        }
    return c;
}

SurfaceConnection connection_form(const SurfacePatch& patch) { return connection_form(patch, fundamental_forms(patch)); }

double obstruction_residual(const SurfacePatch& patch, std::size_t margin)
{
    const auto forms = fundamental_forms(patch);
    const auto c = connection_form(patch, forms);
    const Field2D domega = fd::d_du(c.dv_part, patch.u) - fd::d_dv(c.du_part, patch.v);
    Field2D res(patch.u.n, patch.v.n);
    for (std::size_t k = 0; k < res.size(); ++k) {
        const double area = std::sqrt(forms.E.data()[k] * forms.G.data()[k]);
        res.data()[k] = domega.data()[k] + forms.K.data()[k] * area;
    }
    return fd::interior_max_abs(res, patch.u, patch.v, margin);
}

HolonomyReport holonomy_check(const SurfacePatch& patch, const CoordinateRectangle& rect)
{
    const NodeSpan su = snap(patch.u, rect.u0, rect.u1, "u");
    const NodeSpan sv = snap(patch.v, rect.v0, rect.v1, "v");
    const auto forms = fundamental_forms(patch);
    const auto c = connection_form(patch, forms);
    const std::size_t nu = patch.u.n, nv = patch.v.n;

    // Integral of du_part along v = const from u0 to u1, and of dv_part along u = const.
    auto along_u = [&](std::size_t j) {
        double s = 0.0;
        for (std::size_t k = 0; k < su.count; ++k)
            s += 0.5 * (c.du_part(su.node(k, nu), j) + c.du_part(su.node(k + 1, nu), j));
        return s * patch.u.step;
    };
    auto along_v = [&](std::size_t i) {
        double s = 0.0;
        for (std::size_t k = 0; k < sv.count; ++k)
            s += 0.5 * (c.dv_part(i, sv.node(k, nv)) + c.dv_part(i, sv.node(k + 1, nv)));
        return s * patch.v.step;
    };

    HolonomyReport r;
    const std::size_t i0 = su.first, i1 = su.node(su.count, nu);
    const std::size_t j0 = sv.first, j1 = sv.node(sv.count, nv);
    if (!sv.full_period) r.loop_integral += along_u(j0) - along_u(j1);
    if (!su.full_period) r.loop_integral += along_v(i1) - along_v(i0);

    auto weights = [](const NodeSpan& s) {
        std::vector<double> w(s.full_period ? s.count : s.count + 1, 1.0);
        if (!s.full_period) w.front() = w.back() = 0.5;
        return w;
    };
    const auto wu = weights(su), wv = weights(sv);
    double area = 0.0;
    for (std::size_t a = 0; a < wu.size(); ++a)
        for (std::size_t b = 0; b < wv.size(); ++b) {
            const std::size_t i = su.node(a, nu), j = sv.node(b, nv);
            const double jac = std::sqrt(forms.E(i, j) * forms.G(i, j) - forms.F(i, j) * forms.F(i, j));
            if (jac > regular_floor) area += wu[a] * wv[b] * forms.K(i, j) * jac;
        }
    r.area_integral = area * patch.u.step * patch.v.step;
    r.mismatch = std::abs(r.loop_integral + r.area_integral);
    r.half_holonomy_factor = std::exp(-0.5 * r.loop_integral);
    return r;
}

DevelopableReport developable_check(const SurfacePatch& patch, double tol, std::size_t margin)
{
    const auto forms = fundamental_forms(patch);
    DevelopableReport r;
    r.max_abs_K = fd::interior_max_abs(forms.K, patch.u, patch.v, margin);
    const double max_h = fd::interior_max_abs(forms.H, patch.u, patch.v, margin);
    r.tolerance = tol >= 0 ? tol : 1e-6 * std::max(max_h * max_h, 1e-12);
    r.is_developable = r.max_abs_K < r.tolerance;
    r.dacosta = dacosta_surface(forms.H, forms.K);
    return r;
}

SurfacePatch plane_patch(double x0, double x1, double y0, double y1, std::size_t nx, std::size_t ny)
{
    return sample_patch(Grid1D::spanning(x0, x1, nx), Grid1D::spanning(y0, y1, ny),
                        [](double x, double y) { return Vec3(x, y, 0.0); });
}

SurfacePatch cylinder_patch(double radius, double z0, double z1, std::size_t nt, std::size_t nz)
{
    if (!(radius > 0)) throw ConstraintError("cylinder_patch: radius must be > 0");
    return sample_patch(Grid1D::periodic(0, 2 * std::numbers::pi, nt), Grid1D::spanning(z0, z1, nz),
                        [radius](double t, double z) { return Vec3(radius * std::cos(t), radius * std::sin(t), z); });
}

SurfacePatch cone_patch(double half_angle, double r0, double r1, std::size_t nr, std::size_t nt)
{
    if (!(half_angle > 0 && half_angle < std::numbers::pi / 2))
        throw ConstraintError("cone_patch: half angle must lie in (0, pi/2)");
    const double slope = 1.0 / std::tan(half_angle);
    return sample_patch(Grid1D::spanning(r0, r1, nr), Grid1D::periodic(0, 2 * std::numbers::pi, nt),
                        [slope](double r, double t) { return Vec3(r * std::cos(t), r * std::sin(t), slope * r); });
}

SurfacePatch sphere_patch(double radius, double theta0, double theta1, std::size_t ntheta, std::size_t nphi)
{
    if (!(radius > 0)) throw ConstraintError("sphere_patch: radius must be > 0");
    if (theta0 < 0 || theta1 > std::numbers::pi || !(theta1 > theta0))
        throw ConstraintError("sphere_patch: colatitude range must lie in [0, pi]");
    return sample_patch(Grid1D::spanning(theta0, theta1, ntheta), Grid1D::periodic(0, 2 * std::numbers::pi, nphi),
                        [radius](double th, double ph) {
                            return Vec3(radius * std::sin(th) * std::cos(ph), radius * std::sin(th) * std::sin(ph),
                                        radius * std::cos(th));
                        });
}

SurfacePatch torus_patch(double major, double minor, std::size_t nu, std::size_t nv)
{
    if (!(minor > 0 && major > minor)) throw ConstraintError("torus_patch: need major > minor > 0");
    const double two_pi = 2 * std::numbers::pi;
    return sample_patch(Grid1D::periodic(0, two_pi, nu), Grid1D::periodic(0, two_pi, nv), [=](double a, double b) {
        const double w = major + minor * std::cos(b);
        return Vec3(w * std::cos(a), w * std::sin(a), minor * std::sin(b));
    });
}

SurfacePatch graph_patch(const std::function<double(double)>& height, double rho0, double rho1, std::size_t nrho,
                         std::size_t nt)
{
    return sample_patch(Grid1D::spanning(rho0, rho1, nrho), Grid1D::periodic(0, 2 * std::numbers::pi, nt),
                        [&height](double r, double t) { return Vec3(r * std::cos(t), r * std::sin(t), height(r)); });
}

}  // namespace movframe
