#include "movframe/nets.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include "movframe/errors.hpp"
#include "movframe/finite_diff.hpp"

namespace movframe {

namespace {

std::vector<Vec3> derivative4(std::span<const Vec3> v, double h, Boundary b)
{
    std::array<std::vector<double>, 3> c;
    for (int k = 0; k < 3; ++k) {
        std::vector<double> comp(v.size());
        for (std::size_t i = 0; i < v.size(); ++i) comp[i] = v[i][k];
        c[static_cast<std::size_t>(k)] = fd::derivative4(comp, h, b);
    }
    std::vector<Vec3> out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = Vec3(c[0][i], c[1][i], c[2][i]);
    return out;
}

}  // namespace

void OrthogonalNet::validate() const
{
    if (h1.nu() != u.n || h1.nv() != v.n || !h1.same_shape(h2))
        throw ConstraintError("orthogonal net: Lame coefficient grids do not match the (u, v) grid");
    for (std::size_t i = 0; i < u.n; ++i)
        for (std::size_t j = 0; j < v.n; ++j)
            if (!(h1(i, j) > 0.0) || !(h2(i, j) > 0.0)) {
                std::ostringstream msg;
                msg << "orthogonal net: Lame coefficient not positive at (u, v) = (" << u[i] << ", " << v[j]
                    << "): h1 = " << h1(i, j) << ", h2 = " << h2(i, j);
                throw ConstraintError(msg.str());
            }
}

ConnectionCoefficients net_connection(const OrthogonalNet& net)
{
    const Field2D h1h2 = net.h1 * net.h2;
    ConnectionCoefficients k;
    k.k1 = fd::d_dv(net.h1, net.v) / h1h2;
    k.k2 = -1.0 * (fd::d_du(net.h2, net.u) / h1h2);
    return k;
}

Field2D apply_e1(const OrthogonalNet& net, const Field2D& f) { return fd::d_du(f, net.u) / net.h1; }
Field2D apply_e2(const OrthogonalNet& net, const Field2D& f) { return fd::d_dv(f, net.v) / net.h2; }

Field2D gauss_residual_field(const OrthogonalNet& net)
{
    const auto k = net_connection(net);
    return apply_e1(net, k.k2) - apply_e2(net, k.k1) - connection_invariant(k);
}

double gauss_residual(const OrthogonalNet& net, std::size_t margin)
{
    return fd::interior_max_abs(gauss_residual_field(net), net.u, net.v, margin);
}

double commutator_residual(const OrthogonalNet& net, const Field2D& f, CommutatorSign sign, std::size_t margin)
{
    const auto k = net_connection(net);
    const Field2D e1f = apply_e1(net, f);
    const Field2D e2f = apply_e2(net, f);
    const Field2D bracket = apply_e1(net, e2f) - apply_e2(net, e1f);
    const double s = sign == CommutatorSign::plus ? 1.0 : -1.0;
    const Field2D rhs = s * (k.k1 * e1f + k.k2 * e2f);
    return fd::interior_max_abs(bracket - rhs, net.u, net.v, margin);
}

Field2D moving_frame_laplacian(const OrthogonalNet& net, const Field2D& f)
{
    const auto k = net_connection(net);
    const Field2D e1f = apply_e1(net, f);
    const Field2D e2f = apply_e2(net, f);
    return apply_e1(net, e1f) + apply_e2(net, e2f) - k.k2 * e1f + k.k1 * e2f;
}

Field2D divergence_laplacian(const OrthogonalNet& net, const Field2D& f)
{
    const std::size_t nu = net.u.n, nv = net.v.n;
    const bool pu = net.u.boundary == Boundary::periodic;
    const bool pv = net.v.boundary == Boundary::periodic;
    const double du2 = net.u.step * net.u.step, dv2 = net.v.step * net.v.step;
    Field2D out(nu, nv);
    auto wrap = [](std::size_t i, std::ptrdiff_t d, std::size_t n) {
        return static_cast<std::size_t>((static_cast<std::ptrdiff_t>(i) + d + static_cast<std::ptrdiff_t>(n)) %
                                        static_cast<std::ptrdiff_t>(n));
    };
    for (std::size_t i = 0; i < nu; ++i) {
        if (!pu && (i == 0 || i + 1 == nu)) continue;
        const std::size_t ip = wrap(i, 1, nu), im = wrap(i, -1, nu);
        for (std::size_t j = 0; j < nv; ++j) {
            if (!pv && (j == 0 || j + 1 == nv)) continue;
            const std::size_t jp = wrap(j, 1, nv), jm = wrap(j, -1, nv);
            auto cu = [&](std::size_t a, std::size_t b) { return net.h2(a, j) / net.h1(a, j) + net.h2(b, j) / net.h1(b, j); };
            auto cv = [&](std::size_t a, std::size_t b) { return net.h1(i, a) / net.h2(i, a) + net.h1(i, b) / net.h2(i, b); };
            const double flux_u = 0.5 * (cu(i, ip) * (f(ip, j) - f(i, j)) - cu(im, i) * (f(i, j) - f(im, j))) / du2;
            const double flux_v = 0.5 * (cv(j, jp) * (f(i, jp) - f(i, j)) - cv(jm, j) * (f(i, j) - f(i, jm))) / dv2;
            out(i, j) = (flux_u + flux_v) / (net.h1(i, j) * net.h2(i, j));
        }
    }
    return out;
}

OrthogonalNet fermi_net(const CurvatureProfile& profile, double rho_max, std::size_t n_rho)
{
    profile.validate();
    if (n_rho < 3) throw ConstraintError("fermi_net: n_rho must be >= 3");
    OrthogonalNet net;
    net.u = profile.grid();
    net.v = Grid1D::spanning(-rho_max, rho_max, n_rho);
    net.h1 = Field2D(net.u.n, net.v.n);
    net.h2 = Field2D(net.u.n, net.v.n, 1.0);
    for (std::size_t i = 0; i < net.u.n; ++i)
        for (std::size_t j = 0; j < net.v.n; ++j) {
            const double h1 = 1.0 + net.v[j] * profile.kappa[i];
            if (!(h1 > 0.0)) {
                std::ostringstream msg;
                msg << "fermi_net: focal point in strip at (s, rho) = (" << net.u[i] << ", " << net.v[j]
                    << "), 1 + rho kappa = " << h1;
                throw FocalPointInStrip(msg.str());
            }
            net.h1(i, j) = h1;
        }
    return net;
}

OrthogonalNet lame_net(const Grid1D& u, const Grid1D& v, const std::function<double(double, double)>& h1,
                       const std::function<double(double, double)>& h2)
{
    OrthogonalNet net{u, v, sample(u, v, h1), sample(u, v, h2)};
    net.validate();
    return net;
}

OrthogonalNet cartesian_net(const Grid1D& x, const Grid1D& y)
{
    return {x, y, Field2D(x.n, y.n, 1.0), Field2D(x.n, y.n, 1.0)};
}

OrthogonalNet polar_net(const Grid1D& r, const Grid1D& phi)
{
    return lame_net(r, phi, [](double, double) { return 1.0; }, [](double rr, double) { return rr; });
}

Field2D connection_invariant(const ConnectionCoefficients& k) { return k.k1 * k.k1 + k.k2 * k.k2; }

double connection_invariant(std::span<const ConnectionComponent> coefficients)
{
    double sum = 0.0;
    for (const auto& c : coefficients) {
        if (c.i >= c.j)
            throw ConstraintError("connection_invariant: index pair (" + std::to_string(c.i) + ", " +
                                  std::to_string(c.j) + ") is not an independent pair i < j");
        sum += c.value * c.value;
    }
    return sum;
}

DarbouxField darboux_vector(std::span<const Frame> frames, double h, Boundary boundary)
{
    const std::size_t n = frames.size();
    std::array<std::vector<Vec3>, 3> e, de;
    for (std::size_t k = 0; k < 3; ++k) {
        e[k].resize(n);
        for (std::size_t i = 0; i < n; ++i) e[k][i] = frames[i][k];
        de[k] = derivative4(e[k], h, boundary);
    }
    DarbouxField out;
    out.vector.resize(n);
    out.components.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        Vec3 omega = Vec3::Zero();
        for (std::size_t k = 0; k < 3; ++k) omega += e[k][i].cross(de[k][i]);
        omega *= 0.5;
        out.vector[i] = omega;
        out.components[i] = Vec3(omega.dot(e[0][i]), omega.dot(e[1][i]), omega.dot(e[2][i]));
    }
    return out;
}

std::vector<Frame> frames_of(const FrenetData& frenet)
{
    std::vector<Frame> out(frenet.tangent.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = {frenet.tangent[i], frenet.normal[i], frenet.binormal[i]};
    return out;
}

double darboux_residual(std::span<const Frame> frames, const DarbouxField& field, double h, Boundary boundary,
                        std::size_t margin)
{
    const std::size_t n = frames.size();
    const std::size_t m = boundary == Boundary::periodic ? 0 : margin;
    double worst = 0.0;
    for (std::size_t k = 0; k < 3; ++k) {
        std::vector<Vec3> e(n);
        for (std::size_t i = 0; i < n; ++i) e[i] = frames[i][k];
        const auto de = derivative4(e, h, boundary);
        for (std::size_t i = m; i + m < n; ++i)
            worst = std::max(worst, (de[i] - field.vector[i].cross(e[i])).norm());
    }
    return worst;
}

}  // namespace movframe
