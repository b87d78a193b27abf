#include "movframe/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include <unsupported/Eigen/MatrixFunctions>

#include "movframe/errors.hpp"

namespace movframe {

namespace {

constexpr std::size_t min_nodes = 16;
constexpr double eps = std::numeric_limits<double>::epsilon();

void require_nodes(const Grid1D& grid, std::size_t n, SpectralBoundary boundary)
{
    if (n != grid.n) throw ConstraintError("discretize: potential length does not match the grid");
    if (n < min_nodes)
        throw GridTooSmall("discretize: " + std::to_string(n) + " nodes, at least " + std::to_string(min_nodes) +
                           " required");
    if (boundary == SpectralBoundary::periodic && grid.boundary != Boundary::periodic)
        throw ConstraintError("discretize: periodic operator needs a periodic grid");
}

// Number of eigenvalues of t strictly below x.
std::size_t sturm_count(const SymmetricTridiagonal& t, double x, double pivmin)
{
    std::size_t count = 0;
    double q = t.diagonal[0] - x;
    if (std::abs(q) < pivmin) q = -pivmin;
    if (q < 0) ++count;
    for (std::size_t i = 1; i < t.size(); ++i) {
        const double e = t.off_diagonal[i - 1];
        q = t.diagonal[i] - x - e * e / q;
        if (std::abs(q) < pivmin) q = -pivmin;
        if (q < 0) ++count;
    }
    return count;
}

// Solves (t - shift) x = b in place by Gaussian elimination with partial
// pivoting. Zero pivots are replaced by `tiny`.
void shifted_solve(const SymmetricTridiagonal& t, double shift, double tiny, Eigen::VectorXd& b)
{
    const std::size_t m = t.size();
    if (m == 1) {
        double d = t.diagonal[0] - shift;
        if (std::abs(d) < tiny) d = tiny;
        b[0] /= d;
        return;
    }
    std::vector<double> dl(t.off_diagonal), du(t.off_diagonal), d(m), du2(m, 0.0);
    for (std::size_t i = 0; i < m; ++i) d[i] = t.diagonal[i] - shift;
    for (std::size_t i = 0; i + 1 < m; ++i) {
        if (std::abs(d[i]) >= std::abs(dl[i])) {
            if (std::abs(d[i]) < tiny) d[i] = tiny;
            const double fact = dl[i] / d[i];
            d[i + 1] -= fact * du[i];
            b[i + 1] -= fact * b[i];
        } else {
            const double fact = d[i] / dl[i];
            d[i] = dl[i];
            const double temp = d[i + 1];
            d[i + 1] = du[i] - fact * temp;
            if (i + 2 < m) {
                du2[i] = du[i + 1];
                du[i + 1] = -fact * du2[i];
            }
            du[i] = temp;
            const double bi = b[i];
            b[i] = b[i + 1];
            b[i + 1] = bi - fact * b[i + 1];
        }
    }
    if (std::abs(d[m - 1]) < tiny) d[m - 1] = tiny;
    b[m - 1] /= d[m - 1];
    b[m - 2] = (b[m - 2] - du[m - 2] * b[m - 1]) / d[m - 2];
    for (std::size_t k = m - 2; k-- > 0;) b[k] = (b[k] - du[k] * b[k + 1] - du2[k] * b[k + 2]) / d[k];
}

// Flip so the entry of largest magnitude is positive.
void fix_sign(Eigen::Ref<Eigen::VectorXd> v)
{
    Eigen::Index at = 0;
    v.cwiseAbs().maxCoeff(&at);
    if (v[at] < 0) v = -v;
}

}  // namespace

std::string_view to_string(SpectralBoundary b)
{
    return b == SpectralBoundary::dirichlet ? "dirichlet" : "periodic";
}

std::string_view to_string(PartnerSide side) { return side == PartnerSide::plus ? "plus" : "minus"; }

double SymmetricTridiagonal::norm_bound() const
{
    double bound = 0.0;
    for (std::size_t i = 0; i < size(); ++i) {
        double r = std::abs(diagonal[i]);
        if (i > 0) r += std::abs(off_diagonal[i - 1]);
        if (i + 1 < size()) r += std::abs(off_diagonal[i]);
        bound = std::max(bound, r);
    }
    return bound;
}

Eigen::VectorXd SymmetricTridiagonal::apply(const Eigen::VectorXd& x) const
{
    const std::size_t m = size();
    Eigen::VectorXd y(static_cast<Eigen::Index>(m));
    for (std::size_t i = 0; i < m; ++i) {
        double v = diagonal[i] * x[i];
        if (i > 0) v += off_diagonal[i - 1] * x[i - 1];
        if (i + 1 < m) v += off_diagonal[i] * x[i + 1];
        y[i] = v;
    }
    return y;
}

Eigen::MatrixXd SchrodingerOperator::dense() const
{
    const auto d = static_cast<Eigen::Index>(block);
    const std::size_t m = unknown_nodes();
    const double k = 1.0 / (grid.step * grid.step);
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(m) * d, static_cast<Eigen::Index>(m) * d);
    const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(d, d);
    for (std::size_t r = 0; r < m; ++r) {
        const auto at = static_cast<Eigen::Index>(r) * d;
        h.block(at, at, d, d) = 2 * k * id + potential[r + first_node()];
        if (r + 1 < m) {
            h.block(at, at + d, d, d) -= k * id;
            h.block(at + d, at, d, d) -= k * id;
        }
    }
    if (boundary == SpectralBoundary::periodic) {
        const auto last = static_cast<Eigen::Index>(m - 1) * d;
        h.block(0, last, d, d) -= k * id;
        h.block(last, 0, d, d) -= k * id;
    }
    return h;
}

SymmetricTridiagonal SchrodingerOperator::tridiagonal() const
{
    if (block != 1 || boundary != SpectralBoundary::dirichlet)
        throw ConstraintError("tridiagonal: only scalar Dirichlet operators are tridiagonal");
    const std::size_t m = unknown_nodes();
    const double k = 1.0 / (grid.step * grid.step);
    SymmetricTridiagonal t;
    t.diagonal.resize(m);
    t.off_diagonal.assign(m - 1, -k);
    for (std::size_t r = 0; r < m; ++r) t.diagonal[r] = 2 * k + potential[r + 1](0, 0);
    return t;
}

double SchrodingerOperator::norm_bound() const
{
    double v = 0.0;
    for (const auto& p : potential) v = std::max(v, p.cwiseAbs().rowwise().sum().maxCoeff());
    return 4.0 / (grid.step * grid.step) + v;
}

double SchrodingerOperator::symmetry_error() const
{
    double err = 0.0;
    for (std::size_t i = first_node(); i < first_node() + unknown_nodes(); ++i)
        err = std::max(err, (potential[i] - potential[i].transpose()).cwiseAbs().maxCoeff());
    return err;
}

SchrodingerOperator discretize(std::span<const double> potential, const Grid1D& grid, SpectralBoundary boundary)
{
    require_nodes(grid, potential.size(), boundary);
    SchrodingerOperator op{grid, boundary, 1, {}};
    op.potential.reserve(potential.size());
    for (double v : potential) op.potential.push_back(Eigen::MatrixXd::Constant(1, 1, v));
    return op;
}

SchrodingerOperator discretize(const PotentialGrid& potential)
{
    const auto boundary =
        potential.grid.boundary == Boundary::periodic ? SpectralBoundary::periodic : SpectralBoundary::dirichlet;
    return discretize(potential.values, potential.grid, boundary);
}

SchrodingerOperator discretize(std::span<const Eigen::Matrix3d> potential, const Grid1D& grid,
                               SpectralBoundary boundary)
{
    require_nodes(grid, potential.size(), boundary);
    SchrodingerOperator op{grid, boundary, 3, {}};
    op.potential.assign(potential.begin(), potential.end());
    return op;
}

Spectrum tridiagonal_eigen(const SymmetricTridiagonal& t, std::size_t k, bool with_vectors)
{
    const std::size_t m = t.size();
    if (m == 0) throw GridTooSmall("tridiagonal_eigen: empty matrix");
    if (k > m) throw ConstraintError("tridiagonal_eigen: asked for more eigenvalues than unknowns");
    const double norm = std::max(t.norm_bound(), std::numeric_limits<double>::min());
    const double pivmin = std::numeric_limits<double>::min() * 4 * norm;
    double lower = -norm, upper = norm;
    for (std::size_t i = 0; i < m; ++i) {
        double r = 0.0;
        if (i > 0) r += std::abs(t.off_diagonal[i - 1]);
        if (i + 1 < m) r += std::abs(t.off_diagonal[i]);
        lower = std::min(lower, t.diagonal[i] - r);
        upper = std::max(upper, t.diagonal[i] + r);
    }

    Spectrum out;
    out.values.resize(k);
    constexpr int max_bisections = 256;
    for (std::size_t j = 0; j < k; ++j) {
        double lo = j > 0 ? out.values[j - 1] - 2 * eps * norm : lower;
        double hi = upper;
        int it = 0;
        while (hi - lo > 2 * eps * std::max(std::abs(lo), std::abs(hi)) + pivmin) {
            if (++it > max_bisections) {
                std::ostringstream msg;
                msg << "tridiagonal_eigen: bisection for eigenvalue " << j << " stalled after " << max_bisections
                    << " steps in [" << lo << ", " << hi << "]";
                throw ConvergenceFailure(msg.str());
            }
            const double mid = 0.5 * (lo + hi);
            if (mid <= lo || mid >= hi) break;
            if (sturm_count(t, mid, pivmin) > j)
                hi = mid;
            else
                lo = mid;
        }
        out.values[j] = 0.5 * (lo + hi);
    }
    if (!with_vectors) return out;

    const auto mm = static_cast<Eigen::Index>(m);
    Eigen::MatrixXd vecs(mm, static_cast<Eigen::Index>(k));
    std::mt19937 rng(20240611);
    std::uniform_real_distribution<double> start(-1.0, 1.0);
    const double tiny = eps * norm;
    const double cluster = 1e-6 * norm;
    const double target = 1e-10 * norm;
    std::size_t cluster_begin = 0;
    for (std::size_t j = 0; j < k; ++j) {
        if (j == 0 || out.values[j] - out.values[j - 1] > cluster) cluster_begin = j;
        Eigen::VectorXd x(mm);
        for (Eigen::Index i = 0; i < mm; ++i) x[i] = start(rng);
        x.normalize();
        double residual = std::numeric_limits<double>::infinity();
        constexpr int max_sweeps = 8;
        int sweep = 0;
        for (; sweep < max_sweeps; ++sweep) {
            shifted_solve(t, out.values[j], tiny, x);
            for (std::size_t c = cluster_begin; c < j; ++c)
                x -= vecs.col(static_cast<Eigen::Index>(c)).dot(x) * vecs.col(static_cast<Eigen::Index>(c));
            x.normalize();
            residual = (t.apply(x) - out.values[j] * x).norm();
            if (sweep >= 1 && residual <= target) break;
        }
        if (!(residual <= 1e-8 * norm)) {
            std::ostringstream msg;
            msg << "tridiagonal_eigen: inverse iteration for eigenvalue " << j << " (" << out.values[j]
                << ") left residual " << residual << " after " << sweep << " sweeps";
            throw ConvergenceFailure(msg.str());
        }
        fix_sign(x);
        vecs.col(static_cast<Eigen::Index>(j)) = x;
        out.max_residual = std::max(out.max_residual, residual);
    }
    out.vectors = std::move(vecs);
    return out;
}

Spectrum eigen(const SchrodingerOperator& op, std::size_t k, bool with_vectors)
{
    const std::size_t dim = op.dimension();
    if (k > dim) throw ConstraintError("eigen: asked for more eigenvalues than unknowns");
    const double norm = op.norm_bound();
    if (op.symmetry_error() > 1e-12 * norm) {
        std::ostringstream msg;
        msg << "eigen: potential blocks are not symmetric (max |V - V^T| = " << op.symmetry_error() << ")";
        throw NonSymmetricOperator(msg.str());
    }

    Spectrum out;
    Eigen::MatrixXd interior;
    if (op.block == 1 && op.boundary == SpectralBoundary::dirichlet) {
        out = tridiagonal_eigen(op.tridiagonal(), k, with_vectors);
        if (with_vectors) interior = std::move(*out.vectors);
    } else {
        const Eigen::MatrixXd h = op.dense();
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h, with_vectors ? Eigen::ComputeEigenvectors
                                                                           : Eigen::EigenvaluesOnly);
        if (es.info() != Eigen::Success)
            throw ConvergenceFailure("eigen: dense symmetric solver did not converge (dimension " +
                                     std::to_string(dim) + ")");
        const auto kk = static_cast<Eigen::Index>(k);
        out.values.assign(es.eigenvalues().data(), es.eigenvalues().data() + kk);
        if (with_vectors) {
            interior = es.eigenvectors().leftCols(kk);
            for (Eigen::Index j = 0; j < kk; ++j) {
                fix_sign(interior.col(j));
                out.max_residual =
                    std::max(out.max_residual, (h * interior.col(j) - out.values[j] * interior.col(j)).norm());
            }
        }
    }
    if (!with_vectors) return out;

    // Embed into the full grid and rescale to the h-weighted norm.
    const auto d = static_cast<Eigen::Index>(op.block);
    Eigen::MatrixXd full = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(op.grid.n) * d, interior.cols());
    full.middleRows(static_cast<Eigen::Index>(op.first_node()) * d, interior.rows()) = interior;
    full /= std::sqrt(op.grid.step);
    out.vectors = std::move(full);
    return out;
}

double PairingReport::max_gap() const
{
    double g = 0.0;
    for (const auto& p : pairs) g = std::max(g, p.gap);
    return g;
}

std::size_t PairingReport::near_zero_count() const
{
    return static_cast<std::size_t>(
        std::count_if(unpaired.begin(), unpaired.end(), [&](const UnpairedLevel& u) { return u.value <= floor; }));
}

std::size_t PairingReport::unpaired_above_floor(PartnerSide side) const
{
    return static_cast<std::size_t>(std::count_if(unpaired.begin(), unpaired.end(), [&](const UnpairedLevel& u) {
        return u.side == side && u.value > floor;
    }));
}

PairingReport susy_pairing(std::span<const double> plus, std::span<const double> minus, double floor, double tol)
{
    PairingReport report;
    report.tolerance = tol;
    report.floor = floor;
    std::vector<double> p(plus.begin(), plus.end()), m(minus.begin(), minus.end());
    std::sort(p.begin(), p.end());
    std::sort(m.begin(), m.end());
    std::vector<bool> used(p.size(), false);
    for (std::size_t i = 0; i < p.size(); ++i)
        if (p[i] <= floor) {
            used[i] = true;
            report.unpaired.push_back({p[i], PartnerSide::plus});
        }
    for (double e : m) {
        if (e <= floor) {
            report.unpaired.push_back({e, PartnerSide::minus});
            continue;
        }
        std::size_t best = p.size();
        for (std::size_t i = 0; i < p.size(); ++i)
            if (!used[i] && (best == p.size() || std::abs(p[i] - e) < std::abs(p[best] - e))) best = i;
        if (best < p.size() && std::abs(p[best] - e) <= tol) {
            used[best] = true;
            report.pairs.push_back({p[best], e, std::abs(p[best] - e)});
        } else {
            report.unpaired.push_back({e, PartnerSide::minus});
        }
    }
    for (std::size_t i = 0; i < p.size(); ++i)
        if (!used[i]) report.unpaired.push_back({p[i], PartnerSide::plus});
    return report;
}

PairingReport susy_pairing(const Spectrum& plus, const Spectrum& minus, double floor, double tol)
{
    return susy_pairing(plus.values, minus.values, floor, tol);
}

FactorizedPartners factorized_partners(std::span<const double> superpotential, const Grid1D& grid)
{
    const std::size_t n = superpotential.size();
    if (n != grid.n) throw ConstraintError("factorized_partners: superpotential length does not match the grid");
    if (n < min_nodes) throw GridTooSmall("factorized_partners: at least 16 nodes required");
    const double h = grid.step;
    // Row j of Q couples nodes j and j+1: a_j psi_j + b_j psi_{j+1}.
    std::vector<double> a(n - 1), b(n - 1);
    for (std::size_t j = 0; j + 1 < n; ++j) {
        const double w = 0.25 * (superpotential[j] + superpotential[j + 1]);
        a[j] = -1.0 / h + w;
        b[j] = 1.0 / h + w;
    }
    FactorizedPartners out;
    out.minus.diagonal.assign(n, 0.0);
    out.minus.off_diagonal.resize(n - 1);
    for (std::size_t i = 0; i < n; ++i) {
        if (i > 0) out.minus.diagonal[i] += b[i - 1] * b[i - 1];
        if (i + 1 < n) out.minus.diagonal[i] += a[i] * a[i];
    }
    for (std::size_t i = 0; i + 1 < n; ++i) out.minus.off_diagonal[i] = a[i] * b[i];
    out.plus.diagonal.resize(n - 1);
    out.plus.off_diagonal.resize(n - 2);
    for (std::size_t j = 0; j + 1 < n; ++j) out.plus.diagonal[j] = a[j] * a[j] + b[j] * b[j];
    for (std::size_t j = 0; j + 2 < n; ++j) out.plus.off_diagonal[j] = b[j] * a[j + 1];
    return out;
}

std::vector<double> ground_state_transport(std::span<const double> connection, const Grid1D& grid, double psi0)
{
    if (connection.size() != grid.n) throw ConstraintError("ground_state_transport: length does not match the grid");
    std::vector<double> psi(connection.size());
    double integral = 0.0;
    for (std::size_t i = 0; i < connection.size(); ++i) {
        if (i > 0) integral += 0.5 * grid.step * (connection[i - 1] + connection[i]);
        psi[i] = psi0 * std::exp(-0.5 * integral);
    }
    return psi;
}

std::vector<Eigen::MatrixXd> transport_propagator(std::span<const Eigen::MatrixXd> connection, const Grid1D& grid)
{
    const std::size_t n = connection.size();
    if (n != grid.n || n == 0) throw ConstraintError("transport_propagator: length does not match the grid");
    const std::size_t steps = grid.boundary == Boundary::periodic ? n : n - 1;
    const auto d = connection.front().rows();
    std::vector<Eigen::MatrixXd> u;
    u.reserve(steps + 1);
    u.push_back(Eigen::MatrixXd::Identity(d, d));
    for (std::size_t i = 0; i < steps; ++i) {
        const Eigen::MatrixXd mid = 0.5 * (connection[i] + connection[(i + 1) % n]);
        const Eigen::MatrixXd step = (-0.5 * grid.step * mid).exp();
        u.push_back(step * u.back());
    }
    return u;
}

std::vector<Eigen::MatrixXd> transport_propagator(std::span<const Eigen::Matrix3d> connection, const Grid1D& grid)
{
    std::vector<Eigen::MatrixXd> a(connection.begin(), connection.end());
    return transport_propagator(a, grid);
}

std::vector<Eigen::VectorXd> ground_state_transport(std::span<const Eigen::Matrix3d> connection, const Grid1D& grid,
                                                    const Eigen::VectorXd& psi0)
{
    const auto u = transport_propagator(connection, grid);
    std::vector<Eigen::VectorXd> psi;
    psi.reserve(u.size());
    for (const auto& m : u) psi.push_back(m * psi0);
    return psi;
}

double annihilation_residual(std::span<const double> psi, std::span<const double> connection, const Grid1D& grid,
                             CovariantSign sign)
{
    if (psi.size() != connection.size()) throw ConstraintError("annihilation_residual: length mismatch");
    const double s = sign == CovariantSign::plus ? 0.5 : -0.5;
    double scale = 0.0;
    for (double v : psi) scale = std::max(scale, std::abs(v));
    if (scale == 0.0) return 0.0;
    double r = 0.0;
    for (std::size_t i = 1; i + 1 < psi.size(); ++i) {
        const double d = (psi[i + 1] - psi[i - 1]) / (2 * grid.step);
        r = std::max(r, std::abs(d + s * connection[i] * psi[i]));
    }
    return r / scale;
}

double annihilation_residual(std::span<const Eigen::VectorXd> psi, std::span<const Eigen::Matrix3d> connection,
                             const Grid1D& grid, CovariantSign sign)
{
    if (connection.empty()) throw ConstraintError("annihilation_residual: empty connection");
    const double s = sign == CovariantSign::plus ? 0.5 : -0.5;
    double scale = 0.0;
    for (const auto& v : psi) scale = std::max(scale, v.cwiseAbs().maxCoeff());
    if (scale == 0.0) return 0.0;
    double r = 0.0;
    for (std::size_t i = 1; i + 1 < psi.size(); ++i) {
        const Eigen::VectorXd d = (psi[i + 1] - psi[i - 1]) / (2 * grid.step);
        const Eigen::VectorXd res = d + s * connection[i % connection.size()] * psi[i];
        r = std::max(r, res.cwiseAbs().maxCoeff());
    }
    return r / scale;
}

double cosine_similarity(std::span<const double> a, std::span<const double> b)
{
    if (a.size() != b.size()) throw ConstraintError("cosine_similarity: length mismatch");
    double ab = 0.0, aa = 0.0, bb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        ab += a[i] * b[i];
        aa += a[i] * a[i];
        bb += b[i] * b[i];
    }
    return ab / std::sqrt(aa * bb);
}

}  // namespace movframe
