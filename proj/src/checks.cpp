#include "movframe/checks.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <functional>
#include <numbers>
#include <stdexcept>

#include "movframe/dirac.hpp"
#include "movframe/finite_diff.hpp"
#include "movframe/io.hpp"
#include "movframe/nets.hpp"
#include "movframe/potentials.hpp"
#include "movframe/spectral.hpp"
#include "movframe/surfaces.hpp"

namespace movframe::checks {

using std::numbers::pi;

Measurement measure(std::string name, double value, double bound, Relation relation)
{
    const bool pass = relation == Relation::at_most ? value <= bound : value >= bound;
    return {std::move(name), value, bound, relation, pass};
}

void CheckReport::finalize()
{
    pass = std::all_of(measurements.begin(), measurements.end(), [](const auto& m) { return m.pass; }) &&
           std::all_of(timings.begin(), timings.end(), [](const auto& t) { return t.pass; });
}

namespace {

std::string_view to_string(Relation r) { return r == Relation::at_most ? "at_most" : "at_least"; }

Relation parse_relation(const std::string& s)
{
    if (s == "at_most") return Relation::at_most;
    if (s == "at_least") return Relation::at_least;
    throw json::other_error::create(501, "unknown relation '" + s + "'", nullptr);
}

// Non-finite numbers have no JSON representation; they are written as strings.
json number_to_json(double x)
{
    if (std::isfinite(x)) return x;
    if (std::isnan(x)) return "nan";
    return x > 0 ? "inf" : "-inf";
}

double number_from_json(const json& j)
{
    if (j.is_string()) {
        const auto s = j.get<std::string>();
        if (s == "inf") return std::numeric_limits<double>::infinity();
        if (s == "-inf") return -std::numeric_limits<double>::infinity();
        return std::numeric_limits<double>::quiet_NaN();
    }
    return j.get<double>();
}

}  // namespace

void to_json(json& j, const Measurement& m)
{
    j = json{{"name", m.name},
             {"value", number_to_json(m.value)},
             {"bound", number_to_json(m.bound)},
             {"relation", to_string(m.relation)},
             {"pass", m.pass}};
}

void from_json(const json& j, Measurement& m)
{
    m.name = j.at("name").get<std::string>();
    m.value = number_from_json(j.at("value"));
    m.bound = number_from_json(j.at("bound"));
    m.relation = parse_relation(j.at("relation").get<std::string>());
    m.pass = j.at("pass").get<bool>();
}

void to_json(json& j, const Timing& t)
{
    j = json{{"name", t.name}, {"limit_seconds", t.limit_seconds}, {"wall_seconds", t.wall_seconds}, {"pass", t.pass}};
}

void from_json(const json& j, Timing& t)
{
    t.name = j.at("name").get<std::string>();
    t.limit_seconds = j.at("limit_seconds").get<double>();
    t.wall_seconds = j.at("wall_seconds").get<double>();
    t.pass = j.at("pass").get<bool>();
}

void to_json(json& j, const CheckReport& r)
{
    j = json{{"id", r.id},
             {"title", r.title},
             {"inputs", r.inputs},
             {"measurements", r.measurements},
             {"values", r.values},
             {"order", r.order ? number_to_json(*r.order) : json(nullptr)},
             {"timings", r.timings},
             {"wall_seconds", r.wall_seconds},
             {"pass", r.pass}};
}

void from_json(const json& j, CheckReport& r)
{
    r.id = j.at("id").get<std::string>();
    r.title = j.at("title").get<std::string>();
    r.inputs = j.at("inputs");
    r.measurements = j.at("measurements").get<std::vector<Measurement>>();
    r.values = j.at("values");
    const auto& o = j.at("order");
    r.order = o.is_null() ? std::nullopt : std::optional<double>(number_from_json(o));
    r.timings = j.at("timings").get<std::vector<Timing>>();
    r.wall_seconds = j.at("wall_seconds").get<double>();
    r.pass = j.at("pass").get<bool>();
}

std::string_view to_string(Preset p) { return p == Preset::desk ? "desk" : "fine"; }

std::optional<Preset> parse_preset(std::string_view name)
{
    if (name == "desk") return Preset::desk;
    if (name == "fine") return Preset::fine;
    return std::nullopt;
}

namespace {

constexpr std::array<Criterion, 13> criterion_table{{
    {1, "da Costa values on cylinder and sphere"},
    {2, "Gauss compatibility on the tanh Fermi net"},
    {3, "scalar Dirac identity across the test-function suite"},
    {4, "Fermi cancellation of quadratic curvature terms"},
    {5, "Riccati flow of the longitudinal curvature"},
    {6, "SUSY pairing of the tanh partner spectra"},
    {7, "orientation reversal exchanges the partners"},
    {8, "parallel-transport ground state and helix propagator"},
    {9, "matrix partners on the helix"},
    {10, "curvature obstruction and holonomy"},
    {11, "energy scale of the curvature potential"},
    {12, "reduced Dirac structure"},
    {13, "full suite at desk scale"},
}};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

class Timer {
public:
    explicit Timer(CheckReport& r) : report_(r), start_(Clock::now()), lap_(start_) {}

    void lap(std::string name, double limit)
    {
        const double s = seconds_since(lap_);
        report_.timings.push_back({std::move(name), limit, s, s <= limit});
        lap_ = Clock::now();
    }
    void stop() { report_.wall_seconds = seconds_since(start_); }

private:
    CheckReport& report_;
    Clock::time_point start_, lap_;
};

struct Level {
    unsigned refine = 0;

    std::size_t open(std::size_t n, unsigned extra = 0) const { return io::refine_count(n, Boundary::open, refine + extra); }
    std::size_t periodic(std::size_t n, unsigned extra = 0) const
    {
        return io::refine_count(n, Boundary::periodic, refine + extra);
    }
    std::size_t margin(std::size_t base, unsigned extra = 0) const { return base << (refine + extra); }
};

CheckReport start(int id)
{
    CheckReport r;
    r.id = std::to_string(id);
    r.title = std::string(criterion_table[static_cast<std::size_t>(id - 1)].title);
    return r;
}

std::optional<double> order_of(double coarse, double fine)
{
    if (!(coarse > 0.0) || !(fine > 0.0)) return std::nullopt;
    return fd::convergence_order(coarse, fine);
}

Field2D shifted(Field2D f, double target)
{
    for (double& x : f.data()) x -= target;
    return f;
}

OrthogonalNet tanh_fermi(std::size_t ns, std::size_t nr) { return fermi_net(tanh_profile(2.0, -8, 8, ns), 0.1, nr); }

CheckReport dacosta_values(Level lv)
{
    auto r = start(1);
    Timer timer(r);
    const std::size_t nt = lv.periodic(512), nz = lv.open(16);
    const auto cyl = cylinder_patch(1.0, 0, 2, nt, nz);
    const auto fc = fundamental_forms(cyl);
    const double cyl_dev = fd::interior_max_abs(shifted(dacosta_surface(fc.H, fc.K), -0.25), cyl.u, cyl.v,
                                                lv.margin(surface_margin));
    timer.lap("cylinder", 1.0);

    const std::size_t nth = lv.open(128), nph = lv.periodic(128);
    const auto sph = sphere_patch(1.0, pi / 8, 7 * pi / 8, nth, nph);
    const auto fs = fundamental_forms(sph);
    const double sph_dev = fd::interior_max_abs(dacosta_surface(fs.H, fs.K), sph.u, sph.v, lv.margin(surface_margin));
    timer.lap("sphere", 1.0);

    r.inputs = {{"cylinder", {{"radius", 1.0}, {"z", {0.0, 2.0}}, {"nt", nt}, {"nz", nz}}},
                {"sphere", {{"radius", 1.0}, {"theta", {pi / 8, 7 * pi / 8}}, {"ntheta", nth}, {"nphi", nph}}}};
    r.measurements.push_back(measure("cylinder_max_abs_V_plus_0.25", cyl_dev, 1e-4));
    r.measurements.push_back(measure("sphere_max_abs_V", sph_dev, 1e-4));
    timer.stop();
    return r;
}

CheckReport gauss_compatibility(Level lv)
{
    auto r = start(2);
    Timer timer(r);
    const std::size_t ns = lv.open(256), nr = lv.open(64);
    const double coarse = gauss_residual(tanh_fermi(ns, nr), lv.margin(default_margin));
    const double fine = gauss_residual(tanh_fermi(lv.open(256, 1), lv.open(64, 1)), lv.margin(default_margin, 1));
    timer.lap("both grids", 5.0);

    r.inputs = {{"kappa", "2 tanh(s)"}, {"s", {-8.0, 8.0}}, {"rho_max", 0.1}, {"grid", {ns, nr}},
                {"fine_grid", {lv.open(256, 1), lv.open(64, 1)}}};
    r.values = {{"fine_residual", fine}};
    r.order = order_of(coarse, fine);
    r.measurements.push_back(measure("gauss_residual", coarse, 5e-3));
    r.measurements.push_back(measure("reduction_factor", fine > 0 ? coarse / fine : 0.0, 3.5, Relation::at_least));
    timer.stop();
    return r;
}

CheckReport scalar_identity(Level lv)
{
    auto r = start(3);
    Timer timer(r);
    const auto coarse = tanh_fermi(lv.open(256), lv.open(64));
    const auto fine = tanh_fermi(lv.open(256, 1), lv.open(64, 1));
    double worst = 0.0, min_order = std::numeric_limits<double>::infinity();
    json per = json::array();
    for (const auto& t : default_test_functions()) {
        const double rc = scalar_identity_residual(coarse, sample(coarse.u, coarse.v, t.f), lv.margin(default_margin));
        const double rf =
            scalar_identity_residual(fine, sample(fine.u, fine.v, t.f), lv.margin(default_margin, 1));
        worst = std::max(worst, rc);
        const auto o = order_of(rc, rf);
        // Residuals at rounding level carry no order information.
        if (rc > 1e-9 && o) min_order = std::min(min_order, *o);
        per.push_back({{"function", t.name}, {"residual", rc}, {"fine_residual", rf},
                       {"order", o ? json(*o) : json(nullptr)}});
    }
    timer.lap("suite on both grids", 10.0);

    r.inputs = {{"kappa", "2 tanh(s)"}, {"rho_max", 0.1}, {"grid", {coarse.u.n, coarse.v.n}},
                {"fine_grid", {fine.u.n, fine.v.n}}};
    r.values = {{"functions", per}};
    r.order = min_order;
    r.measurements.push_back(measure("max_identity_residual", worst, 5e-3));
    r.measurements.push_back(measure("min_order", min_order, 1.8, Relation::at_least));
    timer.stop();
    return r;
}

CheckReport fermi_cancellation(Level lv)
{
    auto r = start(4);
    Timer timer(r);
    struct Shipped {
        std::string name;
        CurvatureProfile profile;
    };
    const std::vector<Shipped> profiles{
        {"tanh", tanh_profile(2.0, -8, 8, lv.open(257))},
        {"constant", constant_profile(0.7, 0, 3, lv.open(64))},
        {"zero", constant_profile(0.0, 0, 1, lv.open(16))},
        {"circle", curvature_planar(make_circle(1.5, lv.open(257)))},
        {"ellipse", curvature_planar(make_ellipse(2.0, 1.0, lv.open(257)))},
        {"tanh_bump", curvature_planar(curve_from_curvature(tanh_profile(2.0, -8, 8, lv.open(257))))},
    };
    double worst = 0.0;
    json names = json::array();
    for (const auto& s : profiles) {
        worst = std::max(worst, fermi_cancellation_report(s.profile).max_abs_sum());
        names.push_back(s.name);
    }
    const auto& p = profiles.front().profile;
    const auto general = fermi_cancellation_report(p, std::vector<double>(p.size(), 0.4));
    double control = 0.0;
    for (double x : general.sum) control = std::max(control, std::abs(x - 0.04));
    timer.stop();

    r.inputs = {{"profiles", names}, {"control_k2", 0.4}};
    r.measurements.push_back(measure("max_abs_sum", worst, 1e-15));
    r.measurements.push_back(measure("control_deviation_from_0.04", control, 1e-12));
    return r;
}

CheckReport riccati(Level lv)
{
    auto r = start(5);
    Timer timer(r);
    const auto rho = Grid1D::spanning(0, 0.5, lv.open(501));
    const auto k1 = riccati_flow(1.0, rho);
    const double err = std::abs(k1.back() - 2.0 / 3.0);
    const double res = riccati_residual(k1, rho);
    timer.lap("flow", 1.0);

    r.inputs = {{"kappa", 1.0}, {"rho_max", 0.5}, {"step", rho.step}};
    r.values = {{"k1_at_rho_max", k1.back()}};
    r.measurements.push_back(measure("abs_err_at_rho_max", err, 1e-8));
    r.measurements.push_back(measure("ode_residual", res, 1e-6));
    timer.stop();
    return r;
}

CheckReport susy_pairing_check(Level lv)
{
    auto r = start(6);
    Timer timer(r);
    const std::size_t n = lv.open(2048);
    const auto p = tanh_profile(2.0, -12, 12, n);
    const auto partners = susy_partners(p);
    const std::size_t k = 24;
    const auto minus = eigen(discretize(partners.minus), k, false);
    const auto plus = eigen(discretize(partners.plus), k + 8, false);
    const double floor = 0.05, tol = 5e-3;
    const auto pairing = susy_pairing(plus, minus, floor, tol);
    // Minus levels near the top of the computed plus window may have their
    // partner outside it; they are left out of the count.
    const double window = plus.values.back() - tol;
    std::size_t unpaired_minus = 0;
    for (const auto& u : pairing.unpaired)
        if (u.side == PartnerSide::minus && u.value > floor && u.value < window) ++unpaired_minus;

    // Supplement: the exactly factorized discretization.
    const auto fp = factorized_partners(partners.superpotential.w, p.grid());
    const auto fm = tridiagonal_eigen(fp.minus, 12, false), fpl = tridiagonal_eigen(fp.plus, 12, false);
    double factorized_gap = 0.0;
    for (std::size_t j = 0; j + 1 < 12; ++j)
        factorized_gap = std::max(factorized_gap, std::abs(fm.values[j + 1] - fpl.values[j]));
    timer.lap("spectra", 20.0);

    r.inputs = {{"kappa", "2 tanh(s)"}, {"s", {-12.0, 12.0}}, {"n", n}, {"boundary", "dirichlet"},
                {"floor", floor}, {"tolerance", tol}};
    r.values = {{"V_minus_eigs", minus.values},
                {"V_plus_eigs", plus.values},
                {"max_pair_gap", pairing.max_gap()},
                {"pairs", pairing.pairs.size()},
                {"factorized_zero_mode", fm.values[0]},
                {"factorized_max_pair_gap", factorized_gap}};
    r.measurements.push_back(measure("abs_ground_minus", std::abs(minus.values[0]), 2e-3));
    r.measurements.push_back(measure("unpaired_minus_above_floor", static_cast<double>(unpaired_minus), 0.0));
    r.measurements.push_back(
        measure("near_zero_unpaired_max", static_cast<double>(pairing.near_zero_count()), 1.0, Relation::at_most));
    r.measurements.push_back(
        measure("near_zero_unpaired_min", static_cast<double>(pairing.near_zero_count()), 1.0, Relation::at_least));
    timer.stop();
    return r;
}

CheckReport orientation_exchange(Level lv)
{
    auto r = start(7);
    Timer timer(r);
    const std::size_t n = lv.open(1025);
    const auto p = tanh_profile(2.0, -8, 8, n);
    const auto minus = susy_partners(p).minus.values;
    const auto plus_rev = susy_partners(orientation_reverse(p)).plus.values;
    double worst = 0.0;
    for (std::size_t i = 1; i + 1 < n; ++i) worst = std::max(worst, std::abs(plus_rev[i] - minus[n - 1 - i]));
    timer.stop();

    r.inputs = {{"kappa", "2 tanh(s)"}, {"s", {-8.0, 8.0}}, {"n", n}};
    r.measurements.push_back(measure("max_abs_swap_error", worst, 1e-12));
    return r;
}

CurvatureProfile helix_profile(std::size_t n)
{
    // One period of the helix with radius 3 and pitch parameter 4 has length 10 pi.
    auto p = constant_profile(0.12, 0, 10 * pi, n, Boundary::periodic);
    p.tau = std::vector<double>(n, 0.16);
    return p;
}

CheckReport transport(Level lv)
{
    auto r = start(8);
    Timer timer(r);
    const std::size_t n = lv.open(2048);
    const auto p = tanh_profile(2.0, -12, 12, n);
    const auto psi = ground_state_transport(p.kappa, p.grid());
    const auto ground = eigen(discretize(susy_partners(p).minus), 1);
    const auto& v = *ground.vectors;
    const std::vector<double> g(v.col(0).data(), v.col(0).data() + v.rows());
    const double cosine = cosine_similarity(psi, g);
    const double coarse = annihilation_residual(psi, p.kappa, p.grid());
    const auto pf = tanh_profile(2.0, -12, 12, lv.open(2048, 1));
    const double fine = annihilation_residual(ground_state_transport(pf.kappa, pf.grid()), pf.kappa, pf.grid());

    const std::size_t nh = lv.periodic(1024);
    const auto hp = helix_profile(nh);
    std::vector<Eigen::Matrix3d> a(nh);
    for (std::size_t i = 0; i < nh; ++i) a[i] = frenet_matrix(hp, i);
    const Eigen::MatrixXd u = transport_propagator(a, hp.grid()).back();
    const double orth = (u.transpose() * u - Eigen::MatrixXd::Identity(3, 3)).cwiseAbs().maxCoeff();
    timer.stop();

    r.inputs = {{"kappa", "2 tanh(s)"}, {"s", {-12.0, 12.0}}, {"n", n}, {"fine_n", pf.size()},
                {"helix", {{"kappa", 0.12}, {"tau", 0.16}, {"period", 10 * pi}, {"n", nh}}}};
    r.values = {{"cosine_similarity", cosine}, {"fine_residual", fine}};
    r.order = order_of(coarse, fine);
    r.measurements.push_back(measure("one_minus_cosine", 1.0 - cosine, 1e-4));
    r.measurements.push_back(measure("annihilation_residual", coarse, 1e-4));
    r.measurements.push_back(measure("order", r.order.value_or(0.0), 1.8, Relation::at_least));
    r.measurements.push_back(measure("helix_orthogonality_error", orth, 1e-8));
    return r;
}

CheckReport matrix_partners(Level lv)
{
    auto r = start(9);
    Timer timer(r);
    const std::size_t n = lv.periodic(96), k = 30;
    const auto ms = matrix_superpotential(helix_profile(n));
    const auto hp = eigen(discretize(ms.plus, ms.grid, SpectralBoundary::periodic), k, false);
    const auto hm = eigen(discretize(ms.minus, ms.grid, SpectralBoundary::periodic), k, false);
    double spectral_gap = 0.0;
    for (std::size_t j = 0; j < k; ++j) spectral_gap = std::max(spectral_gap, std::abs(hp.values[j] - hm.values[j]));
    double trace_dev = 0.0;
    for (const auto& w : ms.w) trace_dev = std::max(trace_dev, std::abs((w * w).trace() + 0.02));

    const std::size_t nc = lv.open(1025);
    const auto frenet = frenet_apparatus(make_helix(3.0, 4.0, 1.0, nc));
    double omega_dev = 0.0;
    for (double q : quadratic_invariant(frenet.profile)) omega_dev = std::max(omega_dev, std::abs(q - 0.04));
    timer.stop();

    r.inputs = {{"kappa", 0.12}, {"tau", 0.16}, {"n", n}, {"eigenvalues", k},
                {"helix_curve", {{"radius", 3.0}, {"pitch", 4.0}, {"turns", 1.0}, {"n", nc}}}};
    r.measurements.push_back(measure("max_spectral_difference", spectral_gap, 1e-6));
    r.measurements.push_back(measure("trace_W2_deviation", trace_dev, 1e-12));
    r.measurements.push_back(measure("omega_squared_deviation", omega_dev, 1e-4));
    return r;
}

CheckReport obstruction(Level lv)
{
    auto r = start(10);
    Timer timer(r);
    const auto sphere = [](std::size_t nth, std::size_t nph) { return sphere_patch(1.0, pi / 8, 7 * pi / 8, nth, nph); };
    const double coarse = obstruction_residual(sphere(lv.open(128), lv.periodic(128)), lv.margin(surface_margin));
    const double fine =
        obstruction_residual(sphere(lv.open(128, 1), lv.periodic(128, 1)), lv.margin(surface_margin, 1));

    const auto cap = holonomy_check(sphere_patch(1.0, 0, pi / 2, lv.open(193), lv.periodic(128)), {0, pi / 3, 0, 2 * pi});

    const auto cyl = cylinder_patch(1.0, 0, 2, lv.periodic(128), lv.open(17));
    double cyl_loop = 0.0;
    for (const auto& rect : {CoordinateRectangle{0, 2 * pi, 0.5, 1.5}, CoordinateRectangle{pi / 4, pi, 0.25, 1.75}})
        cyl_loop = std::max(cyl_loop, std::abs(holonomy_check(cyl, rect).loop_integral));
    timer.lap("all", 10.0);

    r.inputs = {{"sphere", {{"radius", 1.0}, {"grid", {lv.open(128), lv.periodic(128)}}}},
                {"cap", {{"theta0", pi / 3}, {"grid", {lv.open(193), lv.periodic(128)}}}},
                {"cylinder", {{"radius", 1.0}, {"grid", {lv.periodic(128), lv.open(17)}}}}};
    r.values = {{"fine_residual", fine},
                {"cap_loop_integral", cap.loop_integral},
                {"cap_area_integral", cap.area_integral}};
    r.order = order_of(coarse, fine);
    r.measurements.push_back(measure("obstruction_residual", coarse, 1e-3));
    r.measurements.push_back(measure("order", r.order.value_or(0.0), 1.8, Relation::at_least));
    r.measurements.push_back(measure("cap_mismatch", cap.mismatch, 2e-3));
    r.measurements.push_back(measure("cap_area_minus_pi", std::abs(cap.area_integral - pi), 2e-3));
    r.measurements.push_back(measure("cylinder_max_abs_loop", cyl_loop, 1e-6));
    timer.stop();
    return r;
}

CheckReport energy(Level)
{
    auto r = start(11);
    Timer timer(r);
    const double radius = 1e-8;
    const auto e = energy_scale(radius, codata::electron_mass);
    // hbar^2 / (2 m) * 1 / (4 R^2), with the constants written out.
    const double hbar = 1.054571817e-34, me = 9.1093837015e-31, ev = 1.602176634e-19;
    const double oracle_mev = hbar * hbar / (2 * me) / (4 * radius * radius) / ev * 1e3;
    double homogeneity = 0.0;
    for (double scale : {0.5, 2.0, 3.0, 10.0}) {
        const double ratio = energy_scale(radius * scale, codata::electron_mass).joules * scale * scale / e.joules;
        homogeneity = std::max(homogeneity, std::abs(ratio - 1.0));
    }
    timer.stop();

    r.inputs = {{"R_m", radius}, {"mass", "electron"}};
    r.values = {{"E_meV", e.mev}, {"E_J", e.joules}, {"oracle_meV", oracle_mev}};
    r.measurements.push_back(measure("relative_deviation_from_0.095_meV", std::abs(e.mev / 9.5e-2 - 1), 1e-2));
    r.measurements.push_back(measure("relative_deviation_from_oracle", std::abs(e.mev / oracle_mev - 1), 1e-12));
    r.measurements.push_back(measure("homogeneity_error", homogeneity, 1e-12));
    return r;
}

CheckReport reduced_dirac_structure(Level lv)
{
    auto r = start(12);
    Timer timer(r);
    const std::size_t n = lv.open(200), k = 6;
    const auto c = reduced_dirac(constant_profile(0.8, 0, pi, n));
    const auto sc = eigen(c.op, 2 * k, false);
    const auto free = eigen(discretize(std::vector<double>(n, 0.0), Grid1D::spanning(0, pi, n),
                                       SpectralBoundary::dirichlet), k, false);
    double degeneracy = 0.0, free_gap = 0.0;
    for (std::size_t j = 0; j < k; ++j) {
        degeneracy = std::max(degeneracy, std::abs(sc.values[2 * j] - sc.values[2 * j + 1]));
        free_gap = std::max({free_gap, std::abs(sc.values[2 * j] - free.values[j]),
                             std::abs(sc.values[2 * j + 1] - free.values[j])});
    }

    const std::size_t nt = lv.open(257);
    const auto p = tanh_profile(2.0, -8, 8, nt);
    CurvatureProfile neg = p;
    for (auto& x : neg.kappa) x = -x;
    const Eigen::MatrixXd h = reduced_dirac(p).op.dense(), hn = reduced_dirac(neg).op.dense();
    // Swap the two spinor components at every node.
    const auto swap = [](Eigen::Index i) { return i % 2 == 0 ? i + 1 : i - 1; };
    double swap_error = 0.0;
    for (Eigen::Index i = 0; i < h.rows(); ++i)
        for (Eigen::Index j = 0; j < h.cols(); ++j)
            swap_error = std::max(swap_error, std::abs(h(swap(i), swap(j)) - hn(i, j)));
    timer.stop();

    r.inputs = {{"constant_kappa", 0.8}, {"s", {0.0, pi}}, {"n", n}, {"swap_profile", "2 tanh(s)"}, {"swap_n", nt}};
    r.values = {{"reduced_eigs", sc.values}, {"free_eigs", free.values}};
    r.measurements.push_back(measure("degeneracy_splitting", degeneracy, 1e-10));
    r.measurements.push_back(measure("free_spectrum_difference", free_gap, 1e-10));
    r.measurements.push_back(measure("block_swap_error", swap_error, 0.0));
    return r;
}

}  // namespace

std::span<const Criterion> criteria() { return criterion_table; }

CheckReport run_criterion(int id, Preset preset)
{
    static const std::array<std::function<CheckReport(Level)>, 12> runners{
        dacosta_values, gauss_compatibility, scalar_identity, fermi_cancellation, riccati,
        susy_pairing_check, orientation_exchange, transport, matrix_partners, obstruction,
        energy, reduced_dirac_structure,
    };
    if (id < 1 || id > 12) throw std::out_of_range("no runnable criterion " + std::to_string(id));
    auto report = runners[static_cast<std::size_t>(id - 1)](Level{preset == Preset::fine ? 1u : 0u});
    report.inputs["preset"] = std::string(to_string(preset));
    report.finalize();
    return report;
}

CheckReport suite_report(std::span<const CheckReport> reports, double total_wall_seconds)
{
    auto r = start(13);
    std::size_t failed = 0;
    json ids = json::array();
    for (const auto& x : reports) {
        ids.push_back(x.id);
        if (!x.pass) ++failed;
    }
    r.inputs = {{"reports", ids}};
    r.measurements.push_back(measure("failed_criteria", static_cast<double>(failed), 0.0));
    r.measurements.push_back(measure("reports", static_cast<double>(reports.size()), 12.0, Relation::at_least));
    r.timings.push_back({"suite", 90.0, total_wall_seconds, total_wall_seconds <= 90.0});
    r.wall_seconds = total_wall_seconds;
    r.finalize();
    return r;
}

json without_wall_time(json j)
{
    if (j.is_object()) {
        for (auto& [key, value] : j.items()) {
            if (key == "wall_seconds") value = 0.0;
            else value = without_wall_time(value);
        }
    } else if (j.is_array()) {
        for (auto& value : j) value = without_wall_time(value);
    }
    return j;
}

}  // namespace movframe::checks
