#include "cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <memory>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>
#include <variant>

#include <CLI11.hpp>
#include <json.hpp>

#include "movframe/checks.hpp"
#include "movframe/dirac.hpp"
#include "movframe/errors.hpp"
#include "movframe/finite_diff.hpp"
#include "movframe/io.hpp"
#include "movframe/potentials.hpp"
#include "movframe/spectral.hpp"
#include "movframe/surfaces.hpp"

namespace movframe::cli {

namespace {

namespace fs = std::filesystem;
using json = nlohmann::json;
using ojson = nlohmann::ordered_json;
using std::numbers::pi;

/// Bad flag values or combinations. The message starts with the flag.
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class Format { csv, json };

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};

std::string number(double x)
{
    if (x == 0.0) x = 0.0;  // no "-0"
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string csv(const Table& t)
{
    std::string out;
    for (std::size_t c = 0; c < t.columns.size(); ++c) out += (c ? "," : "") + t.columns[c];
    out += '\n';
    for (const auto& row : t.rows) {
        for (std::size_t c = 0; c < row.size(); ++c) out += (c ? "," : "") + number(row[c]);
        out += '\n';
    }
    return out;
}

struct Report {
    std::variant<Table, ojson> body;
    int code = ExitCode::pass;
};

struct Common {
    std::string config;
    std::string out;
    std::string format;
    std::string preset = "desk";
    std::string input;
};

/// A flag whose value may also be given in the config file under the flag
/// name without dashes and with '-' replaced by '_'.
struct Binding {
    CLI::Option* option = nullptr;
    std::string key;
    std::function<void(const io::Source&)> assign;
};

template <class T>
T value_of(const io::Source& src)
{
    if constexpr (std::is_same_v<T, std::string>) {
        if (!src->is_string()) throw SchemaError(src.where() + ": expected a string");
        return src->template get<std::string>();
    } else if constexpr (std::is_same_v<T, std::size_t>) {
        if (!src->is_number_unsigned()) throw SchemaError(src.where() + ": expected a non-negative integer");
        return src->template get<std::size_t>();
    } else if constexpr (std::is_same_v<T, std::optional<double>>) {
        return value_of<double>(src);
    } else {
        if (!src->is_number()) throw SchemaError(src.where() + ": expected a number");
        return src->template get<double>();
    }
}

/// The primary input object of a subcommand with its backing document.
struct Input {
    std::shared_ptr<const json> doc;
    io::Source source;
};

struct Subcommand {
    CLI::App* app = nullptr;
    Common common;
    std::vector<Binding> bindings;
    bool tabular = false;
    std::string input_key;  ///< config key of the primary input object
    std::function<Report(Subcommand&)> exec;

    // Filled in after parsing.
    json config;
    std::string config_file;
    fs::path config_dir;

    template <class T>
    CLI::Option* param(const std::string& flag, T& var, const std::string& description)
    {
        auto* opt = app->add_option(flag, var, description);
        if constexpr (!std::is_same_v<T, std::optional<double>>) opt->capture_default_str();
        std::string key = flag.substr(2);
        std::replace(key.begin(), key.end(), '-', '_');
        bindings.push_back({opt, key, [&var](const io::Source& src) { var = value_of<T>(src); }});
        return opt;
    }

    void load_config()
    {
        if (common.config.empty()) return;
        config = io::read_json_file(common.config);
        config_file = common.config;
        config_dir = fs::path(common.config).parent_path();
        if (!config.is_object()) throw SchemaError(config_file + ":/: expected an object");
        for (auto& b : bindings)
            if (b.option->count() == 0 && config.contains(b.key))
                b.assign(io::Source{&config[b.key], config_file, "/" + b.key, config_dir});
    }

    Input input(json fallback) const
    {
        if (!common.input.empty()) {
            auto doc = std::make_shared<const json>(io::read_json_file(common.input));
            return {doc, io::Source{doc.get(), common.input, "", fs::path(common.input).parent_path()}};
        }
        if (!input_key.empty() && config.contains(input_key)) {
            auto doc = std::make_shared<const json>(config);
            return {doc, io::Source{&(*doc)[input_key], config_file, "/" + input_key, config_dir}};
        }
        auto doc = std::make_shared<const json>(std::move(fallback));
        return {doc, io::Source{doc.get(), "<defaults>", "", fs::current_path()}};
    }

    bool has_input() const { return !common.input.empty() || (!input_key.empty() && config.contains(input_key)); }

    io::Refinement level() const { return common.preset == "fine" ? 1 : 0; }
};

void require_positive(double x, const std::string& flag)
{
    if (!(x > 0.0) || !std::isfinite(x)) throw UsageError(flag + ": must be a positive number (got " + number(x) + ")");
}

void require_count(std::size_t n, std::size_t min, const std::string& flag)
{
    if (n < min) throw UsageError(flag + ": must be at least " + std::to_string(min) + " (got " + std::to_string(n) + ")");
}

ojson grid_json(const Grid1D& g)
{
    return {{"start", g.start},
            {"step", g.step},
            {"n", g.n},
            {"boundary", g.boundary == Boundary::periodic ? "periodic" : "open"}};
}

json tanh_profile_json(double amplitude, double s_max, std::size_t n)
{
    return {{"named", {{"kind", "tanh"}, {"params", {{"amplitude", amplitude}, {"s0", -s_max}, {"s1", s_max}, {"n", n}}}}}};
}

// Profile flags shared by potential, susy-spectrum and transport.
struct ProfileFlags {
    double amplitude = 2.0;
    double s_max = 8.0;
    std::size_t n = 257;

    void add(Subcommand& s)
    {
        s.param("--amplitude", amplitude, "amplitude a of the default profile kappa = a tanh(s)");
        s.param("--s-max", s_max, "default profile covers [-s_max, s_max]");
        s.param("--n", n, "samples of the default profile");
    }

    CurvatureProfile load(const Subcommand& s) const
    {
        if (!s.has_input()) {
            require_positive(s_max, "--s-max");
            require_count(n, 16, "--n");
        }
        const auto in = s.input(tanh_profile_json(amplitude, s_max, n));
        return io::load_profile(in.source, s.level());
    }
};

Report potential(const Subcommand& s, const ProfileFlags& flags)
{
    const auto p = flags.load(s);
    const auto vdc = dacosta_curve(p);
    const auto partners = susy_partners(p);
    Table t{{"s", "kappa", "V_dC", "V_plus", "V_minus"}, {}};
    const auto g = p.grid();
    for (std::size_t i = 0; i < p.size(); ++i)
        t.rows.push_back({g[i], p.kappa[i], vdc.values[i], partners.plus.values[i], partners.minus.values[i]});
    return {t};
}

struct SpectrumFlags {
    std::size_t count = 24;
    double floor = 0.05;
    double tol = 5e-3;
};

Report susy_spectrum(const Subcommand& s, const ProfileFlags& pf, const SpectrumFlags& f)
{
    require_count(f.count, 1, "--count");
    require_positive(f.tol, "--tol");
    if (!(f.floor >= 0.0)) throw UsageError("--floor: must be >= 0");
    const auto p = pf.load(s);
    const auto partners = susy_partners(p);
    const auto op_minus = discretize(partners.minus), op_plus = discretize(partners.plus);
    const auto minus = eigen(op_minus, std::min(f.count, op_minus.dimension()), false);
    const auto plus = eigen(op_plus, std::min(f.count + 8, op_plus.dimension()), false);
    const auto pairing = susy_pairing(plus, minus, f.floor, f.tol);

    // Minus levels whose partner could lie above the computed plus levels are
    // not counted as unpaired.
    const double window = plus.values.back() - f.tol;
    std::size_t unpaired_minus = 0;
    ojson pairs = ojson::array(), unpaired = ojson::array();
    for (const auto& x : pairing.pairs) pairs.push_back({{"plus", x.plus}, {"minus", x.minus}, {"gap", x.gap}});
    for (const auto& u : pairing.unpaired) {
        unpaired.push_back({{"value", u.value}, {"side", std::string(to_string(u.side))}});
        if (u.side == PartnerSide::minus && u.value > f.floor && u.value < window) ++unpaired_minus;
    }
    const bool ok = unpaired_minus == 0 && pairing.near_zero_count() <= 1;
    ojson j{{"grid", grid_json(p.grid())},
            {"boundary", std::string(to_string(op_minus.boundary))},
            {"V_plus_eigs", plus.values},
            {"V_minus_eigs", minus.values},
            {"pairs", pairs},
            {"unpaired", unpaired},
            {"floor", f.floor},
            {"tolerance", f.tol},
            {"unpaired_minus_above_floor", unpaired_minus},
            {"near_zero_unpaired", pairing.near_zero_count()},
            {"pass", ok}};
    return {j, ok ? ExitCode::pass : ExitCode::check_failed};
}

Report transport(const Subcommand& s, const ProfileFlags& pf, double tol)
{
    require_positive(tol, "--tol");
    const auto p = pf.load(s);
    const auto g = p.grid();
    const std::size_t n = p.size();
    Table t;
    double residual = 0.0;
    if (!p.tau) {
        const auto psi = ground_state_transport(p.kappa, g);
        const auto d = fd::derivative(psi, g.step, g.boundary);
        double scale = 0.0;
        for (double x : psi) scale = std::max(scale, std::abs(x));
        t.columns = {"s", "psi", "annihilation_residual"};
        for (std::size_t i = 0; i < n; ++i)
            t.rows.push_back({g[i], psi[i], std::abs(d[i] + 0.5 * p.kappa[i] * psi[i]) / scale});
        residual = annihilation_residual(psi, p.kappa, g);
    } else {
        std::vector<Eigen::Matrix3d> a(n);
        for (std::size_t i = 0; i < n; ++i) a[i] = frenet_matrix(p, i);
        const auto psi = ground_state_transport(a, g, Eigen::Vector3d(1, 0, 0));
        std::array<std::vector<double>, 3> comp;
        for (int c = 0; c < 3; ++c)
            for (const auto& v : psi) comp[c].push_back(v[c]);
        std::array<std::vector<double>, 3> d;
        for (int c = 0; c < 3; ++c) d[c] = fd::derivative(comp[c], g.step, g.boundary);
        double scale = 0.0;
        for (const auto& v : psi) scale = std::max(scale, v.norm());
        t.columns = {"s", "psi_1", "psi_2", "psi_3", "annihilation_residual"};
        for (std::size_t i = 0; i < n; ++i) {
            const Eigen::Vector3d r = Eigen::Vector3d(d[0][i], d[1][i], d[2][i]) + 0.5 * a[i] * psi[i];
            t.rows.push_back({g[i], psi[i][0], psi[i][1], psi[i][2], r.norm() / scale});
        }
        residual = annihilation_residual(psi, a, g);
    }
    return {t, residual <= tol ? ExitCode::pass : ExitCode::check_failed};
}

json default_net_json()
{
    return {{"fermi",
             {{"profile", tanh_profile_json(2.0, 8.0, 256)}, {"rho_max", 0.1}, {"n_rho", 64}}}};
}

struct NetPair {
    std::optional<CurvatureProfile> profile;  ///< reference curve of a Fermi net
    OrthogonalNet coarse;
    std::optional<OrthogonalNet> fine;
    std::size_t margin = default_margin;
    std::size_t fine_margin = 2 * default_margin;
};

NetPair load_nets(const Subcommand& s)
{
    const auto in = s.input(default_net_json());
    NetPair out{io::fermi_profile(in.source, s.level()), io::load_net(in.source, s.level()), std::nullopt,
                default_margin << s.level(), default_margin << (s.level() + 1)};
    try {
        out.fine = io::load_net(in.source, s.level() + 1);
    } catch (const ConstraintError&) {
        // Sampled nets have no refinement; the order is then not reported.
    }
    return out;
}

ojson grid_shape(const OrthogonalNet& net) { return ojson::array({net.u.n, net.v.n}); }

ojson order_json(std::optional<double> o) { return o && std::isfinite(*o) ? ojson(*o) : ojson(nullptr); }

std::optional<double> order_of(double coarse, const std::optional<double>& fine)
{
    if (!fine || !(coarse > 0.0) || !(*fine > 0.0)) return std::nullopt;
    return fd::convergence_order(coarse, *fine);
}

struct DiracFlags {
    double identity_tol = 5e-3;
    double commutator_tol = 1e-2;
    double min_order = 1.8;
};

/// Residuals at rounding level carry no order information.
bool order_ok(double value, std::optional<double> order, double min_order)
{
    return value <= 1e-9 || !order || *order >= min_order;
}

Report dirac_check(const Subcommand& s, const DiracFlags& f)
{
    require_positive(f.identity_tol, "--identity-tol");
    require_positive(f.commutator_tol, "--commutator-tol");
    const auto nets = load_nets(s);
    const auto& net = nets.coarse;
    bool ok = true;
    ojson identity = ojson::array(), commutator = ojson::array();
    for (const auto& t : default_test_functions()) {
        const Field2D fc = sample(net.u, net.v, t.f);
        const double ic = scalar_identity_residual(net, fc, nets.margin);
        const double cc = commutator_AB_residual(net, fc, CommutatorSign::plus, nets.margin);
        std::optional<double> ifine, cfine;
        if (nets.fine) {
            const Field2D ff = sample(nets.fine->u, nets.fine->v, t.f);
            ifine = scalar_identity_residual(*nets.fine, ff, nets.fine_margin);
            cfine = commutator_AB_residual(*nets.fine, ff, CommutatorSign::plus, nets.fine_margin);
        }
        const auto io_ = order_of(ic, ifine), co = order_of(cc, cfine);
        ok = ok && ic <= f.identity_tol && order_ok(ic, io_, f.min_order);
        ok = ok && cc <= f.commutator_tol && order_ok(cc, co, f.min_order);
        identity.push_back({{"function", t.name}, {"grid", grid_shape(net)}, {"value", ic}, {"order", order_json(io_)}});
        commutator.push_back({{"function", t.name}, {"grid", grid_shape(net)}, {"value", cc}, {"order", order_json(co)}});
    }

    // Quadratic terms along the reference curve of a Fermi net, or along the
    // line v = 0 of another net when it is a grid line.
    ojson cancellation{{"max_abs_sum", nullptr}};
    if (nets.profile) cancellation["max_abs_sum"] = fermi_cancellation_report(*nets.profile).max_abs_sum();
    for (std::size_t j = 0; j < net.v.n && !nets.profile; ++j) {
        if (std::abs(net.v[j]) > 1e-12 * std::max(1.0, net.v.length())) continue;
        const auto k = net_connection(net);
        CurvatureProfile line;
        line.start = net.u.start;
        line.step = net.u.step;
        line.boundary = net.u.boundary;
        std::vector<double> k2;
        for (std::size_t i = 0; i < net.u.n; ++i) {
            line.kappa.push_back(k.k1(i, j));
            k2.push_back(k.k2(i, j));
        }
        cancellation["max_abs_sum"] = fermi_cancellation_report(line, k2).max_abs_sum();
        break;
    }

    ojson j{{"identity_residuals", identity},
            {"commutator_residuals", commutator},
            {"cancellation", cancellation},
            {"fine_grid", nets.fine ? grid_shape(*nets.fine) : ojson(nullptr)},
            {"tolerances",
             {{"identity", f.identity_tol}, {"commutator", f.commutator_tol}, {"min_order", f.min_order}}},
            {"pass", ok}};
    return {j, ok ? ExitCode::pass : ExitCode::check_failed};
}

Report gauss_check(const Subcommand& s, double tol, double min_order)
{
    require_positive(tol, "--tol");
    const auto nets = load_nets(s);
    const double r = gauss_residual(nets.coarse, nets.margin);
    std::optional<double> fine;
    if (nets.fine) fine = gauss_residual(*nets.fine, nets.fine_margin);
    const auto order = order_of(r, fine);
    const bool ok = r <= tol && order_ok(r, order, min_order);
    ojson j{{"check", "gauss"},
            {"grid", grid_shape(nets.coarse)},
            {"residual", r},
            {"order", order_json(order)},
            {"fine_residual", fine ? ojson(*fine) : ojson(nullptr)},
            {"tolerance", tol},
            {"min_order", min_order},
            {"pass", ok}};
    return {j, ok ? ExitCode::pass : ExitCode::check_failed};
}

struct RiccatiFlags {
    double kappa = 1.0;
    double rho_max = 0.5;
    double step = 1e-3;
    double tol = 1e-8;
};

Report riccati(const RiccatiFlags& f)
{
    require_positive(f.rho_max, "--rho-max");
    require_positive(f.step, "--step");
    require_positive(f.tol, "--tol");
    if (!std::isfinite(f.kappa)) throw UsageError("--kappa: must be finite");
    const auto intervals = static_cast<std::size_t>(std::llround(f.rho_max / f.step));
    if (intervals < 4) throw UsageError("--step: must be at most rho_max / 4");
    const auto rho = Grid1D::spanning(0.0, f.rho_max, intervals + 1);
    const auto k1 = riccati_flow(f.kappa, rho);
    Table t{{"rho", "k1_numeric", "k1_closed_form", "abs_err"}, {}};
    double worst = 0.0;
    for (std::size_t i = 0; i < rho.n; ++i) {
        const double exact = f.kappa / (1.0 + rho[i] * f.kappa);
        const double err = std::abs(k1[i] - exact);
        worst = std::max(worst, err);
        t.rows.push_back({rho[i], k1[i], exact, err});
    }
    return {t, worst <= f.tol ? ExitCode::pass : ExitCode::check_failed};
}

json named_surface_json(const std::string& kind) { return {{"named", {{"kind", kind}}}}; }

Report surface(const Subcommand& s, const std::string& kind)
{
    const auto in = s.input(named_surface_json(kind));
    const auto patch = io::load_surface(in.source, s.level());
    const auto forms = fundamental_forms(patch);
    const auto v = dacosta_surface(forms.H, forms.K);
    Table t{{"u", "v", "H", "K", "V_dC"}, {}};
    for (std::size_t i = 0; i < patch.u.n; ++i)
        for (std::size_t j = 0; j < patch.v.n; ++j)
            t.rows.push_back({patch.u[i], patch.v[j], forms.H(i, j), forms.K(i, j), v(i, j)});
    return {t};
}

struct HolonomyFlags {
    std::string kind;
    std::optional<double> u0, u1, v0, v1;
    double tol = 2e-3;
};

Report holonomy(const Subcommand& s, const HolonomyFlags& f)
{
    require_positive(f.tol, "--tol");
    // Default: the spherical cap of colatitude pi / 3.
    const bool cap = f.kind.empty() && !s.has_input();
    const json fallback =
        cap ? json{{"named",
                    {{"kind", "sphere"},
                     {"params", {{"theta0", 0.0}, {"theta1", pi / 2}, {"ntheta", 193}, {"nphi", 128}}}}}}
            : named_surface_json(f.kind.empty() ? "sphere" : f.kind);
    const auto in = s.input(fallback);
    const auto patch = io::load_surface(in.source, s.level());
    CoordinateRectangle rect{patch.u.start, patch.u.start + patch.u.length(), patch.v.start,
                             patch.v.start + patch.v.length()};
    if (cap) rect.u1 = pi / 3;
    if (f.u0) rect.u0 = *f.u0;
    if (f.u1) rect.u1 = *f.u1;
    if (f.v0) rect.v0 = *f.v0;
    if (f.v1) rect.v1 = *f.v1;
    const auto h = holonomy_check(patch, rect);
    const bool ok = h.mismatch <= f.tol;
    ojson j{{"loop_integral", h.loop_integral},
            {"area_integral", h.area_integral},
            {"mismatch", h.mismatch},
            {"half_holonomy_factor", h.half_holonomy_factor},
            {"rectangle", {{"u0", rect.u0}, {"u1", rect.u1}, {"v0", rect.v0}, {"v1", rect.v1}}},
            {"tolerance", f.tol},
            {"pass", ok}};
    return {j, ok ? ExitCode::pass : ExitCode::check_failed};
}

Report estimate(double radius, const std::string& mass)
{
    require_positive(radius, "--radius");
    double kg = 0.0;
    if (mass == "electron") {
        kg = codata::electron_mass;
    } else {
        std::size_t used = 0;
        try {
            kg = std::stod(mass, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != mass.size()) throw UsageError("--mass: expected 'electron' or a mass in kg (got '" + mass + "')");
        require_positive(kg, "--mass");
    }
    const auto e = energy_scale(radius, kg);
    return {ojson{{"R_m", e.radius_m}, {"mass_kg", e.mass_kg}, {"E_J", e.joules}, {"E_meV", e.mev}}};
}

Report verify_all(const Subcommand& s, std::vector<int> ids)
{
    const auto preset = *checks::parse_preset(s.common.preset);
    const bool all = ids.empty();
    if (all)
        for (int i = 1; i <= 12; ++i) ids.push_back(i);
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());

    const auto t0 = std::chrono::steady_clock::now();
    std::vector<checks::CheckReport> reports;
    for (int id : ids) reports.push_back(checks::run_criterion(id, preset));
    const double total = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (all) reports.push_back(checks::suite_report(reports, total));

    ojson mapping = ojson::array();
    for (const auto& c : checks::criteria())
        mapping.push_back({{"id", std::to_string(c.id)}, {"title", std::string(c.title)}});
    const bool ok = std::all_of(reports.begin(), reports.end(), [](const auto& r) { return r.pass; });
    ojson j{{"preset", s.common.preset},
            {"criteria", mapping},
            {"reports", json(reports)},
            {"wall_seconds", total},
            {"pass", ok}};
    return {j, ok ? ExitCode::pass : ExitCode::check_failed};
}

void write_atomically(const fs::path& path, const std::string& text)
{
    const fs::path tmp = path.string() + ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) throw UsageError("--out: cannot write " + tmp.string());
        f << text;
        if (!f.flush()) throw UsageError("--out: cannot write " + tmp.string());
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) throw UsageError("--out: cannot move report to " + path.string() + ": " + ec.message());
}

void emit(const Subcommand& s, const Report& r, std::ostream& out)
{
    Format format = s.tabular ? Format::csv : Format::json;
    if (s.common.format == "json") format = Format::json;
    if (s.common.format == "csv") {
        if (!s.tabular) throw UsageError("--format: csv output is not available for " + s.app->get_name());
        format = Format::csv;
    }
    std::string text;
    if (const auto* t = std::get_if<Table>(&r.body))
        text = format == Format::csv ? csv(*t) : ojson{{"columns", t->columns}, {"rows", t->rows}}.dump(2) + "\n";
    else
        text = std::get<ojson>(r.body).dump(2) + "\n";

    if (s.common.out.empty()) {
        out << text;
        return;
    }
    const fs::path dir = s.common.out;
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (!fs::is_directory(dir)) throw UsageError("--out: not a directory: " + dir.string());
    write_atomically(dir / (s.app->get_name() + (format == Format::csv ? ".csv" : ".json")), text);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Moving-frame geometry and curvature-potential checks", "movframe"};
    app.require_subcommand(1);

    std::vector<std::unique_ptr<Subcommand>> subs;
    const auto add = [&](const std::string& name, const std::string& description, bool tabular,
                         const std::string& input_key) -> Subcommand& {
        auto s = std::make_unique<Subcommand>();
        s->app = app.add_subcommand(name, description);
        s->tabular = tabular;
        s->input_key = input_key;
        s->app->add_option("--config", s->common.config, "JSON file with flag values and input objects")
            ->check(CLI::ExistingFile);
        s->app->add_option("--out", s->common.out, "directory for the report file (default: stdout)");
        s->app->add_option("--format", s->common.format, tabular ? "csv (default) or json" : "json")
            ->check(CLI::IsMember({"json", "csv"}));
        s->app->add_option("--preset", s->common.preset, "desk or fine (halves every generated grid spacing)")
            ->check(CLI::IsMember({"desk", "fine"}))
            ->capture_default_str();
        if (!input_key.empty())
            s->app->add_option("--input", s->common.input, "JSON file with the " + input_key)->check(CLI::ExistingFile);
        subs.push_back(std::move(s));
        return *subs.back();
    };

    ProfileFlags potential_flags, spectrum_profile{2.0, 12.0, 2048}, transport_profile{2.0, 12.0, 2048};
    SpectrumFlags spectrum_flags;
    double transport_tol = 1e-4;
    DiracFlags dirac_flags;
    double gauss_tol = 5e-3, gauss_min_order = 1.8;
    RiccatiFlags riccati_flags;
    std::string surface_kind = "sphere";
    HolonomyFlags holonomy_flags;
    double radius = 1e-8;
    std::string mass = "electron";
    std::vector<int> criteria_ids;

    {
        auto& s = add("potential", "curvature and partner potentials along a profile (CSV)", true, "profile");
        potential_flags.add(s);
        s.exec = [&](Subcommand& c) { return potential(c, potential_flags); };
    }
    {
        auto& s = add("susy-spectrum", "partner spectra and their pairing", false, "profile");
        spectrum_profile.add(s);
        s.param("--count", spectrum_flags.count, "lowest eigenvalues of the minus partner");
        s.param("--floor", spectrum_flags.floor, "levels at or below this value count as near-zero");
        s.param("--tol", spectrum_flags.tol, "pairing tolerance");
        s.exec = [&](Subcommand& c) { return susy_spectrum(c, spectrum_profile, spectrum_flags); };
    }
    {
        auto& s = add("transport", "ground state by parallel transport (CSV)", true, "profile");
        transport_profile.add(s);
        s.param("--tol", transport_tol, "bound on the annihilation residual");
        s.exec = [&](Subcommand& c) { return transport(c, transport_profile, transport_tol); };
    }
    {
        auto& s = add("dirac-check", "scalar Dirac identity, commutator and cancellation on a net", false, "net");
        s.param("--identity-tol", dirac_flags.identity_tol, "bound on the identity residual");
        s.param("--commutator-tol", dirac_flags.commutator_tol, "bound on the commutator residual");
        s.param("--min-order", dirac_flags.min_order, "minimum convergence order under refinement");
        s.exec = [&](Subcommand& c) { return dirac_check(c, dirac_flags); };
    }
    {
        auto& s = add("gauss-check", "Gauss compatibility of the connection coefficients", false, "net");
        s.param("--tol", gauss_tol, "bound on the residual");
        s.param("--min-order", gauss_min_order, "minimum convergence order under refinement");
        s.exec = [&](Subcommand& c) { return gauss_check(c, gauss_tol, gauss_min_order); };
    }
    {
        auto& s = add("riccati", "transverse flow of the longitudinal curvature (CSV)", true, "");
        s.param("--kappa", riccati_flags.kappa, "curvature at rho = 0");
        s.param("--rho-max", riccati_flags.rho_max, "end of the transverse interval");
        s.param("--step", riccati_flags.step, "integration step");
        s.param("--tol", riccati_flags.tol, "bound on the error against the closed form");
        s.exec = [&](Subcommand&) { return riccati(riccati_flags); };
    }
    {
        auto& s = add("surface", "mean and Gaussian curvature and the surface potential (CSV)", true, "surface");
        s.param("--kind", surface_kind, "named surface with default parameters")
            ->check(CLI::IsMember({"plane", "cylinder", "cone", "sphere", "torus", "graph"}));
        s.exec = [&](Subcommand& c) { return surface(c, surface_kind); };
    }
    {
        auto& s = add("holonomy", "loop integral of the connection form against the enclosed curvature", false,
                      "surface");
        s.param("--kind", holonomy_flags.kind, "named surface with default parameters")
            ->check(CLI::IsMember({"plane", "cylinder", "cone", "sphere", "torus", "graph"}));
        s.param("--u0", holonomy_flags.u0, "rectangle corner");
        s.param("--u1", holonomy_flags.u1, "rectangle corner");
        s.param("--v0", holonomy_flags.v0, "rectangle corner");
        s.param("--v1", holonomy_flags.v1, "rectangle corner");
        s.param("--tol", holonomy_flags.tol, "bound on the mismatch");
        s.exec = [&](Subcommand& c) { return holonomy(c, holonomy_flags); };
    }
    {
        auto& s = add("estimate", "energy scale of the curvature potential for a tube radius", false, "");
        s.param("--radius", radius, "radius in metres");
        s.param("--mass", mass, "'electron' or a mass in kg");
        s.exec = [&](Subcommand&) { return estimate(radius, mass); };
    }
    {
        auto& s = add("verify-all", "run every acceptance check", false, "");
        s.app->add_option("--criteria", criteria_ids, "comma-separated subset of criteria 1-12")
            ->delimiter(',')
            ->check(CLI::Range(1, 12));
        s.exec = [&](Subcommand& c) { return verify_all(c, criteria_ids); };
    }

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return ExitCode::pass;
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            out << e.what() << '\n';
            return ExitCode::pass;
        }
        err << "error: " << e.what() << "\nrun with --help for usage\n";
        return ExitCode::usage_error;
    }

    Subcommand* chosen = nullptr;
    for (auto& s : subs)
        if (s->app->parsed()) chosen = s.get();

    try {
        chosen->load_config();
        const Report r = chosen->exec(*chosen);
        emit(*chosen, r, out);
        return r.code;
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
        return ExitCode::usage_error;
    } catch (const ConvergenceFailure& e) {
        err << "error: " << e.what() << '\n';
        return ExitCode::check_failed;
    } catch (const NonSymmetricOperator& e) {
        err << "error: " << e.what() << '\n';
        return ExitCode::check_failed;
    } catch (const Error& e) {
        // Malformed or geometrically unusable input.
        err << "input error: " << e.what() << '\n';
        return ExitCode::usage_error;
    }
}

}  // namespace movframe::cli
