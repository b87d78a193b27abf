#include "movframe/io.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "movframe/errors.hpp"

namespace movframe::io {

namespace {

std::string escape_key(std::string_view key)
{
    std::string out;
    for (char c : key) {
        if (c == '~') out += "~0";
        else if (c == '/') out += "~1";
        else out += c;
    }
    return out;
}

std::string type_name(const json& j) { return j.type_name(); }

Source child(const Source& src, std::string_view key)
{
    if (!src->is_object()) throw SchemaError(src.where() + ": expected an object, got " + type_name(*src));
    const auto it = src->find(key);
    if (it == src->end()) throw SchemaError(src.where(key) + ": missing required field");
    return {&*it, src.file, src.pointer + "/" + escape_key(key), src.base};
}

bool has(const Source& src, std::string_view key) { return src->is_object() && src->contains(key); }

Source element(const Source& src, std::size_t i)
{
    return {&(*src)[i], src.file, src.pointer + "/" + std::to_string(i), src.base};
}

double as_number(const Source& src)
{
    if (!src->is_number()) throw SchemaError(src.where() + ": expected a number, got " + type_name(*src));
    const double x = src->get<double>();
    if (!std::isfinite(x)) throw ConstraintError(src.where() + ": must be finite");
    return x;
}

double number(const Source& src, std::string_view key) { return as_number(child(src, key)); }

double number(const Source& src, std::string_view key, double fallback)
{
    return has(src, key) ? number(src, key) : fallback;
}

double positive(const Source& src, std::string_view key, double fallback)
{
    const double x = number(src, key, fallback);
    if (!(x > 0.0)) {
        std::ostringstream msg;
        msg << src.where(key) << ": must be > 0 (got " << x << ")";
        throw ConstraintError(msg.str());
    }
    return x;
}

std::size_t count(const Source& src, std::string_view key, std::size_t fallback, std::size_t min)
{
    std::size_t n = fallback;
    if (has(src, key)) {
        const Source c = child(src, key);
        if (!c->is_number_integer()) throw SchemaError(c.where() + ": expected an integer, got " + type_name(*c));
        if (c->get<long long>() < 0) throw ConstraintError(c.where() + ": must be >= " + std::to_string(min));
        n = c->get<std::size_t>();
    }
    if (n < min)
        throw ConstraintError(src.where(key) + ": must be >= " + std::to_string(min) + " (got " + std::to_string(n) + ")");
    return n;
}

bool boolean(const Source& src, std::string_view key, bool fallback)
{
    if (!has(src, key)) return fallback;
    const Source c = child(src, key);
    if (!c->is_boolean()) throw SchemaError(c.where() + ": expected a boolean, got " + type_name(*c));
    return c->get<bool>();
}

std::string string(const Source& src, std::string_view key)
{
    const Source c = child(src, key);
    if (!c->is_string()) throw SchemaError(c.where() + ": expected a string, got " + type_name(*c));
    return c->get<std::string>();
}

const Source& array(const Source& src)
{
    if (!src->is_array()) throw SchemaError(src.where() + ": expected an array, got " + type_name(*src));
    return src;
}

std::vector<double> numbers(const Source& src)
{
    array(src);
    std::vector<double> out;
    out.reserve(src->size());
    for (std::size_t i = 0; i < src->size(); ++i) out.push_back(as_number(element(src, i)));
    return out;
}

Vec3 point(const Source& src, bool allow_2d)
{
    const auto xs = numbers(src);
    if (xs.size() == 3) return {xs[0], xs[1], xs[2]};
    if (allow_2d && xs.size() == 2) return {xs[0], xs[1], 0.0};
    throw SchemaError(src.where() + ": expected " + std::string(allow_2d ? "2 or 3" : "3") + " coordinates, got " +
                      std::to_string(xs.size()));
}

/// Exactly one of the listed keys must be present.
std::string variant(const Source& src, std::initializer_list<std::string_view> keys)
{
    if (!src->is_object()) throw SchemaError(src.where() + ": expected an object, got " + type_name(*src));
    std::string found;
    std::string names;
    for (auto k : keys) {
        names += (names.empty() ? "" : ", ") + std::string(k);
        if (src->contains(k)) {
            if (!found.empty())
                throw SchemaError(src.where() + ": fields '" + found + "' and '" + std::string(k) +
                                  "' are mutually exclusive");
            found = k;
        }
    }
    if (found.empty()) throw SchemaError(src.where() + ": expected one of the fields " + names);
    return found;
}

struct Named {
    std::string kind;
    Source params;
};

const json& empty_object()
{
    static const json e = json::object();
    return e;
}

Named named(const Source& src)
{
    const Source n = child(src, "named");
    Named out{string(n, "kind"), {&empty_object(), n.file, n.pointer + "/params", n.base}};
    if (has(n, "params")) {
        out.params = child(n, "params");
        if (!out.params->is_object())
            throw SchemaError(out.params.where() + ": expected an object, got " + type_name(*out.params));
    }
    return out;
}

[[noreturn]] void unknown_kind(const Source& src, const std::string& kind, std::string_view allowed)
{
    throw SchemaError(src.where("named") + "/kind: unknown kind '" + kind + "' (expected one of " +
                      std::string(allowed) + ")");
}

void no_refinement(const Source& src, Refinement level)
{
    if (level > 0) throw ConstraintError(src.where() + ": sampled input cannot be refined");
}

/// Re-raise library errors with the location of the input that caused them.
template <class F>
auto in_context(const Source& src, F&& f) -> decltype(f())
{
    const std::string at = src.where() + ": ";
    try {
        return f();
    } catch (const FocalPointInStrip& e) {
        throw FocalPointInStrip(at + e.what());
    } catch (const DegenerateCurve& e) {
        throw DegenerateCurve(at + e.what());
    } catch (const DegeneratePatch& e) {
        throw DegeneratePatch(at + e.what());
    } catch (const VanishingCurvature& e) {
        throw VanishingCurvature(at + e.what());
    } catch (const ParseError&) {
        throw;
    } catch (const SchemaError&) {
        throw;
    } catch (const ConstraintError& e) {
        // Errors from nested loaders already carry a location.
        const std::string what = e.what();
        if (what.rfind(src.file, 0) == 0) throw;
        throw ConstraintError(at + what);
    }
}

/// Value of a field that may hold an inline object or a file name.
template <class T, class Load>
T inline_or_file(const Source& src, Refinement level, Load&& load)
{
    if (src->is_string()) {
        const std::filesystem::path path = src.base / src->get<std::string>();
        const json j = read_json_file(path);
        return load(Source{&j, path.string(), "", path.parent_path()}, level);
    }
    return load(src, level);
}

}  // namespace

std::string Source::where() const { return file + ":" + (pointer.empty() ? "/" : pointer); }

std::string Source::where(std::string_view key) const { return file + ":" + pointer + "/" + escape_key(key); }

json read_json_file(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError(path.string() + ": cannot open file");
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
        return json::parse(buf.str());
    } catch (const json::parse_error& e) {
        throw ParseError(path.string() + ": invalid JSON at byte " + std::to_string(e.byte) + ": " + e.what());
    }
}

std::size_t refine_count(std::size_t n, Boundary boundary, Refinement level)
{
    for (Refinement k = 0; k < level; ++k) n = boundary == Boundary::periodic ? 2 * n : 2 * n - 1;
    return n;
}

Grid1D load_grid(const Source& src, Refinement level)
{
    const double a = number(src, "start");
    const double b = number(src, "end");
    if (!(b > a)) throw ConstraintError(src.where("end") + ": must be greater than start");
    const bool periodic = boolean(src, "periodic", false);
    const std::size_t n = count(src, "n", 0, periodic ? 3 : 2);
    if (periodic) return Grid1D::periodic(a, b, refine_count(n, Boundary::periodic, level));
    return Grid1D::spanning(a, b, refine_count(n, Boundary::open, level));
}

ArclengthCurve load_curve(const Source& src, Refinement level)
{
    const std::string form = variant(src, {"named", "points"});
    if (form == "points") {
        no_refinement(src, level);
        const Source pts = array(child(src, "points"));
        std::vector<Vec3> raw;
        bool planar = true;
        for (std::size_t i = 0; i < pts->size(); ++i) {
            raw.push_back(point(element(pts, i), true));
            planar = planar && raw.back().z() == 0.0;
        }
        const bool closed = boolean(src, "closed", false);
        const std::size_t n = count(src, "n", std::max<std::size_t>(raw.size(), 16), 4);
        if (closed && raw.size() >= 2) {
            const double gap = (raw.back() - raw.front()).norm();
            if (gap > 1e-9) {
                std::ostringstream msg;
                msg << pts.where() << ": closed curve endpoints differ by " << gap
                    << " (the last point must repeat the first)";
                throw ConstraintError(msg.str());
            }
        }
        return in_context(src, [&] { return resample_arclength(raw, n, closed, planar ? 2 : 3); });
    }

    const auto [kind, p] = named(src);
    const auto n = [&, &p = p](std::size_t fallback) {
        return refine_count(count(p, "n", fallback, 8), Boundary::open, level);
    };
    return in_context(src, [&, &p = p, &kind = kind]() -> ArclengthCurve {
        if (kind == "circle") return make_circle(positive(p, "radius", 1.0), n(257));
        if (kind == "ellipse") return make_ellipse(positive(p, "a", 2.0), positive(p, "b", 1.0), n(257));
        if (kind == "helix")
            return make_helix(positive(p, "a", 3.0), number(p, "b", 4.0), positive(p, "turns", 1.0), n(513));
        if (kind == "segment") {
            const Vec3 a = has(p, "from") ? point(child(p, "from"), true) : Vec3(0, 0, 0);
            const Vec3 b = has(p, "to") ? point(child(p, "to"), true) : Vec3(1, 0, 0);
            return make_segment(a, b, n(65));
        }
        if (kind == "tanh_bump") {
            const double s0 = number(p, "s0", -8.0), s1 = number(p, "s1", 8.0);
            if (!(s1 > s0)) throw ConstraintError(p.where("s1") + ": must be greater than s0");
            return curve_from_curvature(tanh_profile(number(p, "amplitude", 2.0), s0, s1, n(257)));
        }
        unknown_kind(src, kind, "circle, ellipse, helix, segment, tanh_bump");
    });
}

CurvatureProfile load_profile(const Source& src, Refinement level)
{
    const std::string form = variant(src, {"named", "kappa", "curve"});
    if (form == "curve") {
        const auto curve = inline_or_file<ArclengthCurve>(child(src, "curve"), level, load_curve);
        return in_context(src, [&] {
            return curve.dimension == 2 ? curvature_planar(curve) : frenet_apparatus(curve).profile;
        });
    }
    if (form == "kappa") {
        no_refinement(src, level);
        CurvatureProfile out;
        out.kappa = numbers(child(src, "kappa"));
        if (has(src, "tau")) {
            out.tau = numbers(child(src, "tau"));
            if (out.tau->size() != out.kappa.size())
                throw ConstraintError(src.where("tau") + ": length " + std::to_string(out.tau->size()) +
                                      " differs from kappa length " + std::to_string(out.kappa.size()));
        }
        out.step = positive(src, "step", 1.0);
        out.start = number(src, "start", 0.0);
        out.boundary = boolean(src, "periodic", false) ? Boundary::periodic : Boundary::open;
        in_context(src, [&] { out.validate(); });
        return out;
    }

    const auto [kind, p] = named(src);
    return in_context(src, [&, &p = p, &kind = kind]() -> CurvatureProfile {
        const double s0 = number(p, "s0", kind == "tanh" ? -8.0 : 0.0);
        const double s1 = number(p, "s1", 8.0);
        if (!(s1 > s0)) throw ConstraintError(p.where("s1") + ": must be greater than s0");
        if (kind == "tanh")
            return tanh_profile(number(p, "amplitude", 2.0), s0, s1,
                                refine_count(count(p, "n", 257, 4), Boundary::open, level));
        if (kind == "constant") {
            const Boundary b = boolean(p, "periodic", false) ? Boundary::periodic : Boundary::open;
            auto out = constant_profile(number(p, "kappa", 1.0), s0, s1, refine_count(count(p, "n", 257, 4), b, level), b);
            if (has(p, "tau")) out.tau = std::vector<double>(out.size(), number(p, "tau"));
            return out;
        }
        unknown_kind(src, kind, "tanh, constant");
    });
}

namespace {

Field2D coefficient(const Source& src, std::string_view key, const Grid1D& u, const Grid1D& v, Refinement level)
{
    const Source c = child(src, key);
    if (c->is_number()) return Field2D(u.n, v.n, as_number(c));
    no_refinement(c, level);
    array(c);
    if (c->size() != u.n)
        throw ConstraintError(c.where() + ": expected " + std::to_string(u.n) + " rows, got " +
                              std::to_string(c->size()));
    Field2D out(u.n, v.n);
    for (std::size_t i = 0; i < u.n; ++i) {
        const auto row = numbers(element(c, i));
        if (row.size() != v.n)
            throw ConstraintError(element(c, i).where() + ": expected " + std::to_string(v.n) + " values, got " +
                                  std::to_string(row.size()));
        for (std::size_t j = 0; j < v.n; ++j) {
            if (!(row[j] > 0.0)) {
                std::ostringstream msg;
                msg << element(c, i).where() << "/" << j << ": " << key << " must be > 0 (got " << row[j] << ")";
                throw ConstraintError(msg.str());
            }
            out(i, j) = row[j];
        }
    }
    return out;
}

}  // namespace

OrthogonalNet load_net(const Source& src, Refinement level)
{
    const std::string form = variant(src, {"fermi", "lame", "named"});
    if (form == "fermi") {
        const Source f = child(src, "fermi");
        const CurvatureProfile profile = *fermi_profile(src, level);
        const double rho_max = positive(f, "rho_max", 0.1);
        const std::size_t n_rho = refine_count(count(f, "n_rho", 64, 3), Boundary::open, level);
        return in_context(f, [&] { return fermi_net(profile, rho_max, n_rho); });
    }
    if (form == "lame") {
        const Source l = child(src, "lame");
        const Grid1D u = load_grid(child(l, "u"), level), v = load_grid(child(l, "v"), level);
        OrthogonalNet net{u, v, coefficient(l, "h1", u, v, level), coefficient(l, "h2", u, v, level)};
        in_context(l, [&] { net.validate(); });
        return net;
    }
    const auto [kind, p] = named(src);
    const Grid1D u = load_grid(child(p, "u"), level), v = load_grid(child(p, "v"), level);
    return in_context(src, [&, &kind = kind]() -> OrthogonalNet {
        if (kind == "cartesian") return cartesian_net(u, v);
        if (kind == "polar") {
            if (!(u.start > 0.0)) throw ConstraintError(p.where("u") + "/start: radius must be > 0");
            return polar_net(u, v);
        }
        unknown_kind(src, kind, "cartesian, polar");
    });
}

std::optional<CurvatureProfile> fermi_profile(const Source& src, Refinement level)
{
    if (variant(src, {"fermi", "lame", "named"}) != "fermi") return std::nullopt;
    const Source f = child(src, "fermi");
    if (variant(f, {"curve", "profile"}) == "curve") {
        const auto curve = inline_or_file<ArclengthCurve>(child(f, "curve"), level, load_curve);
        return in_context(f, [&] { return curvature_planar(curve); });
    }
    return inline_or_file<CurvatureProfile>(child(f, "profile"), level, load_profile);
}

SurfacePatch load_surface(const Source& src, Refinement level)
{
    using std::numbers::pi;
    const std::string form = variant(src, {"named", "points"});
    if (form == "points") {
        no_refinement(src, level);
        const Source g = child(src, "grid");
        const Grid1D u = load_grid(child(g, "u")), v = load_grid(child(g, "v"));
        const Source pts = array(child(src, "points"));
        if (pts->size() != u.n * v.n)
            throw ConstraintError(pts.where() + ": expected " + std::to_string(u.n * v.n) + " points (u.n * v.n), got " +
                                  std::to_string(pts->size()));
        SurfacePatch patch{u, v, {}};
        patch.points.reserve(pts->size());
        for (std::size_t k = 0; k < pts->size(); ++k) patch.points.push_back(point(element(pts, k), false));
        return patch;
    }

    const auto [kind, p] = named(src);
    const auto open_n = [&, &p = p](std::string_view key, std::size_t fallback) {
        return refine_count(count(p, key, fallback, 8), Boundary::open, level);
    };
    const auto periodic_n = [&, &p = p](std::string_view key, std::size_t fallback) {
        return refine_count(count(p, key, fallback, 8), Boundary::periodic, level);
    };
    const auto ordered = [&, &p = p](std::string_view lo, double lo_default, std::string_view hi, double hi_default) {
        const double a = number(p, lo, lo_default), b = number(p, hi, hi_default);
        if (!(b > a)) throw ConstraintError(p.where(hi) + ": must be greater than " + std::string(lo));
        return std::pair{a, b};
    };
    return in_context(src, [&, &p = p, &kind = kind]() -> SurfacePatch {
        if (kind == "plane") {
            const auto [x0, x1] = ordered("x0", -1, "x1", 1);
            const auto [y0, y1] = ordered("y0", -1, "y1", 1);
            return plane_patch(x0, x1, y0, y1, open_n("nx", 33), open_n("ny", 33));
        }
        if (kind == "cylinder") {
            const auto [z0, z1] = ordered("z0", 0, "z1", 2);
            return cylinder_patch(positive(p, "radius", 1.0), z0, z1, periodic_n("nt", 512), open_n("nz", 16));
        }
        if (kind == "cone") {
            const double alpha = positive(p, "half_angle", 0.5);
            if (!(alpha < pi / 2)) throw ConstraintError(p.where("half_angle") + ": must be < pi/2");
            const auto [r0, r1] = ordered("r0", 0.5, "r1", 2);
            if (!(r0 > 0)) throw ConstraintError(p.where("r0") + ": must be > 0");
            return cone_patch(alpha, r0, r1, open_n("nr", 48), periodic_n("nt", 128));
        }
        if (kind == "sphere") {
            const auto [t0, t1] = ordered("theta0", pi / 8, "theta1", 7 * pi / 8);
            if (t0 < 0 || t1 > pi) throw ConstraintError(p.where("theta1") + ": colatitudes must lie in [0, pi]");
            return sphere_patch(positive(p, "radius", 1.0), t0, t1, open_n("ntheta", 128), periodic_n("nphi", 128));
        }
        if (kind == "torus") {
            const double major = positive(p, "major", 3.0), minor = positive(p, "minor", 1.0);
            if (!(minor < major)) throw ConstraintError(p.where("minor") + ": must be < major");
            return torus_patch(major, minor, periodic_n("nu", 64), periodic_n("nv", 64));
        }
        if (kind == "graph") {
            // z = a r^p
            const double a = number(p, "a", 0.5), power = number(p, "p", 2.0);
            const auto [r0, r1] = ordered("rho0", 0.2, "rho1", 1.5);
            if (!(r0 > 0)) throw ConstraintError(p.where("rho0") + ": must be > 0");
            return graph_patch([a, power](double r) { return a * std::pow(r, power); }, r0, r1, open_n("nrho", 64),
                               periodic_n("nt", 64));
        }
        unknown_kind(src, kind, "plane, cylinder, cone, sphere, torus, graph");
    });
}

namespace {

template <class T, class Load>
T from_file(const std::filesystem::path& path, Load&& load)
{
    const json j = read_json_file(path);
    return load(Source{&j, path.string(), "", path.parent_path()}, 0);
}

}  // namespace

ArclengthCurve load_curve_file(const std::filesystem::path& path) { return from_file<ArclengthCurve>(path, load_curve); }
CurvatureProfile load_profile_file(const std::filesystem::path& path)
{
    return from_file<CurvatureProfile>(path, load_profile);
}
OrthogonalNet load_net_file(const std::filesystem::path& path) { return from_file<OrthogonalNet>(path, load_net); }
SurfacePatch load_surface_file(const std::filesystem::path& path)
{
    return from_file<SurfacePatch>(path, load_surface);
}

}  // namespace movframe::io
