#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include <json.hpp>

#include "movframe/curves.hpp"
#include "movframe/nets.hpp"
#include "movframe/surfaces.hpp"

namespace movframe::io {

using json = nlohmann::json;

/// A JSON value together with its location, used for error messages of the
/// form "<file>:<pointer>: <constraint>". Nested file references are
/// resolved relative to `base`.
struct Source {
    const json* value = nullptr;
    std::string file;     ///< "<inline>" when not read from disk
    std::string pointer;  ///< JSON pointer of `value` inside `file`
    std::filesystem::path base;

    const json& operator*() const { return *value; }
    const json* operator->() const { return value; }
    std::string where() const;
    std::string where(std::string_view key) const;
};

/// Throws ParseError naming the file and byte offset.
json read_json_file(const std::filesystem::path& path);

/// Refinement level: each level halves the spacing of every generated grid.
/// Sampled inputs cannot be refined and throw ConstraintError for level > 0.
using Refinement = unsigned;

/// Node count after `level` halvings of the spacing.
std::size_t refine_count(std::size_t n, Boundary boundary, Refinement level);

/// {"start": a, "end": b, "n": n, "periodic": bool}. A periodic grid holds
/// n nodes on [a, b).
Grid1D load_grid(const Source& src, Refinement level = 0);

/// {"named": {"kind": "circle|ellipse|helix|tanh_bump|segment", "params": {...}}}
/// or {"points": [[x, y(, z)], ...], "closed": bool, "n": samples}.
ArclengthCurve load_curve(const Source& src, Refinement level = 0);

/// {"named": {"kind": "tanh|constant", "params": {...}}}, a sampled profile
/// {"kappa": [...], "tau": [...], "step": h, "start": s0, "periodic": bool},
/// or {"curve": <curve object or file name>}.
CurvatureProfile load_profile(const Source& src, Refinement level = 0);

/// {"fermi": {"curve" | "profile": ..., "rho_max": r, "n_rho": n}},
/// {"lame": {"u": grid, "v": grid, "h1": number | rows, "h2": number | rows}},
/// or {"named": {"kind": "cartesian|polar", "params": {"u": grid, "v": grid}}}.
OrthogonalNet load_net(const Source& src, Refinement level = 0);

/// Reference-curve profile of a {"fermi": ...} net; nullopt for other nets.
std::optional<CurvatureProfile> fermi_profile(const Source& src, Refinement level = 0);

/// {"named": {"kind": "plane|cylinder|cone|sphere|torus|graph", "params": {...}}}
/// or {"grid": {"u": grid, "v": grid}, "points": [[x, y, z], ...]} with u slow.
SurfacePatch load_surface(const Source& src, Refinement level = 0);

/// Convenience overloads reading the object from a file.
ArclengthCurve load_curve_file(const std::filesystem::path& path);
CurvatureProfile load_profile_file(const std::filesystem::path& path);
OrthogonalNet load_net_file(const std::filesystem::path& path);
SurfacePatch load_surface_file(const std::filesystem::path& path);

}  // namespace movframe::io
