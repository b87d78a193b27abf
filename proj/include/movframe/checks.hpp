#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace movframe::checks {

using json = nlohmann::json;

/// `at_most`: pass when value <= bound; `at_least`: pass when value >= bound.
enum class Relation { at_most, at_least };

struct Measurement {
    std::string name;
    double value = 0.0;
    double bound = 0.0;
    Relation relation = Relation::at_most;
    bool pass = false;
};

Measurement measure(std::string name, double value, double bound, Relation relation = Relation::at_most);

/// Runtime budget for part of a check.
struct Timing {
    std::string name;
    double limit_seconds = 0.0;
    double wall_seconds = 0.0;
    bool pass = false;
};

struct CheckReport {
    std::string id;
    std::string title;
    json inputs = json::object();
    std::vector<Measurement> measurements;
    json values = json::object();  ///< informational numbers that do not gate `pass`
    std::optional<double> order;   ///< measured convergence order, where one applies
    std::vector<Timing> timings;
    double wall_seconds = 0.0;
    bool pass = false;

    /// Recomputes `pass` from the measurements and timings.
    void finalize();
};

void to_json(json& j, const Measurement& m);
void from_json(const json& j, Measurement& m);
void to_json(json& j, const Timing& t);
void from_json(const json& j, Timing& t);
void to_json(json& j, const CheckReport& r);
void from_json(const json& j, CheckReport& r);

/// `desk` runs the acceptance grids; `fine` halves every spacing once.
enum class Preset { desk, fine };

std::string_view to_string(Preset p);
std::optional<Preset> parse_preset(std::string_view name);

struct Criterion {
    int id = 0;
    std::string_view title;
};

/// Acceptance criteria 1..13.
std::span<const Criterion> criteria();

/// Runs criterion 1..12. Throws std::out_of_range for other ids.
CheckReport run_criterion(int id, Preset preset);

/// Criterion 13: every other report passes and the suite meets its time budget.
CheckReport suite_report(std::span<const CheckReport> reports, double total_wall_seconds);

/// Replaces every "wall_seconds" member with 0, for comparing reports.
json without_wall_time(json j);

}  // namespace movframe::checks
