// Runs the full check suite through the command-line tool and prints one
// PASS/FAIL line per criterion.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>

#include <sys/wait.h>
#include <unistd.h>

#include <json.hpp>

#include "movframe/checks.hpp"

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

std::string quote(const std::string& s)
{
    std::string out = "'";
    for (char c : s) out += c == '\'' ? std::string("'\\''") : std::string(1, c);
    return out + "'";
}

std::string failing_measurements(const movframe::checks::CheckReport& r)
{
    std::ostringstream s;
    for (const auto& m : r.measurements)
        if (!m.pass)
            s << " " << m.name << "=" << m.value << (m.relation == movframe::checks::Relation::at_most ? ">" : "<")
              << m.bound;
    for (const auto& t : r.timings)
        if (!t.pass) s << " " << t.name << "=" << t.wall_seconds << "s>" << t.limit_seconds << "s";
    return s.str();
}

}  // namespace

int main(int argc, char** argv)
{
    const std::string tool = argc > 1 ? argv[1] : MOVFRAME_TOOL;
    const std::string preset = argc > 2 ? argv[2] : "desk";
    const double limit_seconds = 90.0;

    const fs::path dir = fs::temp_directory_path() / ("movframe_acceptance_" + std::to_string(::getpid()));
    fs::create_directories(dir);
    const std::string command =
        quote(tool) + " verify-all --preset " + quote(preset) + " --out " + quote(dir.string()) + " 2>&1";

    const auto t0 = std::chrono::steady_clock::now();
    const int status = std::system(command.c_str());
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const int exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;

    json doc;
    try {
        std::ifstream in(dir / "verify-all.json");
        doc = json::parse(in);
    } catch (const std::exception& e) {
        std::cout << "FAIL  cannot read report: " << e.what() << "\n";
        fs::remove_all(dir);
        return 1;
    }
    fs::remove_all(dir);

    std::map<std::string, movframe::checks::CheckReport> reports;
    for (const auto& j : doc.at("reports")) {
        auto r = j.get<movframe::checks::CheckReport>();
        reports[r.id] = r;
    }

    bool all = true;
    for (const auto& c : movframe::checks::criteria()) {
        const std::string id = std::to_string(c.id);
        const auto it = reports.find(id);
        bool pass = it != reports.end() && it->second.pass;
        std::string detail = it == reports.end() ? " missing report" : failing_measurements(it->second);
        if (c.id == 13) {
            pass = pass && exit_code == 0 && seconds < limit_seconds;
            std::ostringstream s;
            s << " exit=" << exit_code << " wall=" << seconds << "s";
            detail += s.str();
        }
        all = all && pass;
        std::cout << (pass ? "PASS  " : "FAIL  ") << id << "  " << c.title;
        if (!detail.empty()) std::cout << "  [" << detail.substr(detail[0] == ' ' ? 1 : 0) << "]";
        std::cout << "\n";
    }
    std::cout << (all ? "all criteria pass" : "some criteria fail") << " (preset " << preset << ")\n";
    return all ? 0 : 1;
}
