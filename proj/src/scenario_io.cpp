#include "rtbp/scenario_io.hpp"
#include "rtbp/errors.hpp"

#include <json.hpp>

#include <fstream>
#include <set>
#include <sstream>

namespace rtbp {

namespace {

using nlohmann::json;

double require_number(const json& obj, const std::string& section, const std::string& key) {
    if (!obj.contains(key))
        throw ConfigError("scenario file: missing required key " + section + "." + key);
    const json& v = obj.at(key);
    if (!v.is_number())
        throw ConfigError("scenario file: " + section + "." + key + " must be a number");
    return v.get<double>();
}

double optional_number(const json& obj, const std::string& section, const std::string& key,
                       double fallback) {
    if (!obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    if (!v.is_number())
        throw ConfigError("scenario file: " + section + "." + key + " must be a number");
    return v.get<double>();
}

void reject_unknown(const json& obj, const std::string& section,
                    const std::set<std::string>& known) {
    for (auto it = obj.begin(); it != obj.end(); ++it)
        if (!known.count(it.key()))
            throw ConfigError("scenario file: unknown key " + section + "." + it.key());
}

} // namespace

ScenarioFile parse_scenario_text(const std::string& text, const std::string& origin) {
    json doc;
    try {
        doc = json::parse(text, nullptr, true, /*ignore_comments=*/true);
    } catch (const json::exception& e) {
        throw ConfigError("scenario file " + origin + ": " + e.what());
    }
    if (!doc.is_object()) throw ConfigError("scenario file " + origin + ": not an object");
    reject_unknown(doc, "<root>", {"scenario", "integrator"});
    if (!doc.contains("scenario"))
        throw ConfigError("scenario file " + origin + ": missing \"scenario\" section");

    const json& sc = doc.at("scenario");
    if (!sc.is_object()) throw ConfigError("scenario file: \"scenario\" must be an object");
    reject_unknown(sc, "scenario",
                   {"G", "m1", "m2", "m3", "r1o", "r2o", "rdot1o", "rdot2o", "theta1o",
                    "theta2o", "thetadot0", "t0", "t_end", "dt_out"});

    ScenarioFile out;
    ScenarioConfig& c = out.scenario;
    c.G = optional_number(sc, "scenario", "G", 6.674e-11);
    c.m1 = require_number(sc, "scenario", "m1");
    c.m2 = require_number(sc, "scenario", "m2");
    c.m3 = require_number(sc, "scenario", "m3");
    c.r1o = require_number(sc, "scenario", "r1o");
    c.r2o = require_number(sc, "scenario", "r2o");
    c.rdot1o = require_number(sc, "scenario", "rdot1o");
    c.rdot2o = require_number(sc, "scenario", "rdot2o");
    c.theta1o = require_number(sc, "scenario", "theta1o");
    c.theta2o = require_number(sc, "scenario", "theta2o");
    c.thetadot0 = require_number(sc, "scenario", "thetadot0");
    c.t0 = require_number(sc, "scenario", "t0");
    c.t_end = require_number(sc, "scenario", "t_end");
    c.dt_out = require_number(sc, "scenario", "dt_out");
    validate(c);

    if (doc.contains("integrator")) {
        const json& ic = doc.at("integrator");
        if (!ic.is_object())
            throw ConfigError("scenario file: \"integrator\" must be an object");
        reject_unknown(ic, "integrator",
                       {"method", "dt", "rel_tol", "abs_tol", "max_steps", "min_separation"});
        oracle::IntegratorConfig& g = out.integrator;
        if (ic.contains("method")) {
            std::string m = ic.at("method").get<std::string>();
            if (m == "rk4")
                g.method = oracle::Method::RK4;
            else if (m == "rk45")
                g.method = oracle::Method::RK45;
            else
                throw ConfigError("scenario file: integrator.method must be rk4 or rk45");
        }
        g.dt = optional_number(ic, "integrator", "dt", g.dt);
        g.rel_tol = optional_number(ic, "integrator", "rel_tol", g.rel_tol);
        g.abs_tol = optional_number(ic, "integrator", "abs_tol", g.abs_tol);
        g.max_steps =
            static_cast<long>(optional_number(ic, "integrator", "max_steps",
                                              static_cast<double>(g.max_steps)));
        g.min_separation = optional_number(ic, "integrator", "min_separation", g.min_separation);
        if (!(g.rel_tol > 0.0) || !(g.abs_tol > 0.0))
            throw ConfigError("scenario file: integrator tolerances must be > 0");
        if (g.method == oracle::Method::RK4 && !(g.dt > 0.0))
            throw ConfigError("scenario file: integrator.dt must be > 0 for rk4");
        if (g.max_steps <= 0)
            throw ConfigError("scenario file: integrator.max_steps must be > 0");
        if (g.min_separation < 0.0)
            throw ConfigError("scenario file: integrator.min_separation must be >= 0");
    }
    return out;
}

ScenarioFile load_scenario_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("scenario file " + path + ": cannot open");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_scenario_text(ss.str(), path);
}

std::string scenario_schema_text() {
    return R"(Scenario document: JSON object with // and /* */ comments allowed.
All quantities are SI (kg, m, s, rad). Unknown keys are rejected.

{
  "scenario": {            // required
    "G": number,           // optional, m^3 kg^-1 s^-2, default 6.674e-11
    "m1": number,          // kg, > 0, primary 1
    "m2": number,          // kg, > 0, primary 2
    "m3": number,          // kg, > 0, small third body
    "r1o": number,         // m, > 0, initial radius of body 1 from the center of mass
    "r2o": number,         // m, > 0, initial radius of body 2
    "rdot1o": number,      // m/s, initial radial speed of body 1
    "rdot2o": number,      // m/s, initial radial speed of body 2
    "theta1o": number,     // rad, initial angle of body 1
    "theta2o": number,     // rad, must equal theta1o + pi within 1e-9
    "thetadot0": number,   // rad/s, shared initial angular rate
    "t0": number,          // s, initial time
    "t_end": number,       // s, horizon, > t0
    "dt_out": number       // s, output sampling interval, > 0
  },
  "integrator": {          // optional; defaults shown
    "method": "rk45",      // "rk45" (adaptive) or "rk4" (fixed step)
    "dt": 0.0,             // s, fixed step size, required > 0 for rk4
    "rel_tol": 1e-12,      // adaptive relative tolerance
    "abs_tol": 1e-6,       // m, adaptive absolute floor
    "max_steps": 20000000, // step budget
    "min_separation": 0.0  // m; 0 selects 1e-6 x initial minimum separation
  }
}

Solvability: the closed forms require B = (rdot1o+rdot2o)^2
- 2 G (m1+m2)/(r1o+r2o) > 0 (escaping radial motion). Validity additionally
requires |thetadot| < 1 rad/s and r > A/|B| along the horizon.
)";
}

} // namespace rtbp
