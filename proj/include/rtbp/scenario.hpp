#pragma once
#include <string>
#include <vector>

namespace rtbp {

/// One restricted-three-body scenario in SI units. The primaries start on
/// opposite rays (theta2o = theta1o + pi) and share the angular rate
/// thetadot0; radii are measured from the center of mass.
struct ScenarioConfig {
    double G = 6.674e-11;  // m^3 kg^-1 s^-2
    double m1 = 0.0;       // kg
    double m2 = 0.0;       // kg
    double m3 = 0.0;       // kg
    double r1o = 0.0;      // m, initial radius of body 1
    double r2o = 0.0;      // m, initial radius of body 2
    double rdot1o = 0.0;   // m/s
    double rdot2o = 0.0;   // m/s
    double theta1o = 0.0;  // rad
    double theta2o = 0.0;  // rad, must equal theta1o + pi
    double thetadot0 = 0.0;  // rad/s, shared initial angular rate
    double t0 = 0.0;       // s
    double t_end = 0.0;    // s
    double dt_out = 0.0;   // s, output sampling interval

    double total_primary_mass() const { return m1 + m2; }
    double r_o() const { return r1o + r2o; }
    double rdot_o() const { return rdot1o + rdot2o; }
};

/// Checks the config invariants. Throws ConfigError on violation; appends
/// non-fatal advisories (m3 not small against the primaries) to `warnings`
/// when the pointer is given.
void validate(const ScenarioConfig& cfg, std::vector<std::string>* warnings = nullptr);

} // namespace rtbp
