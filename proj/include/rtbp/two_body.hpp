#pragma once
#include "rtbp/lambert_w.hpp"
#include "rtbp/scenario.hpp"

namespace rtbp {

/// Everything the closed-form evaluators need, computed once per scenario.
/// The separation of the primaries follows
///     r(t) = -kk * W(c4 * exp(c5 t)),
/// with W evaluated on `branch`; r1/r2 are the exact double time integrals
/// of rdd1 = -G m2 / r(t)^2 and rdd2 = -G m1 / r(t)^2, and the shared angle
/// increment is the exact antiderivative of thetadot = h_ang / r(t)^2.
struct DerivedConstants {
    double A = 0.0;     // m^3/s^2, 2 G (m1 + m2)
    double B = 0.0;     // m^2/s^2, rdot_o^2 - A / r_o, required > 0
    double kk = 0.0;    // m, A / (2 B)
    double c1 = 0.0;    // dimensionless, -(r_o/kk) exp(-r_o/kk)
    double c2 = 0.0;    // 1/s, sigma * 2 B sqrt(B) / A
    double c4 = 0.0;    // dimensionless, c1 exp(c2 t0)
    double c5 = 0.0;    // 1/s, -c2
    double k1 = 0.0;    // m/s^2, -4 B^2 G m2 / A^2
    double k2 = 0.0;    // m/s^2, -4 B^2 G m1 / A^2
    double ka = 0.0;    // m/s, linear coefficient of r1(t)
    double kb = 0.0;    // m, bracket coefficient of r1(t)
    double kc = 0.0;    // m/s, linear coefficient of r2(t)
    double kd = 0.0;    // m, bracket coefficient of r2(t)
    double h_ang = 0.0; // m^2 rad/s, r_o^2 thetadot0
    double sigma = 0.0; // +1 expanding, -1 contracting
    WBranch branch = WBranch::Principal;

    // cached pieces for the evaluators
    double r_o = 0.0;
    double rdot_o = 0.0;
    double t0 = 0.0;
    double t_end = 0.0;
    double log_c1 = 0.0;   // ln(-c1), evaluation goes through the log domain
    double w0 = 0.0;       // W at t0
    double p_w0 = 0.0;     // (1 + 2 w0) / w0^2
    double q_w0 = 0.0;     // -1/(2 w0^2) - 3/w0 + 2 ln(-w0)
    double c_theta = 0.0;  // h_ang / (2 c5 kk^2)
};

/// Constructs the scenario constants, picks the sign of c2 from sign(rdot_o)
/// and the W branch so that -kk W(c4 e^{c5 t0}) reproduces r_o (principal
/// preferred on a tie). Throws SolvabilityError when B <= 0 or rdot_o = 0,
/// DomainError when the Lambert argument leaves (-1/e, 0) inside the horizon.
DerivedConstants derive_constants(const ScenarioConfig& cfg);

/// W(c4 e^{c5 t}), the Lambert kernel shared by every evaluator.
double w_of_t(const DerivedConstants& dc, double t);

/// Separation of the primaries at t.
double r_of_t(const DerivedConstants& dc, double t);

/// d r / d t, analytic chain rule: -kk c5 w / (1 + w).
double r_dot_of_t(const DerivedConstants& dc, double t);

/// Radii of the individual primaries (exact double integrals of the
/// reduced radial equations). Throws ApproximationBreakdown if the closed
/// form drives a radius nonpositive.
double r1_of_t(const DerivedConstants& dc, const ScenarioConfig& cfg, double t);
double r2_of_t(const DerivedConstants& dc, const ScenarioConfig& cfg, double t);

/// Shared angular rate h_ang / r(t)^2 and the integrated angles.
double theta_dot_of_t(const DerivedConstants& dc, double t);
double theta1_of_t(const DerivedConstants& dc, const ScenarioConfig& cfg, double t);
double theta2_of_t(const DerivedConstants& dc, const ScenarioConfig& cfg, double t);

/// Conic-section diagnostic of the exact relative two-body orbit,
/// r(theta) = 1 / (C cos(theta + phi) + p_inv).
struct ConicConstants {
    double C = 0.0;           // 1/m
    double phi = 0.0;         // rad
    double p_inv = 0.0;       // 1/m, G (m1 + m2) / h^2
    double h_two_body = 0.0;  // m^2 rad/s
};

/// Fits C and phi from the initial conditions (r_o, rdot_o, theta2o,
/// thetadot0). Throws DegenerateOrbitError when thetadot0 = 0.
ConicConstants fit_conic_constants(const ScenarioConfig& cfg);

/// Evaluates the conic radius; throws SingularityError when the
/// denominator is <= 0.
double conic_radius(const ConicConstants& cc, double theta);

/// Outcome of the approximation-validity gate.
struct ValidityReport {
    bool b_positive = false;
    bool theta_rate_ok = false;   // |thetadot(t)| < 1 rad/s over the horizon
    bool radius_ok = false;       // r(t) > A/|B| over the horizon
    double binomial_margin = 0.0; // max over horizon of A / (B r(t))
    bool overall = false;
};

/// Samples r(t) at >= 1000 points plus both endpoints and evaluates the
/// validity conditions.
ValidityReport check_validity(const ScenarioConfig& cfg, const DerivedConstants& dc);

} // namespace rtbp
