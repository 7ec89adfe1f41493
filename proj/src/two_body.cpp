#include "rtbp/two_body.hpp"
#include "rtbp/errors.hpp"

#include <cmath>
#include <string>

namespace rtbp {

namespace {

// bracket functions of the Lambert value
double p_of(double w) { return (1.0 + 2.0 * w) / (w * w); }
double q_of(double w) { return -0.5 / (w * w) - 3.0 / w + 2.0 * std::log(-w); }

// exponent of the Lambert argument magnitude: arg(t) = -exp(e(t));
// the argument stays in (-1/e, 0) iff e(t) < -1 and exp does not underflow.
double arg_exponent(const DerivedConstants& dc, double t) {
    return dc.log_c1 + dc.c5 * (t - dc.t0);
}

void check_arg_exponent(double e, double t) {
    if (!(e < -1.0))
        throw DomainError("lambert argument reached the branch point -1/e at t = " +
                          std::to_string(t));
    if (std::exp(e) == 0.0)
        throw DomainError("lambert argument underflowed to 0 at t = " + std::to_string(t) +
                          "; r_o/kk is too large for double precision");
}

} // namespace

DerivedConstants derive_constants(const ScenarioConfig& cfg) {
    validate(cfg);

    DerivedConstants dc;
    dc.t0 = cfg.t0;
    dc.t_end = cfg.t_end;
    dc.r_o = cfg.r_o();
    dc.rdot_o = cfg.rdot_o();
    dc.A = 2.0 * cfg.G * cfg.total_primary_mass();
    dc.B = dc.rdot_o * dc.rdot_o - dc.A / dc.r_o;
    if (!(dc.B > 0.0))
        throw SolvabilityError("B = rdot_o^2 - 2 G (m1+m2)/r_o = " + std::to_string(dc.B) +
                               " <= 0; the method requires B > 0 (escaping radial motion)");
    if (dc.rdot_o == 0.0)
        throw SolvabilityError("rdot_o = 0: the sign of c2 is undetermined");
    dc.sigma = dc.rdot_o > 0.0 ? 1.0 : -1.0;

    double sqrtB = std::sqrt(dc.B);
    dc.kk = dc.A / (2.0 * dc.B);
    double y0 = dc.r_o / dc.kk;
    if (std::abs(y0 - 1.0) < 1e-6)
        throw DomainError("initial separation sits at the Lambert branch point (r_o = A/2B)");

    dc.c2 = dc.sigma * 2.0 * dc.B * sqrtB / dc.A;
    dc.c5 = -dc.c2;
    dc.log_c1 = std::log(y0) - y0;
    dc.c1 = -std::exp(dc.log_c1);
    dc.c4 = dc.c1 * std::exp(dc.c2 * cfg.t0);

    check_arg_exponent(arg_exponent(dc, cfg.t0), cfg.t0);
    check_arg_exponent(arg_exponent(dc, cfg.t_end), cfg.t_end);

    // Branch selection: the initial condition is the only non-arbitrary
    // selector; principal wins a tie.
    bool found = false;
    for (WBranch br : {WBranch::Principal, WBranch::Lower}) {
        if (br == WBranch::Lower && !(dc.c1 < 0.0)) continue;
        double w = w_eval(br, dc.c1).value;
        double r_check = -dc.kk * w;
        if (std::abs(r_check - dc.r_o) <= 1e-9 * dc.r_o) {
            dc.branch = br;
            dc.w0 = w;
            found = true;
            break;
        }
    }
    if (!found)
        throw SolvabilityError("no lambert branch reproduces r_o at t0");

    dc.h_ang = dc.r_o * dc.r_o * cfg.thetadot0;
    dc.k1 = -4.0 * dc.B * dc.B * cfg.G * cfg.m2 / (dc.A * dc.A);
    dc.k2 = -4.0 * dc.B * dc.B * cfg.G * cfg.m1 / (dc.A * dc.A);
    dc.p_w0 = p_of(dc.w0);
    dc.q_w0 = q_of(dc.w0);
    dc.ka = cfg.rdot1o + dc.k1 / (2.0 * dc.c5) * dc.p_w0;
    dc.kc = cfg.rdot2o + dc.k2 / (2.0 * dc.c5) * dc.p_w0;
    dc.kb = -dc.k1 / (2.0 * dc.c5 * dc.c5);
    dc.kd = -dc.k2 / (2.0 * dc.c5 * dc.c5);
    dc.c_theta = dc.h_ang / (2.0 * dc.c5 * dc.kk * dc.kk);
    return dc;
}

double w_of_t(const DerivedConstants& dc, double t) {
    double e = arg_exponent(dc, t);
    check_arg_exponent(e, t);
    return w_eval(dc.branch, -std::exp(e)).value;
}

double r_of_t(const DerivedConstants& dc, double t) { return -dc.kk * w_of_t(dc, t); }

double r_dot_of_t(const DerivedConstants& dc, double t) {
    double w = w_of_t(dc, t);
    return -dc.kk * dc.c5 * w / (1.0 + w);
}

double r1_of_t(const DerivedConstants& dc, const ScenarioConfig& cfg, double t) {
    double w = w_of_t(dc, t);
    double r1 = cfg.r1o + dc.ka * (t - dc.t0) + dc.kb * (q_of(w) - dc.q_w0);
    if (!(r1 > 0.0))
        throw ApproximationBreakdown("closed form drove r1 nonpositive at t = " +
                                     std::to_string(t));
    return r1;
}

double r2_of_t(const DerivedConstants& dc, const ScenarioConfig& cfg, double t) {
    double w = w_of_t(dc, t);
    double r2 = cfg.r2o + dc.kc * (t - dc.t0) + dc.kd * (q_of(w) - dc.q_w0);
    if (!(r2 > 0.0))
        throw ApproximationBreakdown("closed form drove r2 nonpositive at t = " +
                                     std::to_string(t));
    return r2;
}

double theta_dot_of_t(const DerivedConstants& dc, double t) {
    double r = r_of_t(dc, t);
    return dc.h_ang / (r * r);
}

double theta1_of_t(const DerivedConstants& dc, const ScenarioConfig& cfg, double t) {
    return cfg.theta1o + dc.c_theta * (dc.p_w0 - p_of(w_of_t(dc, t)));
}

double theta2_of_t(const DerivedConstants& dc, const ScenarioConfig& cfg, double t) {
    return cfg.theta2o + dc.c_theta * (dc.p_w0 - p_of(w_of_t(dc, t)));
}

ConicConstants fit_conic_constants(const ScenarioConfig& cfg) {
    validate(cfg);
    if (cfg.thetadot0 == 0.0)
        throw DegenerateOrbitError("thetadot0 = 0: h = 0 and the conic orbit "
                                   "equation is undefined");
    ConicConstants cc;
    double r_o = cfg.r_o();
    cc.h_two_body = r_o * r_o * cfg.thetadot0;
    cc.p_inv = cfg.G * cfg.total_primary_mass() / (cc.h_two_body * cc.h_two_body);
    // u(theta) = 1/r = C cos(theta + phi) + p_inv with theta the angle of the
    // relative orbit (= theta2); matching u and du/dtheta at t0:
    double a = 1.0 / r_o - cc.p_inv;               // C cos(theta2o + phi)
    double b = cfg.rdot_o() / cc.h_two_body;       // C sin(theta2o + phi)
    cc.C = std::hypot(a, b);
    cc.phi = cc.C > 0.0 ? std::atan2(b, a) - cfg.theta2o : 0.0;
    return cc;
}

double conic_radius(const ConicConstants& cc, double theta) {
    double denom = cc.C * std::cos(theta + cc.phi) + cc.p_inv;
    if (!(denom > 0.0))
        throw SingularityError("conic radius: denominator " + std::to_string(denom) +
                               " <= 0 (unbounded branch of the conic)");
    return 1.0 / denom;
}

ValidityReport check_validity(const ScenarioConfig& cfg, const DerivedConstants& dc) {
    ValidityReport rep;
    rep.b_positive = dc.B > 0.0;

    // r is monotone (sigma is constant), so the endpoints bound the margin;
    // the dense sweep is defense in depth.
    constexpr int kSamples = 1000;
    double r_min_limit = dc.A / std::abs(dc.B);
    rep.theta_rate_ok = true;
    rep.radius_ok = true;
    rep.binomial_margin = 0.0;
    for (int i = 0; i <= kSamples + 1; ++i) {
        double t = i <= kSamples
                       ? cfg.t0 + (cfg.t_end - cfg.t0) * (static_cast<double>(i) / kSamples)
                       : cfg.t_end;
        double r = r_of_t(dc, t);
        double margin = dc.A / (dc.B * r);
        rep.binomial_margin = std::max(rep.binomial_margin, margin);
        if (!(r > r_min_limit)) rep.radius_ok = false;
        if (!(std::abs(theta_dot_of_t(dc, t)) < 1.0)) rep.theta_rate_ok = false;
    }
    rep.overall = rep.b_positive && rep.theta_rate_ok && rep.radius_ok;
    return rep;
}

} // namespace rtbp
