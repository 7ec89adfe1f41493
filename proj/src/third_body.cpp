#include "rtbp/third_body.hpp"
#include "rtbp/errors.hpp"
#include "rtbp/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace rtbp {

namespace {

double p_of(double w) { return (1.0 + 2.0 * w) / (w * w); }

} // namespace

M12Derivatives m12_derivatives(const DerivedConstants& dc, const ScenarioConfig& cfg,
                               double t) {
    double w = w_of_t(dc, t);
    double r = -dc.kk * w;
    double rdot = -dc.kk * dc.c5 * w / (1.0 + w);
    M12Derivatives d;
    d.r1dot = dc.ka + dc.kb * dc.c5 * p_of(w);
    d.r2dot = dc.kc + dc.kd * dc.c5 * p_of(w);
    d.r1ddot = -cfg.G * cfg.m2 / (r * r);
    d.r2ddot = -cfg.G * cfg.m1 / (r * r);
    d.theta_dot = dc.h_ang / (r * r);
    d.theta_ddot = -2.0 * dc.h_ang * rdot / (r * r * r);
    return d;
}

ThirdBodyIntermediates f_functions(const DerivedConstants& dc, const ScenarioConfig& cfg,
                                   double t) {
    M12Derivatives d = m12_derivatives(dc, cfg, t);
    double r1 = r1_of_t(dc, cfg, t);
    double r2 = r2_of_t(dc, cfg, t);
    double gm3 = cfg.G * cfg.m3;
    double sum2 = r1 * r1 + r2 * r2 + 2.0 * r1 * r2;  // (r1 + r2)^2

    ThirdBodyIntermediates f;
    f.t = t;
    f.f1 = (d.r1ddot - r1 * d.theta_dot * d.theta_dot) / gm3 + (cfg.m2 / cfg.m3) / sum2;
    f.f2 = (r1 * d.theta_ddot + 2.0 * d.r1dot * d.theta_dot) / gm3;
    f.f3 = (d.r2ddot - r2 * d.theta_dot * d.theta_dot) / gm3 + (cfg.m1 / cfg.m3) / sum2;
    f.f4 = -(r2 * d.theta_ddot + 2.0 * d.r2dot * d.theta_dot) / gm3;
    if (!std::isfinite(f.f1) || !std::isfinite(f.f2) || !std::isfinite(f.f3) ||
        !std::isfinite(f.f4))
        throw ApproximationBreakdown("f-functions non-finite at t = " + std::to_string(t));
    f.k_env = std::hypot(f.f1, f.f2);
    if (f.k_env == 0.0)
        throw DegenerateError("f1 = f2 = 0: the third-body angle is indeterminate");
    f.psi = std::atan2(-f.f1, f.f2);
    return f;
}

double theta3_from_f(const ThirdBodyIntermediates& f, double theta1,
                     std::optional<double> previous, bool* branch_jumped) {
    if (branch_jumped) *branch_jumped = false;
    if (f.k_env == 0.0)
        throw DegenerateError("f1 = f2 = 0: the third-body angle is indeterminate");
    double ac = std::acos(std::clamp(f.f2 / f.k_env, -1.0, 1.0));
    double principal = theta1 + ac + f.psi;
    if (!previous) return principal;

    // candidates: principal and reflected arccos branches, shifted by 2 pi n
    constexpr double two_pi = 2.0 * std::numbers::pi;
    double best = principal;
    double best_dist = std::abs(principal - *previous);
    bool best_reflected = false;
    for (int refl = 0; refl < 2; ++refl) {
        double base = theta1 + (refl ? -ac : ac) + f.psi;
        double n = std::round((*previous - base) / two_pi);
        for (double dn : {n - 1.0, n, n + 1.0}) {
            double cand = base + dn * two_pi;
            double dist = std::abs(cand - *previous);
            if (dist < best_dist) {
                best = cand;
                best_dist = dist;
                best_reflected = refl != 0;
            }
        }
    }
    if (branch_jumped) *branch_jumped = best_reflected;
    return best;
}

double theta3_of_t(const DerivedConstants& dc, const ScenarioConfig& cfg, double t) {
    return theta3_from_f(f_functions(dc, cfg, t), theta1_of_t(dc, cfg, t));
}

ThirdBodyState r3_from_components(double r1, double r2, double theta1, double theta2,
                                  double theta3, double f2, double f4, double t) {
    double alpha = theta3 - theta1;
    double beta = theta3 - theta2;
    double ca = std::cos(alpha), sa = std::sin(alpha);
    double cb = std::cos(beta), sb = std::sin(beta);
    const double sqrt2 = std::numbers::sqrt2;

    double denom = 2.0 * r2 * cb - 2.0 * r1 * ca;
    double eps_den = 1e-9 * (r1 + r2);
    if (std::abs(denom) <= eps_den)
        throw SingularityError("third-body radius elimination: denominator " +
                               std::to_string(denom) + " within " + std::to_string(eps_den) +
                               " of zero");

    // 1 - cos(x) evaluated as 2 sin^2(x/2); the plain form cancels to zero
    // for the tiny angles this elimination routinely produces
    double one_m_ca = 2.0 * std::pow(std::sin(0.5 * alpha), 2);
    double one_m_cb = 2.0 * std::pow(std::sin(0.5 * beta), 2);
    double rhs1 = sa / (sqrt2 * f2 * std::sqrt(one_m_ca));  // body-1 distance equation
    double rhs2 = sb / (sqrt2 * f4 * std::sqrt(one_m_cb));  // body-2 distance equation
    double r3 = (rhs1 - rhs2 + r2 * r2 - r1 * r1) / denom;
    if (!std::isfinite(r3))
        throw ApproximationBreakdown("third-body radius non-finite at t = " + std::to_string(t));
    if (!(r3 > 0.0))
        throw ApproximationBreakdown("third-body radius nonpositive (" + std::to_string(r3) +
                                     ") at t = " + std::to_string(t));

    ThirdBodyState st;
    st.r3 = r3;
    st.theta3 = theta3;
    st.t = t;
    double lhs1 = r3 * r3 - 2.0 * r1 * r3 * ca + r1 * r1;
    double lhs2 = r3 * r3 - 2.0 * r2 * r3 * cb + r2 * r2;
    st.residual_36b = std::abs(lhs1 - rhs1) / std::max(std::abs(lhs1), std::abs(rhs1));
    st.residual_37b = std::abs(lhs2 - rhs2) / std::max(std::abs(lhs2), std::abs(rhs2));
    return st;
}

ThirdBodyState r3_of_t(const DerivedConstants& dc, const ScenarioConfig& cfg, double t,
                       double theta3) {
    ThirdBodyIntermediates f = f_functions(dc, cfg, t);
    return r3_from_components(r1_of_t(dc, cfg, t), r2_of_t(dc, cfg, t),
                              theta1_of_t(dc, cfg, t), theta2_of_t(dc, cfg, t), theta3, f.f2,
                              f.f4, t);
}

ThirdBodyState ThirdBodyTrajectory::sample(double t) {
    ThirdBodyIntermediates f = f_functions(dc_, cfg_, t);
    bool jumped = false;
    double theta3 = theta3_from_f(f, theta1_of_t(dc_, cfg_, t), prev_theta3_, &jumped);
    if (jumped) ++branch_jumps_;
    prev_theta3_ = theta3;
    return r3_of_t(dc_, cfg_, t, theta3);
}

std::vector<RestrictedResidual> restricted_polar_residuals(
    const std::vector<ThirdBodyState>& traj3, const std::vector<PrimaryPolarSample>& primaries,
    double G, double m1, double m2) {
    if (traj3.size() < 5 || primaries.size() != traj3.size())
        throw ConfigError("restricted residuals: need >= 5 aligned samples");
    const std::size_t n = traj3.size();
    double dt = traj3[1].t - traj3[0].t;

    std::vector<RestrictedResidual> out;
    out.reserve(n - 2);
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const auto& s = traj3[i];
        const auto& p = primaries[i];
        double r3dd = (traj3[i + 1].r3 - 2.0 * s.r3 + traj3[i - 1].r3) / (dt * dt);
        double th3dd =
            (traj3[i + 1].theta3 - 2.0 * s.theta3 + traj3[i - 1].theta3) / (dt * dt);
        double r3d = (traj3[i + 1].r3 - traj3[i - 1].r3) / (2.0 * dt);
        double th3d = (traj3[i + 1].theta3 - traj3[i - 1].theta3) / (2.0 * dt);

        double rad1, tan1, rad2, tan2;
        oracle::polar_pair_accel(s.r3, s.theta3, p.r1, p.theta1, G * m1, rad1, tan1);
        oracle::polar_pair_accel(s.r3, s.theta3, p.r2, p.theta2, G * m2, rad2, tan2);

        double lhs_rad = r3dd - s.r3 * th3d * th3d;
        double rhs_rad = rad1 + rad2;
        double lhs_tan = s.r3 * th3dd + 2.0 * r3d * th3d;
        double rhs_tan = tan1 + tan2;

        // relative values are normalized by the size of the competing pair
        // terms as well, so a zero crossing of the net acceleration does
        // not spike the ratio; absolute values are kept for scale-aware use
        RestrictedResidual res;
        res.t = s.t;
        res.radial_abs = std::abs(lhs_rad - rhs_rad);
        res.transverse_abs = std::abs(lhs_tan - rhs_tan);
        res.radial = res.radial_abs / std::max({std::abs(lhs_rad), std::abs(rhs_rad),
                                                std::abs(rad1) + std::abs(rad2), 1e-300});
        res.transverse =
            res.transverse_abs / std::max({std::abs(lhs_tan), std::abs(rhs_tan),
                                           std::abs(tan1) + std::abs(tan2), 1e-300});
        out.push_back(res);
    }
    return out;
}

std::vector<RestrictedResidual> restricted_polar_residuals(
    const std::vector<ThirdBodyState>& traj3, const DerivedConstants& dc,
    const ScenarioConfig& cfg) {
    std::vector<PrimaryPolarSample> prim;
    prim.reserve(traj3.size());
    for (const auto& s : traj3) {
        PrimaryPolarSample p;
        p.t = s.t;
        p.r1 = r1_of_t(dc, cfg, s.t);
        p.theta1 = theta1_of_t(dc, cfg, s.t);
        p.r2 = r2_of_t(dc, cfg, s.t);
        p.theta2 = theta2_of_t(dc, cfg, s.t);
        prim.push_back(p);
    }
    return restricted_polar_residuals(traj3, prim, cfg.G, cfg.m1, cfg.m2);
}

} // namespace rtbp
