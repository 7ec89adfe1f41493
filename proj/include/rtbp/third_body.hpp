#pragma once
#include "rtbp/scenario.hpp"
#include "rtbp/two_body.hpp"

#include <optional>
#include <vector>

namespace rtbp {

/// First and second time derivatives of the primaries' closed forms needed
/// by the f-functions.
struct M12Derivatives {
    double r1dot = 0.0;
    double r2dot = 0.0;
    double r1ddot = 0.0;   // -G m2 / r(t)^2
    double r2ddot = 0.0;   // -G m1 / r(t)^2
    double theta_dot = 0.0;
    double theta_ddot = 0.0;
};

M12Derivatives m12_derivatives(const DerivedConstants& dc, const ScenarioConfig& cfg, double t);

/// The four time functions that couple m3 to the primaries, plus the
/// envelope k(t) = sqrt(f1^2 + f2^2) and phase psi(t) = atan2(-f1, f2).
struct ThirdBodyIntermediates {
    double f1 = 0.0;     // 1/m^2
    double f2 = 0.0;     // 1/m^2
    double f3 = 0.0;     // 1/m^2
    double f4 = 0.0;     // 1/m^2
    double k_env = 0.0;  // 1/m^2
    double psi = 0.0;    // rad
    double t = 0.0;      // s
};

/// Throws DegenerateError when f1 = f2 = 0 (the angle solve is
/// indeterminate). The full r*thetadot^2 terms are retained.
ThirdBodyIntermediates f_functions(const DerivedConstants& dc, const ScenarioConfig& cfg,
                                   double t);

/// Angle solve from raw intermediates: theta3 = theta1 + acos(f2/k) + psi
/// (principal form). When `previous` is given, the reflected acos branch
/// and 2*pi offsets are considered and the candidate closest to `previous`
/// wins; `branch_jumped`, when non-null, reports that the reflected branch
/// was needed.
double theta3_from_f(const ThirdBodyIntermediates& f, double theta1,
                     std::optional<double> previous = std::nullopt,
                     bool* branch_jumped = nullptr);

/// Single-instant theta3 (principal branch, no continuity tracking).
double theta3_of_t(const DerivedConstants& dc, const ScenarioConfig& cfg, double t);

struct ThirdBodyState {
    double r3 = 0.0;
    double theta3 = 0.0;
    double t = 0.0;
    double residual_36b = 0.0;  // relative mismatch of the body-1 distance equation
    double residual_37b = 0.0;  // relative mismatch of the body-2 distance equation
};

/// Radius solve at a given theta3. Throws SingularityError when the
/// denominator 2 r2 cos(theta3-theta2) - 2 r1 cos(theta3-theta1) is within
/// 1e-9 (r1+r2) of zero, ApproximationBreakdown when r3 <= 0 or the
/// elimination produces non-finite values.
ThirdBodyState r3_of_t(const DerivedConstants& dc, const ScenarioConfig& cfg, double t,
                       double theta3);

/// Same elimination from explicit components; exposed so tests can probe
/// engineered geometries directly.
ThirdBodyState r3_from_components(double r1, double r2, double theta1, double theta2,
                                  double theta3, double f2, double f4, double t);

/// Sequential sampler for one trajectory: enforces theta3 continuity in
/// time order and counts arccos branch switches.
class ThirdBodyTrajectory {
  public:
    ThirdBodyTrajectory(const DerivedConstants& dc, const ScenarioConfig& cfg)
        : dc_(dc), cfg_(cfg) {}

    /// Samples must be requested in increasing t.
    ThirdBodyState sample(double t);

    int branch_jumps() const { return branch_jumps_; }

  private:
    const DerivedConstants& dc_;
    const ScenarioConfig& cfg_;
    std::optional<double> prev_theta3_;
    int branch_jumps_ = 0;
};

/// Polar series of the primaries used by the restricted residual
/// evaluator; either the closed forms or an oracle trajectory.
struct PrimaryPolarSample {
    double t = 0.0;
    double r1 = 0.0;
    double theta1 = 0.0;
    double r2 = 0.0;
    double theta2 = 0.0;
};

struct RestrictedResidual {
    double t = 0.0;
    double radial = 0.0;          // relative residual of the body-3 radial equation
    double transverse = 0.0;      // relative residual of the body-3 transverse equation
    double radial_abs = 0.0;      // |lhs - rhs| of the radial equation, m/s^2
    double transverse_abs = 0.0;  // |lhs - rhs| of the transverse equation, m/s^2
};

/// Evaluates both sides of the restricted body-3 equations of motion along
/// a sampled (r3, theta3) series, with second derivatives from central
/// finite differences. Diagnostic only; needs >= 5 uniformly spaced samples.
std::vector<RestrictedResidual> restricted_polar_residuals(
    const std::vector<ThirdBodyState>& traj3, const std::vector<PrimaryPolarSample>& primaries,
    double G, double m1, double m2);

/// Convenience overload: primaries from the closed forms.
std::vector<RestrictedResidual> restricted_polar_residuals(
    const std::vector<ThirdBodyState>& traj3, const DerivedConstants& dc,
    const ScenarioConfig& cfg);

} // namespace rtbp
