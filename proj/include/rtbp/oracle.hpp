#pragma once
#include <array>
#include <cstddef>
#include <functional>
#include <vector>

namespace rtbp {
namespace oracle {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
double norm(Vec2 a);

/// Flat planar phase space of the three bodies.
struct CartesianState {
    double t = 0.0;
    std::array<Vec2, 3> pos{};
    std::array<Vec2, 3> vel{};
};

struct Masses {
    double m1 = 0.0;
    double m2 = 0.0;
    double m3 = 0.0;
    double operator[](std::size_t i) const { return i == 0 ? m1 : (i == 1 ? m2 : m3); }
};

enum class Method { RK4, RK45 };

struct IntegratorConfig {
    Method method = Method::RK45;
    double dt = 0.0;            // s, fixed-step size (RK4)
    double rel_tol = 1e-12;    // adaptive relative tolerance
    double abs_tol = 1e-6;     // m, adaptive absolute floor
    long max_steps = 20000000;
    double min_separation = 0.0;  // m; 0 means 1e-6 x initial minimum separation
};

struct ConservedMonitors {
    double total_energy = 0.0;      // J
    Vec2 linear_momentum{};          // kg m/s
    double angular_momentum = 0.0;  // kg m^2/s, planar scalar
    Vec2 com_velocity{};             // m/s
};

/// Accelerations of the three bodies under pairwise inverse-square gravity.
/// Throws CollisionError when any separation drops below min_separation.
std::array<Vec2, 3> derivs_three_body(const CartesianState& state, const Masses& masses,
                                      double G, double min_separation = 0.0);

/// Polar phase of the three bodies: radii, angles and their rates.
struct PolarState {
    std::array<double, 3> r{};
    std::array<double, 3> theta{};
    std::array<double, 3> rdot{};
    std::array<double, 3> thetadot{};
};

struct PolarDerivs {
    std::array<double, 3> rddot{};
    std::array<double, 3> thetaddot{};
};

/// Second derivatives (rddot_i, thetaddot_i) of the polar scalar equations
/// of motion. Throws SingularityError when two bodies coincide (angular
/// coincidence with equal radii).
PolarDerivs derivs_polar(const PolarState& ps, const Masses& masses, double G);

/// Radial/transverse acceleration exerted on a body at (ri, thetai) by an
/// attractor of gravitational parameter mu = G*mj at (rj, thetaj). Shared
/// kernel of derivs_polar and the restricted-case residual evaluators.
void polar_pair_accel(double ri, double thetai, double rj, double thetaj, double mu,
                      double& radial, double& transverse);

ConservedMonitors monitor_conserved(const CartesianState& state, const Masses& masses,
                                    double G);

struct TrajectorySample {
    CartesianState state;
    ConservedMonitors monitors;
};

/// Integrates the three-body system from `initial`, sampling every dt_out.
/// Throws CollisionError / StepLimitError.
std::vector<TrajectorySample> integrate(const CartesianState& initial, const Masses& masses,
                                        double G, const IntegratorConfig& cfg, double t_end,
                                        double dt_out);

/// Two-body counterpart (bodies 1 and 2 only), used by the oracle-quality
/// checks. Returns samples with body 3 frozen at the origin.
std::vector<TrajectorySample> integrate_two_body(const CartesianState& initial,
                                                 const Masses& masses, double G,
                                                 const IntegratorConfig& cfg, double t_end,
                                                 double dt_out);

/// Generic adaptive Dormand-Prince 5(4) / fixed RK4 driver over a flat
/// state vector; exposed for tests that integrate other systems.
using Rhs = std::function<void(double t, const std::vector<double>& y, std::vector<double>& dydt)>;
std::vector<double> integrate_raw(const Rhs& rhs, std::vector<double> y, double t0, double t1,
                                  const IntegratorConfig& cfg, long& steps_used);

} // namespace oracle
} // namespace rtbp
