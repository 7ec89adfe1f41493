#include "rtbp/oracle.hpp"
#include "rtbp/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace rtbp {
namespace oracle {

double norm(Vec2 a) { return std::hypot(a.x, a.y); }

namespace {

double pair_min_separation(const CartesianState& s) {
    double m = std::numeric_limits<double>::infinity();
    for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j) m = std::min(m, norm(s.pos[j] - s.pos[i]));
    return m;
}

} // namespace

std::array<Vec2, 3> derivs_three_body(const CartesianState& state, const Masses& masses,
                                      double G, double min_separation) {
    std::array<Vec2, 3> acc{};
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            if (i == j) continue;
            Vec2 d = state.pos[j] - state.pos[i];
            double dist = norm(d);
            if (dist < min_separation || dist == 0.0)
                throw CollisionError("bodies " + std::to_string(i + 1) + " and " +
                                     std::to_string(j + 1) + " closer than the minimum separation");
            double f = G * masses[j] / (dist * dist * dist);
            acc[i] = acc[i] + f * d;
        }
    }
    return acc;
}

void polar_pair_accel(double ri, double thetai, double rj, double thetaj, double mu,
                      double& radial, double& transverse) {
    double delta = thetaj - thetai;
    double c = std::cos(delta);
    double d2 = ri * ri + rj * rj - 2.0 * ri * rj * c;
    if (d2 <= 0.0)
        throw SingularityError("polar pair acceleration: coincident bodies "
                               "(equal radii with angular coincidence)");
    double d = std::sqrt(d2);
    double inv_d3 = 1.0 / (d2 * d);
    radial = mu * (rj * c - ri) * inv_d3;
    transverse = mu * rj * std::sin(delta) * inv_d3;
}

PolarDerivs derivs_polar(const PolarState& ps, const Masses& masses, double G) {
    PolarDerivs out;
    for (int i = 0; i < 3; ++i) {
        if (!(ps.r[i] > 0.0)) throw DomainError("derivs_polar: r must be > 0");
        double ar = 0.0, at = 0.0;
        for (int j = 0; j < 3; ++j) {
            if (i == j) continue;
            double rj_rad, rj_tan;
            polar_pair_accel(ps.r[i], ps.theta[i], ps.r[j], ps.theta[j], G * masses[j],
                             rj_rad, rj_tan);
            ar += rj_rad;
            at += rj_tan;
        }
        // ar = rdd - r thd^2, at = r thdd + 2 rd thd
        out.rddot[i] = ar + ps.r[i] * ps.thetadot[i] * ps.thetadot[i];
        out.thetaddot[i] = (at - 2.0 * ps.rdot[i] * ps.thetadot[i]) / ps.r[i];
    }
    return out;
}

ConservedMonitors monitor_conserved(const CartesianState& state, const Masses& masses,
                                    double G) {
    ConservedMonitors m;
    double mtot = masses.m1 + masses.m2 + masses.m3;
    for (int i = 0; i < 3; ++i) {
        double mi = masses[i];
        m.total_energy += 0.5 * mi * (state.vel[i].x * state.vel[i].x +
                                      state.vel[i].y * state.vel[i].y);
        m.linear_momentum = m.linear_momentum + mi * state.vel[i];
        m.angular_momentum += mi * (state.pos[i].x * state.vel[i].y -
                                    state.pos[i].y * state.vel[i].x);
        for (int j = i + 1; j < 3; ++j) {
            if (mi == 0.0 || masses[j] == 0.0) continue;  // avoid 0/0 at coincident dummies
            m.total_energy -= G * mi * masses[j] / norm(state.pos[j] - state.pos[i]);
        }
    }
    m.com_velocity = (1.0 / mtot) * m.linear_momentum;
    return m;
}

namespace {

// Dormand-Prince 5(4) coefficients
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                 b6 = 11.0 / 84;
constexpr double e1 = 35.0 / 384 - 5179.0 / 57600, e3 = 500.0 / 1113 - 7571.0 / 16695,
                 e4 = 125.0 / 192 - 393.0 / 640, e5 = -2187.0 / 6784 + 92097.0 / 339200,
                 e6 = 11.0 / 84 - 187.0 / 2100, e7 = -1.0 / 40;

void rk4_step(const Rhs& rhs, double t, double h, std::vector<double>& y,
              std::vector<double>& k1, std::vector<double>& k2, std::vector<double>& k3,
              std::vector<double>& k4, std::vector<double>& tmp) {
    const std::size_t n = y.size();
    rhs(t, y, k1);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + 0.5 * h * k1[i];
    rhs(t + 0.5 * h, tmp, k2);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + 0.5 * h * k2[i];
    rhs(t + 0.5 * h, tmp, k3);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + h * k3[i];
    rhs(t + h, tmp, k4);
    for (std::size_t i = 0; i < n; ++i)
        y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
}

} // namespace

std::vector<double> integrate_raw(const Rhs& rhs, std::vector<double> y, double t0, double t1,
                                  const IntegratorConfig& cfg, long& steps_used) {
    const std::size_t n = y.size();
    if (t1 <= t0) return y;

    if (cfg.method == Method::RK4) {
        if (!(cfg.dt > 0.0)) throw ConfigError("integrator: RK4 requires dt > 0");
        std::vector<double> k1(n), k2(n), k3(n), k4(n), tmp(n);
        double t = t0;
        while (t < t1) {
            if (++steps_used > cfg.max_steps)
                throw StepLimitError("integrator exceeded max_steps");
            double h = std::min(cfg.dt, t1 - t);
            rk4_step(rhs, t, h, y, k1, k2, k3, k4, tmp);
            t += h;
        }
        return y;
    }

    // adaptive Dormand-Prince with FSAL
    std::vector<double> k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), tmp(n), ynew(n);
    double t = t0;
    double h = (t1 - t0) / 100.0;
    rhs(t, y, k1);
    bool fsal_valid = true;
    while (t < t1) {
        if (++steps_used > cfg.max_steps)
            throw StepLimitError("integrator exceeded max_steps");
        h = std::min(h, t1 - t);
        if (!fsal_valid) rhs(t, y, k1);

        for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + h * a21 * k1[i];
        rhs(t + h / 5.0, tmp, k2);
        for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
        rhs(t + 3.0 * h / 10.0, tmp, k3);
        for (std::size_t i = 0; i < n; ++i)
            tmp[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
        rhs(t + 4.0 * h / 5.0, tmp, k4);
        for (std::size_t i = 0; i < n; ++i)
            tmp[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
        rhs(t + 8.0 * h / 9.0, tmp, k5);
        for (std::size_t i = 0; i < n; ++i)
            tmp[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] +
                                 a65 * k5[i]);
        rhs(t + h, tmp, k6);
        for (std::size_t i = 0; i < n; ++i)
            ynew[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] +
                                  b6 * k6[i]);
        rhs(t + h, ynew, k7);

        double err = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double ei = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] +
                             e7 * k7[i]);
            double scale = cfg.abs_tol + cfg.rel_tol * std::max(std::abs(y[i]), std::abs(ynew[i]));
            double q = ei / scale;
            err += q * q;
        }
        err = std::sqrt(err / static_cast<double>(n));

        if (err <= 1.0) {
            t += h;
            y.swap(ynew);
            k1.swap(k7);
            fsal_valid = true;
        } else {
            fsal_valid = false;
        }
        double factor = err > 0.0 ? 0.9 * std::pow(err, -0.2) : 5.0;
        h *= std::clamp(factor, 0.2, 5.0);
        if (!(h > 0.0) || t + h == t)
            throw ConvergenceError("integrator step size underflowed at t = " +
                                   std::to_string(t));
    }
    return y;
}

namespace {

std::vector<double> flatten(const CartesianState& s, int nbodies) {
    std::vector<double> y(static_cast<std::size_t>(4 * nbodies));
    for (int i = 0; i < nbodies; ++i) {
        y[4 * i + 0] = s.pos[i].x;
        y[4 * i + 1] = s.pos[i].y;
        y[4 * i + 2] = s.vel[i].x;
        y[4 * i + 3] = s.vel[i].y;
    }
    return y;
}

CartesianState unflatten(const std::vector<double>& y, double t, int nbodies) {
    CartesianState s;
    s.t = t;
    for (int i = 0; i < nbodies; ++i) {
        s.pos[i] = {y[4 * i + 0], y[4 * i + 1]};
        s.vel[i] = {y[4 * i + 2], y[4 * i + 3]};
    }
    return s;
}

std::vector<TrajectorySample> run_integration(const CartesianState& initial,
                                              const Masses& masses, double G,
                                              const IntegratorConfig& cfg, double t_end,
                                              double dt_out, int nbodies) {
    if (!(dt_out > 0.0)) throw ConfigError("integrator: dt_out must be > 0");
    double min_sep = cfg.min_separation;
    if (min_sep <= 0.0) {
        double initial_min = nbodies == 3
                                 ? pair_min_separation(initial)
                                 : norm(initial.pos[1] - initial.pos[0]);
        min_sep = 1e-6 * initial_min;
    }

    Rhs rhs = [&](double t, const std::vector<double>& y, std::vector<double>& dydt) {
        CartesianState s = unflatten(y, t, nbodies);
        if (nbodies == 3) {
            auto acc = derivs_three_body(s, masses, G, min_sep);
            for (int i = 0; i < 3; ++i) {
                dydt[4 * i + 0] = s.vel[i].x;
                dydt[4 * i + 1] = s.vel[i].y;
                dydt[4 * i + 2] = acc[i].x;
                dydt[4 * i + 3] = acc[i].y;
            }
        } else {
            Vec2 d = s.pos[1] - s.pos[0];
            double dist = norm(d);
            if (dist < min_sep || dist == 0.0)
                throw CollisionError("two-body separation below minimum");
            double inv_d3 = 1.0 / (dist * dist * dist);
            Vec2 a1 = (G * masses.m2 * inv_d3) * d;
            Vec2 a2 = (-G * masses.m1 * inv_d3) * d;
            dydt[0] = s.vel[0].x;
            dydt[1] = s.vel[0].y;
            dydt[2] = a1.x;
            dydt[3] = a1.y;
            dydt[4] = s.vel[1].x;
            dydt[5] = s.vel[1].y;
            dydt[6] = a2.x;
            dydt[7] = a2.y;
        }
    };

    long n_out = std::llround(std::floor((t_end - initial.t) / dt_out + 1e-9));
    std::vector<TrajectorySample> out;
    out.reserve(static_cast<std::size_t>(n_out) + 1);

    std::vector<double> y = flatten(initial, nbodies);
    long steps = 0;
    for (long k = 0; k <= n_out; ++k) {
        double tk = initial.t + static_cast<double>(k) * dt_out;
        if (k > 0) {
            double tprev = initial.t + static_cast<double>(k - 1) * dt_out;
            y = integrate_raw(rhs, std::move(y), tprev, tk, cfg, steps);
        }
        CartesianState s = unflatten(y, tk, nbodies);
        out.push_back({s, monitor_conserved(s, masses, G)});
    }
    return out;
}

} // namespace

std::vector<TrajectorySample> integrate(const CartesianState& initial, const Masses& masses,
                                        double G, const IntegratorConfig& cfg, double t_end,
                                        double dt_out) {
    return run_integration(initial, masses, G, cfg, t_end, dt_out, 3);
}

std::vector<TrajectorySample> integrate_two_body(const CartesianState& initial,
                                                 const Masses& masses, double G,
                                                 const IntegratorConfig& cfg, double t_end,
                                                 double dt_out) {
    return run_integration(initial, masses, G, cfg, t_end, dt_out, 2);
}

} // namespace oracle
} // namespace rtbp
