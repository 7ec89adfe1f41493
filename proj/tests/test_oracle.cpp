#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "rtbp/errors.hpp"
#include "rtbp/oracle.hpp"
#include "support.hpp"

#include <cmath>
#include <numbers>
#include <random>

using namespace rtbp;
using namespace rtbp::oracle;
using rtbp_test::rel_diff;

namespace {

constexpr double kPi = std::numbers::pi;

// circular two-body setup in scale-free units: separation d, G(m1+m2) = mu
CartesianState circular_state(double d, double m1, double m2, double G) {
    double mtot = m1 + m2;
    double omega = std::sqrt(G * mtot / (d * d * d));
    double r1 = d * m2 / mtot, r2 = d * m1 / mtot;
    CartesianState s;
    s.pos[0] = {-r1, 0.0};
    s.pos[1] = {r2, 0.0};
    s.vel[0] = {0.0, -r1 * omega};
    s.vel[1] = {0.0, r2 * omega};
    s.pos[2] = {0.0, 0.0};
    s.vel[2] = {0.0, 0.0};
    return s;
}

PolarState to_polar(const CartesianState& s) {
    PolarState p;
    for (int i = 0; i < 3; ++i) {
        double x = s.pos[i].x, y = s.pos[i].y;
        double vx = s.vel[i].x, vy = s.vel[i].y;
        p.r[i] = std::hypot(x, y);
        p.theta[i] = std::atan2(y, x);
        p.rdot[i] = (x * vx + y * vy) / p.r[i];
        p.thetadot[i] = (x * vy - y * vx) / (p.r[i] * p.r[i]);
    }
    return p;
}

} // namespace

TEST_CASE("massless third body leaves the primaries' accelerations two-body") {
    CartesianState s = circular_state(1.0, 0.6, 0.4, 1.0);
    s.pos[2] = {0.3, 0.7};
    Masses with{0.6, 0.4, 0.0};
    auto acc = derivs_three_body(s, with, 1.0);
    // bodies 1,2: pure two-body values
    Vec2 d = s.pos[1] - s.pos[0];
    double dist = norm(d);
    Vec2 a1 = (1.0 * 0.4 / (dist * dist * dist)) * d;
    CHECK(rel_diff(acc[0].x, a1.x) < 1e-15);
    CHECK(rel_diff(acc[0].y + 0.0, a1.y) < 1e-15);
    CHECK(std::isfinite(acc[2].x));
    CHECK(std::isfinite(acc[2].y));
}

TEST_CASE("symmetric equal-mass configuration accelerates mirror-symmetrically") {
    CartesianState s;
    s.pos[0] = {-1.0, 0.0};
    s.pos[1] = {1.0, 0.0};
    s.pos[2] = {0.0, 2.0};  // on the symmetry axis
    Masses m{1.0, 1.0, 0.5};
    auto acc = derivs_three_body(s, m, 1.0);
    CHECK(acc[0].x == doctest::Approx(-acc[1].x).epsilon(1e-14));
    CHECK(acc[0].y == doctest::Approx(acc[1].y).epsilon(1e-14));
    CHECK(std::abs(acc[2].x) < 1e-16);  // m3 pulled straight down the axis
}

TEST_CASE("Newton's third law over random states") {
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    std::uniform_real_distribution<double> um(0.1, 2.0);
    int accepted = 0;
    while (accepted < 1000) {
        CartesianState s;
        for (int i = 0; i < 3; ++i) {
            s.pos[i] = {u(rng), u(rng)};
            s.vel[i] = {u(rng), u(rng)};
        }
        bool ok = true;
        for (int i = 0; i < 3 && ok; ++i)
            for (int j = i + 1; j < 3; ++j)
                if (norm(s.pos[j] - s.pos[i]) < 0.05) ok = false;
        if (!ok) continue;
        ++accepted;
        Masses m{um(rng), um(rng), um(rng)};
        auto acc = derivs_three_body(s, m, 1.0);
        Vec2 sum{};
        double scale = 0.0;
        for (int i = 0; i < 3; ++i) {
            sum = sum + m[i] * acc[i];
            scale += m[i] * norm(acc[i]);
        }
        CHECK(norm(sum) <= 1e-12 * scale);
    }
}

TEST_CASE("collision guard") {
    CartesianState s;
    s.pos[0] = {0.0, 0.0};
    s.pos[1] = {1e-9, 0.0};
    s.pos[2] = {1.0, 1.0};
    Masses m{1.0, 1.0, 1.0};
    CHECK_THROWS_AS(derivs_three_body(s, m, 1.0, 1e-6), CollisionError);
}

TEST_CASE("polar derivatives match transformed Cartesian accelerations") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> ur(0.5, 2.0);
    std::uniform_real_distribution<double> uth(0.0, 2.0 * kPi);
    std::uniform_real_distribution<double> uv(-1.0, 1.0);
    std::uniform_real_distribution<double> um(0.1, 2.0);
    int accepted = 0;
    while (accepted < 1000) {
        CartesianState s;
        PolarState p;
        for (int i = 0; i < 3; ++i) {
            double r = ur(rng), th = uth(rng);
            s.pos[i] = {r * std::cos(th), r * std::sin(th)};
            s.vel[i] = {uv(rng), uv(rng)};
        }
        bool ok = true;
        for (int i = 0; i < 3 && ok; ++i)
            for (int j = i + 1; j < 3; ++j)
                if (norm(s.pos[j] - s.pos[i]) < 0.05) ok = false;
        if (!ok) continue;
        ++accepted;
        p = to_polar(s);
        Masses m{um(rng), um(rng), um(rng)};
        auto acc = derivs_three_body(s, m, 1.0);
        auto pd = derivs_polar(p, m, 1.0);
        for (int i = 0; i < 3; ++i) {
            // transform Cartesian acceleration to polar second derivatives
            double c = std::cos(p.theta[i]), sn = std::sin(p.theta[i]);
            double ar = acc[i].x * c + acc[i].y * sn;
            double at = -acc[i].x * sn + acc[i].y * c;
            double rdd = ar + p.r[i] * p.thetadot[i] * p.thetadot[i];
            double thdd = (at - 2.0 * p.rdot[i] * p.thetadot[i]) / p.r[i];
            CHECK(std::abs(pd.rddot[i] - rdd) <=
                  1e-9 * std::max({std::abs(rdd), std::abs(pd.rddot[i]), 1e-12}));
            CHECK(std::abs(pd.thetaddot[i] - thdd) <=
                  1e-9 * std::max({std::abs(thdd), std::abs(pd.thetaddot[i]), 1e-12}));
        }
    }
}

TEST_CASE("restricted substitution theta2 = theta1 + pi reduces the pair term exactly") {
    // with the primaries antipodal, the (1,2) interaction must equal the
    // collinear attraction -G m / (r1+r2)^2 regardless of the radii
    PolarState p;
    p.r = {0.7, 1.9, 1.3};
    p.theta = {0.4, 0.4 + kPi, 2.2};
    p.rdot = {0.1, -0.2, 0.05};
    p.thetadot = {0.0, 0.0, 0.0};
    Masses m{1.3, 0.8, 1e-12};
    auto pd = derivs_polar(p, m, 1.0);

    double pair12 = -1.0 * m.m2 / std::pow(p.r[0] + p.r[1], 2);
    double rad3_1, tan3_1;
    polar_pair_accel(p.r[0], p.theta[0], p.r[2], p.theta[2], 1.0 * m.m3, rad3_1, tan3_1);
    CHECK(pd.rddot[0] == doctest::Approx(pair12 + rad3_1).epsilon(1e-14));

    // m3-terms vanish when m3 = 0
    Masses m0{1.3, 0.8, 0.0};
    auto pd0 = derivs_polar(p, m0, 1.0);
    CHECK(pd0.rddot[0] == doctest::Approx(pair12).epsilon(1e-14));
}

TEST_CASE("coincident bodies raise a singularity") {
    PolarState p;
    p.r = {1.0, 1.0, 2.0};
    p.theta = {0.5, 0.5, 1.0};  // same angle, same radius: coincident
    Masses m{1.0, 1.0, 1.0};
    CHECK_THROWS_AS(derivs_polar(p, m, 1.0), SingularityError);
}

TEST_CASE("circular orbit closes after one period") {
    double d = 1.0, m1 = 0.6, m2 = 0.4, G = 1.0;
    CartesianState s0 = circular_state(d, m1, m2, G);
    double omega = std::sqrt(G * (m1 + m2) / (d * d * d));
    double period = 2.0 * kPi / omega;
    IntegratorConfig cfg;
    cfg.rel_tol = 1e-12;
    cfg.abs_tol = 1e-14;
    Masses m{m1, m2, 0.0};
    auto traj = integrate_two_body(s0, m, G, cfg, period, period / 16.0);
    const auto& fin = traj.back().state;
    for (int i = 0; i < 2; ++i) {
        CHECK(norm(fin.pos[i] - s0.pos[i]) <= 1e-8 * d);
        CHECK(norm(fin.vel[i] - s0.vel[i]) <= 1e-8 * d * omega);
    }
}

TEST_CASE("free particles move uniformly when G = 0") {
    CartesianState s0;
    s0.pos = {{{0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}}};
    s0.vel = {{{0.1, 0.2}, {-0.3, 0.4}, {0.5, -0.6}}};
    Masses m{1.0, 1.0, 1.0};
    IntegratorConfig cfg;
    auto traj = integrate(s0, m, 0.0, cfg, 10.0, 1.0);
    for (const auto& smp : traj) {
        double t = smp.state.t;
        for (int i = 0; i < 3; ++i) {
            CHECK(smp.state.pos[i].x ==
                  doctest::Approx(s0.pos[i].x + t * s0.vel[i].x).epsilon(1e-13));
            CHECK(smp.state.pos[i].y ==
                  doctest::Approx(s0.pos[i].y + t * s0.vel[i].y).epsilon(1e-13));
        }
    }
}

TEST_CASE("energy drift over ten circular periods") {
    double d = 1.0, m1 = 0.6, m2 = 0.4, G = 1.0;
    CartesianState s0 = circular_state(d, m1, m2, G);
    double period = 2.0 * kPi / std::sqrt(G * (m1 + m2) / (d * d * d));
    IntegratorConfig cfg;
    cfg.rel_tol = 1e-12;
    cfg.abs_tol = 1e-14;
    Masses m{m1, m2, 0.0};
    auto traj = integrate_two_body(s0, m, G, cfg, 10.0 * period, period / 4.0);
    double e0 = traj.front().monitors.total_energy;
    for (const auto& smp : traj)
        CHECK(std::abs(smp.monitors.total_energy - e0) <= 1e-10 * std::abs(e0));
}

TEST_CASE("conserved monitors") {
    // two bodies at rest: energy is pure potential, momentum zero
    CartesianState s;
    s.pos[0] = {0.0, 0.0};
    s.pos[1] = {2.0, 0.0};
    s.pos[2] = {5.0, 5.0};
    Masses m{3.0, 4.0, 0.0};
    auto mon = monitor_conserved(s, m, 1.0);
    CHECK(mon.total_energy == doctest::Approx(-3.0 * 4.0 / 2.0).epsilon(1e-15));
    CHECK(norm(mon.linear_momentum) == 0.0);

    // Galilean boost shifts the COM velocity by exactly v
    CartesianState sb = s;
    Vec2 boost{0.7, -0.3};
    for (int i = 0; i < 3; ++i) sb.vel[i] = sb.vel[i] + boost;
    auto mon2 = monitor_conserved(sb, m, 1.0);
    CHECK(mon2.com_velocity.x - mon.com_velocity.x == doctest::Approx(boost.x).epsilon(1e-15));
    CHECK(mon2.com_velocity.y - mon.com_velocity.y == doctest::Approx(boost.y).epsilon(1e-15));
}

TEST_CASE("monitor drift along an integrated trajectory stays within pinned bounds") {
    double d = 1.0, m1 = 0.6, m2 = 0.4, G = 1.0;
    CartesianState s0 = circular_state(d, m1, m2, G);
    s0.pos[2] = {0.1, 0.3};
    s0.vel[2] = {0.2, -0.1};
    double period = 2.0 * kPi / std::sqrt(G * (m1 + m2) / (d * d * d));
    IntegratorConfig cfg;
    cfg.rel_tol = 1e-12;
    cfg.abs_tol = 1e-14;
    Masses m{m1, m2, 1e-5};
    auto traj = integrate(s0, m, G, cfg, 2.0 * period, period / 8.0);
    const auto& first = traj.front().monitors;
    for (const auto& smp : traj) {
        // pinned regression bounds, measured ~1e-13 class on the reference run
        CHECK(std::abs(smp.monitors.total_energy - first.total_energy) <= 1e-11);
        CHECK(norm(smp.monitors.linear_momentum - first.linear_momentum) <= 1e-12);
        CHECK(std::abs(smp.monitors.angular_momentum - first.angular_momentum) <= 1e-12);
    }
}

TEST_CASE("three-body run with m3 = 0 matches the two-body propagation") {
    double d = 1.0, m1 = 0.6, m2 = 0.4, G = 1.0;
    CartesianState s0 = circular_state(d, m1, m2, G);
    s0.pos[2] = {0.2, 0.5};
    s0.vel[2] = {-0.1, 0.2};
    double period = 2.0 * kPi / std::sqrt(G * (m1 + m2) / (d * d * d));
    IntegratorConfig cfg;
    cfg.rel_tol = 1e-12;
    cfg.abs_tol = 1e-14;
    Masses m{m1, m2, 0.0};
    auto t3 = integrate(s0, m, G, cfg, period, period / 32.0);
    auto t2 = integrate_two_body(s0, m, G, cfg, period, period / 32.0);
    REQUIRE(t3.size() == t2.size());
    for (std::size_t k = 0; k < t3.size(); ++k) {
        for (int i = 0; i < 2; ++i) {
            CHECK(norm(t3[k].state.pos[i] - t2[k].state.pos[i]) <= 1e-10 * d);
            CHECK(norm(t3[k].state.vel[i] - t2[k].state.vel[i]) <= 1e-10);
        }
    }
}

TEST_CASE("fixed-step RK4 exhibits order-4 convergence") {
    double d = 1.0, m1 = 0.6, m2 = 0.4, G = 1.0;
    CartesianState s0 = circular_state(d, m1, m2, G);
    double period = 2.0 * kPi / std::sqrt(G * (m1 + m2) / (d * d * d));
    Masses m{m1, m2, 0.0};

    auto global_error = [&](double dt) {
        IntegratorConfig cfg;
        cfg.method = Method::RK4;
        cfg.dt = dt;
        auto traj = integrate_two_body(s0, m, G, cfg, period, period);
        const auto& fin = traj.back().state;
        double e = 0.0;
        for (int i = 0; i < 2; ++i) e += norm(fin.pos[i] - s0.pos[i]);
        return e;
    };

    double e1 = global_error(period / 500.0);
    double e2 = global_error(period / 1000.0);
    double ratio = e1 / e2;
    CHECK(ratio > 16.0 * 0.8);
    CHECK(ratio < 16.0 * 1.2);
}

TEST_CASE("step limit raises") {
    CartesianState s0 = circular_state(1.0, 0.6, 0.4, 1.0);
    IntegratorConfig cfg;
    cfg.max_steps = 3;
    Masses m{0.6, 0.4, 0.0};
    CHECK_THROWS_AS(integrate_two_body(s0, m, 1.0, cfg, 6.0, 6.0), StepLimitError);
}

TEST_CASE("head-on trajectories raise a collision error") {
    CartesianState s0;
    s0.pos[0] = {-1.0, 0.0};
    s0.pos[1] = {1.0, 0.0};
    s0.pos[2] = {0.0, 50.0};  // far away spectator
    s0.vel[0] = {2.0, 0.0};
    s0.vel[1] = {-2.0, 0.0};
    Masses m{1.0, 1.0, 1e-12};
    IntegratorConfig cfg;
    cfg.min_separation = 0.05;
    CHECK_THROWS_AS(integrate(s0, m, 1.0, cfg, 10.0, 0.5), CollisionError);
}
