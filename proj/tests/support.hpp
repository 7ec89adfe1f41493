#pragma once
#include "rtbp/scenario.hpp"

#include <cmath>
#include <cstdlib>
#include <functional>
#include <numbers>
#include <stdexcept>
#include <string>

namespace rtbp_test {

inline std::string fixture_dir() {
    const char* d = std::getenv("RTBP_FIXTURE_DIR");
    if (!d) throw std::runtime_error("RTBP_FIXTURE_DIR not set");
    return d;
}

inline std::string fixture_path(const std::string& name) {
    return fixture_dir() + "/" + name;
}

inline double rel_diff(double a, double b) {
    return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300});
}

// central finite differences
inline double fd1(const std::function<double(double)>& f, double x, double h) {
    return (f(x + h) - f(x - h)) / (2.0 * h);
}

inline double fd2(const std::function<double(double)>& f, double x, double h) {
    return (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h);
}

// five-point second derivative, truncation O(h^4)
inline double fd2_5(const std::function<double(double)>& f, double x, double h) {
    return (-f(x + 2 * h) + 16.0 * f(x + h) - 30.0 * f(x) + 16.0 * f(x - h) - f(x - 2 * h)) /
           (12.0 * h * h);
}

// bisection root of f on [lo, hi]; f(lo) and f(hi) must bracket
inline double bisect(const std::function<double(double)>& f, double lo, double hi,
                     int iters = 200) {
    double flo = f(lo);
    for (int i = 0; i < iters; ++i) {
        double mid = 0.5 * (lo + hi);
        double fm = f(mid);
        if ((flo <= 0.0) == (fm <= 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

// The pinned fast-escape scenario (also stored as fixtures/fast_escape.json
// for the CLI tests). COM-consistent split with mass ratio 4; margin
// A/(B r) = 3.4e-3 over the horizon; m3 solves the t0 consistency
// condition of the third-body radius elimination.
inline rtbp::ScenarioConfig fast_escape_config() {
    rtbp::ScenarioConfig c;
    c.G = 6.674e-11;
    c.m1 = 8e23;
    c.m2 = 2e23;
    c.m3 = 4.0797683727582672e16;
    c.r1o = 2e8;
    c.r2o = 8e8;
    c.rdot1o = 1255.2;
    c.rdot2o = 5020.8;
    c.theta1o = 0.0;
    c.theta2o = std::numbers::pi;
    c.thetadot0 = 2.2e-10;
    c.t0 = 0.0;
    c.t_end = 16.0;
    c.dt_out = 0.016;
    return c;
}

// Scale-free configuration (G = 1) for derivative cross-checks; the
// binomial margin is large here, which is irrelevant for calculus tests
// and keeps finite differences well conditioned.
inline rtbp::ScenarioConfig scale_free_config() {
    rtbp::ScenarioConfig c;
    c.G = 1.0;
    c.m1 = 1.0;
    c.m2 = 1.0;
    c.m3 = 1e-9;
    c.r1o = 0.5;
    c.r2o = 0.5;
    c.rdot1o = 1.5;
    c.rdot2o = 1.5;
    c.theta1o = 0.3;
    c.theta2o = 0.3 + std::numbers::pi;
    c.thetadot0 = 0.3;
    c.t0 = 0.0;
    c.t_end = 0.5;
    c.dt_out = 0.01;
    return c;
}

} // namespace rtbp_test
