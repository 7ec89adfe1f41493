#include "rtbp/lambert_w.hpp"
#include "rtbp/errors.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace rtbp {

namespace {

const double kMinusInvE = -std::exp(-1.0);
constexpr double kBranchSnap = 1e-12;  // |x + 1/e| below this returns -1 exactly
constexpr int kMaxIter = 100;

double tolerance_for(double x) { return 1e-12 * std::max(1.0, std::abs(x)); }

// Series around the branch point in p = sqrt(2 (e x + 1)); upper sign is
// the principal branch, lower sign is W-1.
double branch_point_series(double x, bool principal) {
    double u = std::fma(std::exp(1.0), x, 1.0);
    if (u < 0.0) u = 0.0;
    double p = std::sqrt(2.0 * u);
    if (!principal) p = -p;
    // W = -1 + p - p^2/3 + 11/72 p^3 - 43/540 p^4
    return -1.0 + p * (1.0 + p * (-1.0 / 3.0 + p * (11.0 / 72.0 - p * 43.0 / 540.0)));
}

double halley_refine(double w, double x, int& iters) {
    for (; iters < kMaxIter; ++iters) {
        double ew = std::exp(w);
        double f = std::fma(w, ew, -x);
        if (f == 0.0) return w;
        double wp1 = w + 1.0;
        // Halley: dw = f / (e^w (w+1) - (w+2) f / (2 (w+1)))
        double denom = ew * wp1 - (w + 2.0) * f / (2.0 * wp1);
        double dw = f / denom;
        if (!std::isfinite(dw)) {
            dw = f / (ew * wp1);  // Newton fallback
            if (!std::isfinite(dw)) break;
        }
        w -= dw;
        if (std::abs(dw) <= 2.0 * std::numeric_limits<double>::epsilon() * (1.0 + std::abs(w)))
            return w;
    }
    return w;
}

// Newton on phi(w) = w + ln(-w) - ln(-x), exact for W-1 with x in (-1/e, 0)
// and immune to exp underflow for tiny |x| (where |w| is large).
double lower_log_newton(double x, int& iters) {
    double l1 = std::log(-x);
    double l2 = std::log(-l1);
    double w = l1 - l2 + l2 / l1;
    if (w > -1.0) w = -1.0 - 1e-9;
    for (; iters < kMaxIter; ++iters) {
        double phi = w + std::log(-w) - l1;
        double dw = phi * w / (w + 1.0);
        w -= dw;
        if (w >= -1.0) w = std::nextafter(-1.0, -2.0);
        if (std::abs(dw) <= 2.0 * std::numeric_limits<double>::epsilon() * std::abs(w))
            break;
    }
    return w;
}

double residual_of(double w, double x) { return std::abs(std::fma(w, std::exp(w), -x)); }

} // namespace

WResult w_eval(WBranch branch, double x) {
    if (std::isnan(x)) throw DomainError("lambert w: x is NaN");

    if (x < kMinusInvE) {
        if (kMinusInvE - x <= kBranchSnap)
            return {-1.0, 0, std::abs(x - kMinusInvE)};
        throw DomainError("lambert w: x = " + std::to_string(x) +
                          " below the branch point -1/e, no real solution");
    }
    if (x - kMinusInvE <= kBranchSnap) return {-1.0, 0, std::abs(x - kMinusInvE)};

    int iters = 0;
    double w;
    if (branch == WBranch::Principal) {
        if (x == 0.0) return {0.0, 0, 0.0};
        if (x < -0.25) {
            w = branch_point_series(x, true);
        } else if (x < 4.0) {
            // Pade-style seed around 0; Halley does the rest
            w = x * (60.0 + 114.0 * x + 17.0 * x * x) /
                (60.0 + 174.0 * x + 101.0 * x * x);
        } else {
            double l1 = std::log(x);
            double l2 = std::log(l1);
            w = l1 - l2 + l2 / l1;
        }
        w = halley_refine(w, x, iters);
        if (w < -1.0) w = -1.0;
    } else {
        if (x >= 0.0)
            throw DomainError("lambert w: lower branch requires x < 0");
        if (x < -0.25) {
            w = branch_point_series(x, false);
            w = halley_refine(w, x, iters);
        } else {
            w = lower_log_newton(x, iters);
        }
        if (w > -1.0) w = -1.0;
    }

    double res = residual_of(w, x);
    if (res > tolerance_for(x)) {
        // one more polish pass before giving up
        w = halley_refine(w, x, iters);
        res = residual_of(w, x);
        if (res > tolerance_for(x))
            throw ConvergenceError("lambert w: residual " + std::to_string(res) +
                                   " above tolerance after " + std::to_string(iters) +
                                   " iterations at x = " + std::to_string(x));
    }
    return {w, iters, res};
}

double w_derivative(WBranch branch, double x) {
    if (branch == WBranch::Principal && x == 0.0) return 1.0;
    if (x < kMinusInvE || x - kMinusInvE <= kBranchSnap)
        throw DomainError("lambert w derivative: unbounded at the branch point -1/e");
    double w = w_eval(branch, x).value;
    double wp1 = 1.0 + w;
    if (wp1 == 0.0)
        throw DomainError("lambert w derivative: unbounded at the branch point -1/e");
    return w / (x * wp1);
}

} // namespace rtbp
