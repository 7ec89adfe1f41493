#pragma once

namespace rtbp {

/// Real branch of the Lambert W function. Principal (W0) is defined for
/// x >= -1/e and takes values >= -1; Lower (W-1) is defined for
/// -1/e <= x < 0 and takes values <= -1. The branches meet at the branch
/// point x = -1/e, W = -1.
enum class WBranch { Principal, Lower };

/// Result of a Lambert W evaluation with convergence diagnostics.
struct WResult {
    double value;     // w with w*exp(w) = x
    int iterations;   // Halley/Newton iterations spent
    double residual;  // |w*exp(w) - x|
};

/// Evaluates W on the requested branch by Halley iteration with
/// branch-specific seeds (series near the branch point, log asymptotes
/// elsewhere). Residual tolerance: 1e-12 * max(1, |x|), iteration cap 100.
/// Within 1e-12 of the branch point the exact value -1 is returned; the
/// iteration is unstable there because dW/dx is unbounded.
/// Throws DomainError outside the branch domain, ConvergenceError if the
/// cap is hit before the tolerance.
WResult w_eval(WBranch branch, double x);

/// dW/dx via the identity dW/dx = W / (x (1 + W)); equals 1 at x = 0 on
/// the principal branch. Throws DomainError at the branch point where the
/// derivative is unbounded.
double w_derivative(WBranch branch, double x);

} // namespace rtbp
