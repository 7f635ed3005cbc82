#pragma once

#include <optional>

namespace hamcert {

/// Scalar model u = a*u^2 + u0 with a > 0, u0 >= 0.
struct ScalarProblem {
    double a;
    double u0;

    /// Throws InvalidArgument unless a > 0 and u0 >= 0 (both finite).
    static ScalarProblem make(double a, double u0);
};

struct ScalarRoots {
    double lower;
    double upper;
    bool degenerate;  // 4*a*u0 == 1, lower == upper
};

/// True iff 4*a*u0 < 1.
bool scalar_discriminant_ok(const ScalarProblem& p) noexcept;

/// Both real roots, ordered. Empty when 4*a*u0 > 1.
std::optional<ScalarRoots> scalar_roots(const ScalarProblem& p) noexcept;

/// Iterates u <- a*u^2 + u0 from 0 until |du| < tol. Converges to the lower
/// root; throws NonConvergence after max_iter steps.
double scalar_picard(const ScalarProblem& p, double tol, int max_iter);

}  // namespace hamcert
