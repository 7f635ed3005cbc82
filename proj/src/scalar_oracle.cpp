#include "hamcert/scalar_oracle.hpp"

#include "hamcert/errors.hpp"

#include <cmath>
#include <string>

namespace hamcert {

ScalarProblem ScalarProblem::make(double a, double u0) {
    if (!(std::isfinite(a) && a > 0.0)) throw InvalidArgument("scalar problem: a must be positive, got " + std::to_string(a));
    if (!(std::isfinite(u0) && u0 >= 0.0))
        throw InvalidArgument("scalar problem: u0 must be nonnegative, got " + std::to_string(u0));
    return {a, u0};
}

bool scalar_discriminant_ok(const ScalarProblem& p) noexcept { return 4.0 * p.a * p.u0 < 1.0; }

std::optional<ScalarRoots> scalar_roots(const ScalarProblem& p) noexcept {
    const double disc = 1.0 - 4.0 * p.a * p.u0;
    if (disc < 0.0) return std::nullopt;
    if (disc == 0.0) {
        const double r = 1.0 / (2.0 * p.a);
        return ScalarRoots{r, r, true};
    }
    const double root = std::sqrt(disc);
    // lower root via the conjugate form: u- * u+ = u0 / a.
    const double upper = (1.0 + root) / (2.0 * p.a);
    const double lower = 2.0 * p.u0 / (1.0 + root);
    return ScalarRoots{lower, upper, false};
}

double scalar_picard(const ScalarProblem& p, double tol, int max_iter) {
    if (!(tol > 0.0)) throw InvalidArgument("scalar_picard: tol must be positive");
    double u = 0.0;
    for (int k = 1; k <= max_iter; ++k) {
        const double next = p.a * u * u + p.u0;
        if (!std::isfinite(next)) throw NonConvergence("scalar_picard: iterate diverged", {u}, k, std::abs(next - u));
        const double step = std::abs(next - u);
        u = next;
        if (step < tol) return u;
    }
    throw NonConvergence("scalar_picard: no convergence within " + std::to_string(max_iter) + " iterations", {u},
                         max_iter, std::abs(p.a * u * u + p.u0 - u));
}

}  // namespace hamcert
