#pragma once

#include "hamcert/cone.hpp"
#include "hamcert/hammerstein.hpp"

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace hamcert {

enum class Branch { small, large };

std::string_view branch_name(Branch b) noexcept;

struct Solution {
    GridFunction u;
    Branch branch = Branch::small;
    double residual = 0.0;
    double sup_norm = 0.0;
    bool in_cone = false;
    int iterations = 0;
};

/// Recomputes residual, sup norm and cone membership for u.
Solution make_solution(const ProblemInstance& p, GridFunction u, Branch branch, int iterations);

/// Branch split at rho2 = 1/(2B), the radius separating the two shells.
Branch classify_branch(const ProblemInstance& p, double sup_norm) noexcept;

using IterateObserver = std::function<void(int iteration, std::span<const double> iterate)>;

/// u <- b(u,u) + u0 from u = 0 until the sup-norm update drops below tol.
Solution picard(const ProblemInstance& p, double tol, int max_iter, const IterateObserver& observer = {});

/// Newton on u - b(u,u) - u0 with the exact dense Jacobian. Stops when both
/// the step and the residual are below tol.
Solution newton(const ProblemInstance& p, std::span<const double> init, double tol, int max_iter);

/// Newton on M(u) F(u) with M(u) = prod_k (1 / |u - u_k|^2 + 1), which keeps
/// the iteration away from every known solution.
Solution deflated_newton(const ProblemInstance& p, std::span<const GridFunction> known, std::span<const double> init,
                         double tol, int max_iter);

struct SolveOptions {
    double tol = 1e-10;
    int max_iter = 500;
};

struct TwoSolutions {
    std::optional<Solution> small;
    std::optional<Solution> large;
    bool certified = false;  // certificate passed for this problem
    bool complete = false;   // both branches found and validated
    std::vector<std::string> diagnostics;
};

TwoSolutions find_two(const ProblemInstance& p, const Certificate& cert, const SolveOptions& options = {});

}  // namespace hamcert
