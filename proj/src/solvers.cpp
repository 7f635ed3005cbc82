#include "hamcert/solvers.hpp"

#include "hamcert/errors.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace hamcert {

namespace {

constexpr double rcond_threshold = 1e-14;

using RowMajorMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

bool all_finite(std::span<const double> u) {
    return std::all_of(u.begin(), u.end(), [](double x) { return std::isfinite(x); });
}

double sup_distance(std::span<const double> a, std::span<const double> b) {
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
    return d;
}

// Newton on M(u) F(u), F(u) = u - b(u,u) - u0. Writing g = grad log M, the
// deflated step is the plain step d scaled by 1 / (1 - g.d).
Solution newton_impl(const ProblemInstance& p, std::span<const GridFunction> known, std::span<const double> init,
                     double tol, int max_iter, const char* name) {
    const std::size_t n = p.b.size();
    if (init.size() != n) throw DimensionMismatch(std::string(name) + ": initial guess size does not match grid");
    if (!(tol > 0.0)) throw InvalidArgument(std::string(name) + ": tol must be positive");
    for (const auto& k : known)
        if (k.size() != n) throw DimensionMismatch(std::string(name) + ": known solution size does not match grid");

    GridFunction u(init.begin(), init.end());
    GridFunction best = u;
    double best_res = std::numeric_limits<double>::infinity();
    GridFunction F(n);
    DenseMatrix jac(n);
    Eigen::VectorXd rhs(static_cast<Eigen::Index>(n));

    for (int iter = 1; iter <= max_iter; ++iter) {
        p.b.apply_into(u, u, F);
        for (std::size_t i = 0; i < n; ++i) F[i] = u[i] - F[i] - p.u0[i];
        const double res = sup_norm(F);
        if (!std::isfinite(res) || !all_finite(u))
            throw NonConvergence(std::string(name) + ": iterate became non-finite", best, iter, best_res);
        if (res < best_res) {
            best_res = res;
            best = u;
        }

        dense::newton_jacobian(p.b.kernel().values, p.b.weights(), u, jac);
        const Eigen::Map<const RowMajorMatrix> jmap(jac.data().data(), static_cast<Eigen::Index>(n),
                                                     static_cast<Eigen::Index>(n));
        const Eigen::PartialPivLU<Eigen::MatrixXd> lu(jmap);
        const double rcond = lu.rcond();
        if (!(rcond >= rcond_threshold))
            throw SingularJacobian(std::string(name) + ": Jacobian is numerically singular (rcond " +
                                       std::to_string(rcond) + ")",
                                   rcond);
        for (std::size_t i = 0; i < n; ++i) rhs[static_cast<Eigen::Index>(i)] = -F[i];
        const Eigen::VectorXd d = lu.solve(rhs);

        double g_dot_d = 0.0;
        for (const auto& k : known) {
            std::size_t m = 0;
            double dist = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                const double e = std::abs(u[i] - k[i]);
                if (e > dist) {
                    dist = e;
                    m = i;
                }
            }
            if (dist == 0.0)
                throw NonConvergence(std::string(name) + ": iterate coincides with a deflated solution", best, iter,
                                     best_res);
            // grad of log(1/|e|^2 + 1) through the active sup-norm component
            const double e_m = u[m] - k[m];
            const double d2 = dist * dist;
            const double eta = 1.0 / d2 + 1.0;
            g_dot_d += (-2.0 * e_m / (d2 * d2)) / eta * d[static_cast<Eigen::Index>(m)];
        }
        const double scale = 1.0 / (1.0 - g_dot_d);

        double step = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double s = scale * d[static_cast<Eigen::Index>(i)];
            u[i] += s;
            step = std::max(step, std::abs(s));
        }
        if (!std::isfinite(step))
            throw NonConvergence(std::string(name) + ": step became non-finite", best, iter, best_res);

        if (step < tol) {
            const double r = residual(p, u);
            bool distinct = true;
            for (const auto& k : known) distinct = distinct && sup_distance(u, k) > 10.0 * tol;
            if (r < tol && distinct) return make_solution(p, std::move(u), Branch::large, iter);
        }
    }
    throw NonConvergence(std::string(name) + ": no convergence within " + std::to_string(max_iter) + " iterations",
                         best, max_iter, best_res);
}

}  // namespace

std::string_view branch_name(Branch b) noexcept { return b == Branch::small ? "small" : "large"; }

Branch classify_branch(const ProblemInstance& p, double sup) noexcept {
    const double norm_B = p.b.norm_B();
    if (!(norm_B > 0.0)) return Branch::small;
    return sup < 1.0 / (2.0 * norm_B) ? Branch::small : Branch::large;
}

Solution make_solution(const ProblemInstance& p, GridFunction u, Branch branch, int iterations) {
    Solution s;
    s.residual = residual(p, u);
    s.sup_norm = sup_norm(u);
    s.in_cone = cone_membership(u, p.grid(), p.cone, cone_tolerance);
    s.branch = branch;
    s.iterations = iterations;
    s.u = std::move(u);
    return s;
}

Solution picard(const ProblemInstance& p, double tol, int max_iter, const IterateObserver& observer) {
    if (!(tol > 0.0)) throw InvalidArgument("picard: tol must be positive");
    const std::size_t n = p.b.size();
    GridFunction u(n, 0.0);
    GridFunction next(n);
    for (int iter = 1; iter <= max_iter; ++iter) {
        p.b.apply_into(u, u, next);
        for (std::size_t i = 0; i < n; ++i) next[i] += p.u0[i];
        const double step = sup_distance(next, u);
        if (!std::isfinite(step) || !all_finite(next))
            throw NonConvergence("picard: iterate diverged", u, iter, residual(p, u));
        if (observer) observer(iter, next);
        u.swap(next);
        if (step < tol) return make_solution(p, std::move(u), Branch::small, iter);
    }
    const double r = residual(p, u);
    throw NonConvergence("picard: no convergence within " + std::to_string(max_iter) + " iterations", u, max_iter, r);
}

Solution newton(const ProblemInstance& p, std::span<const double> init, double tol, int max_iter) {
    Solution s = newton_impl(p, {}, init, tol, max_iter, "newton");
    s.branch = classify_branch(p, s.sup_norm);
    return s;
}

Solution deflated_newton(const ProblemInstance& p, std::span<const GridFunction> known, std::span<const double> init,
                         double tol, int max_iter) {
    Solution s = newton_impl(p, known, init, tol, max_iter, "deflated_newton");
    s.branch = classify_branch(p, s.sup_norm);
    return s;
}

TwoSolutions find_two(const ProblemInstance& p, const Certificate& cert, const SolveOptions& options) {
    TwoSolutions out;
    out.certified = cert.passed();
    if (!out.certified) out.diagnostics.push_back("certificate did not pass; results are uncertified");

    try {
        out.small = picard(p, options.tol, options.max_iter);
    } catch (const Error& e) {
        out.diagnostics.push_back(std::string("small branch: ") + e.what());
    }

    const double norm_B = p.b.norm_B();
    const double rho2 = cert.rho2 > 0.0 ? cert.rho2 : (norm_B > 0.0 ? 1.0 / (2.0 * norm_B) : 1.0);
    std::vector<double> heights{rho2, 2.0 * rho2};
    if (cert.rho3 > 2.0 * rho2) heights.push_back(cert.rho3);

    const auto lifted_constant = [&](double h) {
        GridFunction init(p.b.size(), h);
        for (std::size_t i : subregion_nodes(p.grid(), p.cone.subregion)) init[i] = std::max(init[i], p.cone.gamma * h);
        return init;
    };
    const auto distinct_from_small = [&](const Solution& s) {
        return !out.small || sup_distance(s.u, out.small->u) > 10.0 * options.tol;
    };

    std::vector<GridFunction> known;
    if (out.small) known.push_back(out.small->u);
    for (double h : heights) {
        try {
            Solution s = deflated_newton(p, known, lifted_constant(h), options.tol, options.max_iter);
            if (distinct_from_small(s)) {
                out.large = std::move(s);
                break;
            }
        } catch (const Error& e) {
            out.diagnostics.push_back("large branch, deflated start " + std::to_string(h) + ": " + e.what());
        }
    }
    if (!out.large) {
        for (double h : heights) {
            try {
                Solution s = newton(p, lifted_constant(h), options.tol, options.max_iter);
                if (distinct_from_small(s)) {
                    out.large = std::move(s);
                    break;
                }
                out.diagnostics.push_back("large branch, newton start " + std::to_string(h) +
                                          ": converged to the small solution");
            } catch (const Error& e) {
                out.diagnostics.push_back("large branch, newton start " + std::to_string(h) + ": " + e.what());
            }
        }
    }

    if (!out.small || !out.large) return out;

    bool valid = true;
    for (const Solution* s : {&*out.small, &*out.large}) {
        if (!(s->residual < options.tol)) {
            valid = false;
            out.diagnostics.push_back(std::string(branch_name(s->branch)) + " solution residual " +
                                      std::to_string(s->residual) + " not below tol");
        }
    }
    if (out.certified) {
        if (!out.small->in_cone || !out.large->in_cone) {
            valid = false;
            out.diagnostics.push_back("a solution lies outside the cone");
        }
        if (!(out.small->sup_norm < cert.rho2 && cert.rho2 < out.large->sup_norm)) {
            valid = false;
            out.diagnostics.push_back("sup norms do not straddle rho2");
        }
    }
    out.complete = valid;
    return out;
}

}  // namespace hamcert
