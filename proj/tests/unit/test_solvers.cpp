#include "hamcert/errors.hpp"
#include "hamcert/scalar_oracle.hpp"
#include "hamcert/solvers.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace hamcert;

namespace {

ProblemInstance scalar_problem(double a, double u0) {
    const Grid grid = Grid::custom({0.0}, {1.0});
    BilinearOperator b = assemble(KernelMatrix::from_values(DenseMatrix(1, a), grid), grid);
    // with G = [[a]] and w = 1, u0 = a * f
    return ProblemInstance::make(std::move(b), GridFunction{u0 / a}, ConeParams{{0.0, 0.0}, 1.0});
}

ProblemInstance interval_problem(std::size_t n, double source) {
    const Grid grid = make_grid(n, 0.0, 1.0, QuadratureRule::trapezoid);
    const KernelMatrix k = kernel_matrix(IntervalDirichlet{}, grid);
    const Subregion sub{0.25, 0.75};
    return ProblemInstance::make(assemble(k, grid), GridFunction(n, source),
                                 ConeParams::make(sub, harnack_gamma(k, sub).gamma, 0.0, 1.0));
}

double sup_diff_on_coarse(const GridFunction& coarse, const GridFunction& fine) {
    double d = 0.0;
    for (std::size_t i = 0; i < coarse.size(); ++i) d = std::max(d, std::abs(coarse[i] - fine[2 * i]));
    return d;
}

}  // namespace

TEST_CASE("picard") {
    SUBCASE("scalar reduction") {
        const ProblemInstance p = scalar_problem(1.0, 3.0 / 16.0);
        CHECK(p.u0[0] == 3.0 / 16.0);
        const Solution s = picard(p, 1e-12, 100000);
        CHECK(std::abs(s.u[0] - 0.25) < 1e-11);
        CHECK(s.branch == Branch::small);
    }
    SUBCASE("zero source stops after one step") {
        const Solution s = picard(interval_problem(51, 0.0), 1e-12, 10);
        CHECK(s.iterations == 1);
        CHECK(sup_norm(s.u) == 0.0);
    }
    SUBCASE("interval f = 1") {
        const ProblemInstance p = interval_problem(101, 1.0);
        const Solution s = picard(p, 1e-12, 1000);
        CHECK(s.residual < 1e-11);
        CHECK(s.sup_norm < 4.0);
        CHECK(s.in_cone);
        const Solution fine = picard(interval_problem(201, 1.0), 1e-12, 1000);
        CHECK(sup_diff_on_coarse(s.u, fine.u) < 1e-6);
    }
    SUBCASE("iterates are nondecreasing") {
        const ProblemInstance p = interval_problem(101, 5.0);
        GridFunction prev(101, 0.0);
        int violations = 0;
        picard(p, 1e-12, 1000, [&](int, std::span<const double> u) {
            for (std::size_t i = 0; i < u.size(); ++i)
                if (u[i] < prev[i]) ++violations;
            prev.assign(u.begin(), u.end());
        });
        CHECK(violations == 0);
    }
    SUBCASE("diverges past the fold") {
        CHECK_THROWS_AS(picard(scalar_problem(1.0, 0.3), 1e-12, 1000), NonConvergence);
        try {
            picard(scalar_problem(1.0, 0.2), 1e-14, 2);
        } catch (const NonConvergence& e) {
            CHECK(e.best_iterate().size() == 1);
            CHECK(e.iterations() == 2);
        }
    }
}

TEST_CASE("small-branch bound from the scalar majorant") {
    for (double c : {0.5, 2.0, 5.0, 7.5}) {
        const ProblemInstance p = interval_problem(101, c);
        const double B = p.b.norm_B(), u0n = sup_norm(p.u0);
        const Solution s = picard(p, 1e-12, 10000);
        CHECK(s.sup_norm <= (1.0 - std::sqrt(1.0 - 4.0 * B * u0n)) / (2.0 * B) + 1e-8);
    }
}

TEST_CASE("newton") {
    SUBCASE("scalar large root") {
        const Solution s = newton(scalar_problem(1.0, 3.0 / 16.0), GridFunction{0.8}, 1e-12, 50);
        CHECK(std::abs(s.u[0] - 0.75) < 1e-12);
        CHECK(s.branch == Branch::large);
    }
    SUBCASE("started at the small solution it stays there") {
        const ProblemInstance p = interval_problem(101, 1.0);
        const Solution small = picard(p, 1e-13, 1000);
        const Solution again = newton(p, small.u, 1e-10, 20);
        CHECK(again.residual < 1e-10);
        CHECK(sup_norm(GridFunction{again.sup_norm - small.sup_norm}) < 1e-10);
        CHECK(again.branch == Branch::small);
        CHECK(again.iterations <= 2);
    }
    SUBCASE("singular jacobian at the fold") {
        // J = 1 - 2 a u vanishes at u = 1/(2a)
        CHECK_THROWS_AS(newton(scalar_problem(1.0, 0.1), GridFunction{0.5}, 1e-12, 10), SingularJacobian);
    }
    SUBCASE("size mismatch") {
        CHECK_THROWS_AS(newton(scalar_problem(1.0, 0.1), GridFunction{0.5, 0.5}, 1e-12, 10), DimensionMismatch);
    }
}

TEST_CASE("deflated newton") {
    SUBCASE("scalar: avoids the known small root") {
        const ProblemInstance p = scalar_problem(1.0, 3.0 / 16.0);
        const std::vector<GridFunction> known{{0.25}};
        const Solution s = deflated_newton(p, known, GridFunction{0.3}, 1e-12, 100);
        CHECK(std::abs(s.u[0] - 0.75) < 1e-12);
        const Solution s2 = deflated_newton(p, known, GridFunction{0.6}, 1e-12, 100);
        CHECK(std::abs(s2.u[0] - 0.75) < 1e-12);
    }
    SUBCASE("scalar: no third root") {
        const ProblemInstance p = scalar_problem(1.0, 3.0 / 16.0);
        const std::vector<GridFunction> known{{0.25}, {0.75}};
        CHECK_THROWS_AS(deflated_newton(p, known, GridFunction{0.6}, 1e-12, 200), Error);
    }
    SUBCASE("interval: large branch in the cone, matches undeflated newton") {
        const ProblemInstance p = interval_problem(101, 1.0);
        const Solution small = picard(p, 1e-12, 1000);
        const std::vector<GridFunction> known{small.u};
        const Solution large = deflated_newton(p, known, GridFunction(101, 4.0), 1e-10, 500);
        CHECK(large.residual < 1e-10);
        CHECK(large.in_cone);
        CHECK(large.branch == Branch::large);
        CHECK(large.sup_norm > 4.0);
        // deflation soundness: the undeflated residual is tiny
        CHECK(residual(p, large.u) < 1e-10);

        GridFunction init(101);
        for (std::size_t i = 0; i < 101; ++i) init[i] = large.u[i] * 1.05;
        const Solution plain = newton(p, init, 1e-10, 100);
        double diff = 0.0;
        for (std::size_t i = 0; i < 101; ++i) diff = std::max(diff, std::abs(plain.u[i] - large.u[i]));
        CHECK(diff < 1e-9);
    }
}

TEST_CASE("find_two") {
    SUBCASE("scalar reduction") {
        const ProblemInstance p = scalar_problem(1.0, 3.0 / 16.0);
        const Certificate cert = build_certificate(p);
        REQUIRE(cert.passed());
        const TwoSolutions two = find_two(p, cert, {1e-12, 100000});
        REQUIRE(two.small);
        REQUIRE(two.large);
        CHECK(two.complete);
        CHECK(std::abs(two.small->u[0] - 0.25) < 1e-10);
        CHECK(std::abs(two.large->u[0] - 0.75) < 1e-10);
    }
    SUBCASE("interval f = 1") {
        const ProblemInstance p = interval_problem(201, 1.0);
        const Certificate cert = build_certificate(p);
        const TwoSolutions two = find_two(p, cert);
        REQUIRE(two.small);
        REQUIRE(two.large);
        CHECK(two.certified);
        CHECK(two.complete);
        CHECK(two.small->sup_norm < cert.rho2);
        CHECK(two.large->sup_norm > cert.rho2);
        CHECK(two.large->sup_norm < cert.rho3);
        CHECK(two.small->in_cone);
        CHECK(two.large->in_cone);
        CHECK(two.diagnostics.empty());
    }
    SUBCASE("degenerate zero source") {
        const ProblemInstance p = interval_problem(101, 0.0);
        const Certificate cert = build_certificate(p);
        const TwoSolutions two = find_two(p, cert);
        REQUIRE(two.small);
        REQUIRE(two.large);
        CHECK(sup_norm(two.small->u) == 0.0);
        CHECK(two.large->sup_norm > cert.rho2);
        CHECK(two.complete);
    }
    SUBCASE("uncertified problem is flagged") {
        const ProblemInstance p = interval_problem(101, 20.0);
        const Certificate cert = build_certificate(p);
        REQUIRE_FALSE(cert.passed());
        const TwoSolutions two = find_two(p, cert);
        CHECK_FALSE(two.certified);
        CHECK_FALSE(two.diagnostics.empty());
    }
}

TEST_CASE("property: one-node reduction reproduces the scalar roots") {
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> ad(0.2, 5.0), frac(0.05, 0.8);
    for (int k = 0; k < 50; ++k) {
        const double a = ad(rng), u0 = frac(rng) / (4.0 * a);
        const ProblemInstance p = scalar_problem(a, u0);
        const auto ref = oracle::scalar_roots_bisection(a, u0);
        const TwoSolutions two = find_two(p, build_certificate(p), {1e-13, 1000000});
        REQUIRE(two.complete);
        CHECK(std::abs(two.small->u[0] - ref.lower) < 1e-10);
        CHECK(std::abs(two.large->u[0] - ref.upper) < 1e-10);
    }
}

TEST_CASE("grid convergence of both branches") {
    std::vector<TwoSolutions> runs;
    for (std::size_t n : {101u, 201u, 401u}) {
        const ProblemInstance p = interval_problem(n, 1.0);
        runs.push_back(find_two(p, build_certificate(p, {0, 0})));
        REQUIRE(runs.back().complete);
    }
    const double small_e1 = sup_diff_on_coarse(runs[0].small->u, runs[1].small->u);
    const double small_e2 = sup_diff_on_coarse(runs[1].small->u, runs[2].small->u);
    const double large_e1 = sup_diff_on_coarse(runs[0].large->u, runs[1].large->u);
    const double large_e2 = sup_diff_on_coarse(runs[1].large->u, runs[2].large->u);
    CHECK(small_e1 < 1e-6);
    CHECK(small_e1 / small_e2 >= 3.0);
    CHECK(large_e1 / large_e2 >= 3.0);
}
