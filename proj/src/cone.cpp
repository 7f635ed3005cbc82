#include "hamcert/cone.hpp"

#include "hamcert/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace hamcert {

ConeParams ConeParams::make(Subregion subregion, double gamma, double domain_lo, double domain_hi) {
    if (!(domain_lo < subregion.lo && subregion.lo < subregion.hi && subregion.hi < domain_hi))
        throw InvalidArgument("cone: subregion [" + std::to_string(subregion.lo) + ", " + std::to_string(subregion.hi) +
                              "] must lie strictly inside (" + std::to_string(domain_lo) + ", " +
                              std::to_string(domain_hi) + ")");
    if (!(gamma >= 0.0 && gamma <= 1.0)) throw InvalidArgument("cone: gamma must lie in [0, 1]");
    return {subregion, gamma};
}

std::vector<std::size_t> subregion_nodes(const Grid& grid, Subregion sub) {
    const double span = grid.size() > 1 ? grid.hi() - grid.lo() : 1.0;
    const double eps = 1e-12 * std::max(1.0, span);
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < grid.size(); ++i)
        if (grid.nodes[i] >= sub.lo - eps && grid.nodes[i] <= sub.hi + eps) idx.push_back(i);
    return idx;
}

double cone_margin(std::span<const double> u, const Grid& grid, const ConeParams& cone) {
    if (u.size() != grid.size()) throw DimensionMismatch("cone_margin: grid function size does not match grid");
    double lowest = std::numeric_limits<double>::infinity();
    double highest = 0.0;
    for (double x : u) {
        lowest = std::min(lowest, x);
        highest = std::max(highest, x);
    }
    if (u.empty()) return 0.0;
    double sub_min = std::numeric_limits<double>::infinity();
    for (std::size_t i : subregion_nodes(grid, cone.subregion)) sub_min = std::min(sub_min, u[i]);
    const double harnack_margin = std::isfinite(sub_min) ? sub_min - cone.gamma * highest : 0.0;
    return std::min(lowest, harnack_margin);
}

bool cone_membership(std::span<const double> u, const Grid& grid, const ConeParams& cone, double tol) {
    return cone_margin(u, grid, cone) >= -tol;
}

HarnackResult harnack_gamma(const KernelMatrix& kernel, Subregion sub) {
    const auto rows = subregion_nodes(kernel.grid, sub);
    if (rows.empty()) throw InvalidArgument("harnack_gamma: subregion contains no grid nodes");

    const std::size_t n = kernel.size();
    const auto& g = kernel.values;
    double gamma = std::numeric_limits<double>::infinity();
    bool any_column = false;
    for (std::size_t j = 0; j < n; ++j) {
        double col_max = -std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < n; ++i) col_max = std::max(col_max, g(i, j));
        if (!(col_max > 0.0)) continue;
        double sub_min = std::numeric_limits<double>::infinity();
        for (std::size_t i : rows) sub_min = std::min(sub_min, g(i, j));
        gamma = std::min(gamma, sub_min / col_max);
        any_column = true;
    }
    if (!any_column) return {0.0, true};
    return {std::clamp(gamma, 0.0, 1.0), false};
}

GridFunction sample_cone_function(const Grid& grid, const ConeParams& cone, std::mt19937_64& rng) {
    const std::size_t n = grid.size();
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    GridFunction u(n);
    if (unit(rng) < 0.5) {
        for (auto& x : u) x = unit(rng);
    } else {
        // piecewise-constant with a handful of random breakpoints
        std::uniform_int_distribution<int> pieces(1, 8);
        const int k = pieces(rng);
        std::vector<double> breaks(static_cast<std::size_t>(k - 1));
        for (auto& b : breaks) b = grid.lo() + unit(rng) * (grid.hi() - grid.lo());
        std::sort(breaks.begin(), breaks.end());
        std::vector<double> levels(static_cast<std::size_t>(k));
        for (auto& l : levels) l = unit(rng);
        for (std::size_t i = 0; i < n; ++i) {
            const auto piece = static_cast<std::size_t>(
                std::upper_bound(breaks.begin(), breaks.end(), grid.nodes[i]) - breaks.begin());
            u[i] = levels[piece];
        }
    }
    const double top = sup_norm(u);
    for (std::size_t i : subregion_nodes(grid, cone.subregion)) u[i] = std::max(u[i], cone.gamma * top);
    return u;
}

InvarianceReport cone_invariance_check(const BilinearOperator& b, std::span<const double> u0, const ConeParams& cone,
                                       int n_samples, std::uint64_t seed) {
    if (u0.size() != b.size()) throw DimensionMismatch("cone_invariance_check: u0 size does not match operator");
    InvarianceReport report;
    if (n_samples <= 0) return report;

    std::mt19937_64 rng(seed);
    double worst = std::numeric_limits<double>::infinity();
    GridFunction image(b.size());
    GridFunction shifted(b.size());
    for (int s = 0; s < n_samples; ++s) {
        const GridFunction u = sample_cone_function(b.grid(), cone, rng);
        const GridFunction v = sample_cone_function(b.grid(), cone, rng);
        b.apply_into(u, v, image);
        for (std::size_t i = 0; i < image.size(); ++i) shifted[i] = image[i] + u0[i];
        const double margin = std::min(cone_margin(image, b.grid(), cone), cone_margin(shifted, b.grid(), cone));
        worst = std::min(worst, margin);
        if (margin >= -cone_tolerance)
            ++report.passes;
        else
            ++report.failures;
    }
    report.worst_margin = worst;
    return report;
}

double coercivity_lower_bound(const BilinearOperator& b, const ConeParams& cone) {
    const auto& kernel = b.kernel();
    if (!kernel.nonnegative) return 0.0;
    const Grid& grid = b.grid();
    const auto idx = subregion_nodes(grid, cone.subregion);
    if (idx.empty()) return 0.0;

    // Clip each node's quadrature cell to the subregion; the clipped weight
    // never exceeds the full weight, which keeps the bound rigorous.
    const std::size_t n = grid.size();
    std::vector<double> clipped(idx.size());
    for (std::size_t k = 0; k < idx.size(); ++k) {
        const std::size_t j = idx[k];
        if (n == 1) {
            clipped[k] = b.weights()[j];
            continue;
        }
        const double left = j == 0 ? grid.nodes[0] : 0.5 * (grid.nodes[j - 1] + grid.nodes[j]);
        const double right = j + 1 == n ? grid.nodes[n - 1] : 0.5 * (grid.nodes[j] + grid.nodes[j + 1]);
        const double inside = std::max(0.0, std::min(right, cone.subregion.hi) - std::max(left, cone.subregion.lo));
        const double fraction = right > left ? std::min(1.0, inside / (right - left)) : 0.0;
        clipped[k] = fraction * b.weights()[j];
    }

    double best = 0.0;
    for (std::size_t i : idx) {
        double acc = 0.0;
        for (std::size_t k = 0; k < idx.size(); ++k) acc += kernel.values(i, idx[k]) * clipped[k];
        best = std::max(best, acc);
    }
    return cone.gamma * cone.gamma * best;
}

double coercivity_estimate(const BilinearOperator& b, const ConeParams& cone, int n_samples, std::uint64_t seed) {
    if (n_samples <= 0) return b.norm_B();
    std::mt19937_64 rng(seed);
    double best = std::numeric_limits<double>::infinity();
    GridFunction image(b.size());
    for (int s = 0; s < n_samples; ++s) {
        GridFunction u = sample_cone_function(b.grid(), cone, rng);
        const double top = sup_norm(u);
        if (top == 0.0) continue;
        for (auto& x : u) x /= top;
        b.apply_into(u, u, image);
        best = std::min(best, sup_norm(image));
    }
    return std::isfinite(best) ? best : b.norm_B();
}

bool compression_inner_holds(double norm_B, double u0_norm, double rho1) noexcept {
    return norm_B * rho1 * rho1 + rho1 < u0_norm;
}

bool compression_outer_holds(double norm_B, double u0_norm, double rho2) noexcept {
    return u0_norm + norm_B * rho2 * rho2 < rho2;
}

bool expansion_holds(double coercivity_C, double u0_norm, double rho3) noexcept {
    return coercivity_C * rho3 * rho3 - rho3 > u0_norm;
}

Radii select_radii(double norm_B, double u0_norm, double coercivity_C) {
    Radii r;
    if (!(norm_B > 0.0) || !std::isfinite(norm_B)) {
        r.violated = "norm_B > 0";
        return r;
    }
    if (!(u0_norm >= 0.0) || !std::isfinite(u0_norm)) {
        r.violated = "|u0| >= 0";
        return r;
    }
    if (!(4.0 * norm_B * u0_norm < 1.0)) {
        r.violated = "4*B*|u0| < 1";
        return r;
    }
    if (!(coercivity_C > 0.0) || !std::isfinite(coercivity_C)) {
        r.violated = "coercivity C > 0";
        return r;
    }

    // Vertex of rho - B rho^2, the widest compression margin.
    r.rho2 = 1.0 / (2.0 * norm_B);

    r.rho3 = (1.0 + std::sqrt(1.0 + 4.0 * coercivity_C * u0_norm)) / coercivity_C;
    for (int k = 0; k < 64 && !(expansion_holds(coercivity_C, u0_norm, r.rho3) && r.rho3 > r.rho2); ++k)
        r.rho3 *= 2.0;
    if (!(expansion_holds(coercivity_C, u0_norm, r.rho3) && r.rho3 > r.rho2)) {
        r.violated = "C*rho3^2 - rho3 > |u0|";
        return r;
    }

    if (u0_norm == 0.0) {
        r.status = RadiiStatus::degenerate;
        return r;
    }

    r.rho1 = u0_norm / 2.0;
    for (int k = 0; k < 200 && !compression_inner_holds(norm_B, u0_norm, r.rho1); ++k) r.rho1 /= 2.0;
    if (!compression_inner_holds(norm_B, u0_norm, r.rho1)) {
        r.violated = "B*rho1^2 + rho1 < |u0|";
        return r;
    }
    if (!compression_outer_holds(norm_B, u0_norm, r.rho2)) {
        r.violated = "|u0| + B*rho2^2 < rho2";
        return r;
    }
    if (!(r.rho1 < r.rho2 && r.rho2 < r.rho3)) {
        r.violated = "rho1 < rho2 < rho3";
        return r;
    }
    r.status = RadiiStatus::feasible;
    return r;
}

Certificate build_certificate(const ProblemInstance& p, const CertificateOptions& options) {
    Certificate c;
    c.norm_B = p.b.norm_B();
    c.u0_norm = sup_norm(p.u0);
    c.coercivity_C = coercivity_lower_bound(p.b, p.cone);
    c.condition_ok = 4.0 * c.norm_B * c.u0_norm < 1.0;
    c.coercive_ok = c.coercivity_C > 0.0;
    c.degenerate = c.u0_norm == 0.0;
    c.u0_in_cone = cone_membership(p.u0, p.grid(), p.cone, cone_tolerance);
    c.invariance_pass_rate =
        cone_invariance_check(p.b, p.u0, p.cone, options.invariance_samples, options.seed).pass_rate();

    const Radii radii = select_radii(c.norm_B, c.u0_norm, c.coercivity_C);
    c.radii_status = radii.status;
    c.radii_violation = radii.violated;
    c.rho1 = radii.rho1;
    c.rho2 = radii.rho2;
    c.rho3 = radii.rho3;
    if (radii.status != RadiiStatus::infeasible) {
        c.compression_margin = c.rho2 - c.norm_B * c.rho2 * c.rho2 - c.u0_norm;
        c.expansion_margin = c.coercivity_C * c.rho3 * c.rho3 - c.rho3 - c.u0_norm;
    }
    return c;
}

}  // namespace hamcert
