#pragma once

#include "hamcert/cone_params.hpp"
#include "hamcert/hammerstein.hpp"

#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

namespace hamcert {

/// Absolute tolerance for every cone-membership decision in the library.
inline constexpr double cone_tolerance = 1e-10;

/// Indices of grid nodes inside the closed subregion.
std::vector<std::size_t> subregion_nodes(const Grid& grid, Subregion sub);

bool cone_membership(std::span<const double> u, const Grid& grid, const ConeParams& cone, double tol);

/// min_U u - gamma * sup u; nonnegative for cone members.
double cone_margin(std::span<const double> u, const Grid& grid, const ConeParams& cone);

struct HarnackResult {
    double gamma = 0.0;
    bool zero_kernel = false;  // every column vanished; gamma reported as 0
};

/// Largest gamma with min_{i in U} G(i,j) >= gamma * max_i G(i,j) for every
/// column j with nonzero max.
HarnackResult harnack_gamma(const KernelMatrix& kernel, Subregion sub);

/// Random nonnegative grid function lifted into the cone.
GridFunction sample_cone_function(const Grid& grid, const ConeParams& cone, std::mt19937_64& rng);

struct InvarianceReport {
    int passes = 0;
    int failures = 0;
    double worst_margin = 0.0;  // most negative cone margin seen (0 when no samples)

    int samples() const noexcept { return passes + failures; }
    double pass_rate() const noexcept { return samples() == 0 ? 1.0 : static_cast<double>(passes) / samples(); }
};

/// Checks b(u,v) in P and b(u,v) + u0 in P on random cone pairs.
InvarianceReport cone_invariance_check(const BilinearOperator& b, std::span<const double> u0, const ConeParams& cone,
                                       int n_samples, std::uint64_t seed);

/// gamma^2 * max_{i in U} sum_{j in U} G(i,j) w~_j, where w~ is the trapezoid
/// rule restricted to U, capped by the global weights. Any cone element with
/// unit sup norm satisfies |b(u,u)| >= this value.
double coercivity_lower_bound(const BilinearOperator& b, const ConeParams& cone);

/// Minimum of |b(u,u)| over sampled unit-norm cone elements (an upper
/// estimate of the infimum).
double coercivity_estimate(const BilinearOperator& b, const ConeParams& cone, int n_samples, std::uint64_t seed);

enum class RadiiStatus { feasible, infeasible, degenerate };

/// Radii of the compression shell rho1 < |u| < rho2 and the expansion shell
/// rho2 < |u| < rho3.
struct Radii {
    RadiiStatus status = RadiiStatus::infeasible;
    double rho1 = 0.0;
    double rho2 = 0.0;
    double rho3 = 0.0;
    std::string violated;  // empty unless infeasible

    bool feasible() const noexcept { return status == RadiiStatus::feasible; }
};

Radii select_radii(double norm_B, double u0_norm, double coercivity_C);

/// Strict checks of the three shell inequalities:
///   B rho1^2 + rho1 < |u0|,  |u0| + B rho2^2 < rho2,  C rho3^2 - rho3 > |u0|.
bool compression_inner_holds(double norm_B, double u0_norm, double rho1) noexcept;
bool compression_outer_holds(double norm_B, double u0_norm, double rho2) noexcept;
bool expansion_holds(double coercivity_C, double u0_norm, double rho3) noexcept;

struct Certificate {
    double norm_B = 0.0;
    double u0_norm = 0.0;
    double coercivity_C = 0.0;
    double rho1 = 0.0;
    double rho2 = 0.0;
    double rho3 = 0.0;
    bool condition_ok = false;  // 4 B |u0| < 1
    bool coercive_ok = false;   // C > 0 and nonnegative kernel
    bool u0_in_cone = false;
    double invariance_pass_rate = 0.0;
    bool degenerate = false;  // u0 == 0

    RadiiStatus radii_status = RadiiStatus::infeasible;
    std::string radii_violation;
    double compression_margin = 0.0;  // rho2 - B rho2^2 - |u0|
    double expansion_margin = 0.0;    // C rho3^2 - rho3 - |u0|

    bool passed() const noexcept { return condition_ok && coercive_ok; }
};

struct CertificateOptions {
    int invariance_samples = 500;
    std::uint64_t seed = 0;
};

Certificate build_certificate(const ProblemInstance& p, const CertificateOptions& options = {});

}  // namespace hamcert
