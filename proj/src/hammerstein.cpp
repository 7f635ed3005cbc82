#include "hamcert/hammerstein.hpp"

#include "hamcert/errors.hpp"

#include <algorithm>
#include <cmath>

namespace hamcert {

namespace {

void require_size(std::size_t got, std::size_t want, const char* what) {
    if (got != want)
        throw DimensionMismatch(std::string(what) + ": expected " + std::to_string(want) + " values, got " +
                                std::to_string(got));
}

}  // namespace

double sup_norm(std::span<const double> u) noexcept {
    double m = 0.0;
    for (double x : u) m = std::max(m, std::abs(x));
    return m;
}

BilinearOperator::BilinearOperator(KernelMatrix kernel, std::vector<double> weights)
    : kernel_(std::move(kernel)), weights_(std::move(weights)) {
    require_size(weights_.size(), kernel_.size(), "BilinearOperator weights");
    std::vector<double> sums(weights_.size());
    dense::abs_row_sums(kernel_.values, weights_, sums);
    norm_B_ = sums.empty() ? 0.0 : *std::max_element(sums.begin(), sums.end());
}

void BilinearOperator::apply_into(std::span<const double> u, std::span<const double> v, std::span<double> out) const {
    require_size(u.size(), size(), "bilinear_apply u");
    require_size(v.size(), size(), "bilinear_apply v");
    require_size(out.size(), size(), "bilinear_apply out");
    dense::bilinear(kernel_.values, weights_, u, v, out);
}

GridFunction BilinearOperator::apply(std::span<const double> u, std::span<const double> v) const {
    GridFunction out(size());
    apply_into(u, v, out);
    return out;
}

BilinearOperator assemble(const KernelMatrix& kernel, const Grid& grid) {
    require_size(grid.size(), kernel.size(), "assemble grid");
    std::vector<double> weights(grid.size());
    for (std::size_t j = 0; j < weights.size(); ++j) weights[j] = grid.weights[j] * kernel.measure[j];
    return BilinearOperator(kernel, std::move(weights));
}

GridFunction bilinear_apply(const BilinearOperator& b, std::span<const double> u, std::span<const double> v) {
    return b.apply(u, v);
}

GridFunction compute_u0(const KernelMatrix& kernel, const Grid& grid, std::span<const double> f) {
    require_size(grid.size(), kernel.size(), "compute_u0 grid");
    require_size(f.size(), kernel.size(), "compute_u0 f");
    std::vector<double> coeff(f.size());
    for (std::size_t j = 0; j < coeff.size(); ++j) coeff[j] = grid.weights[j] * kernel.measure[j] * f[j];
    GridFunction u0(f.size());
    dense::weighted_matvec(kernel.values, coeff, u0);
    return u0;
}

ProblemInstance ProblemInstance::make(BilinearOperator b, GridFunction f, ConeParams cone) {
    require_size(f.size(), b.size(), "ProblemInstance f");
    GridFunction u0 = compute_u0(b.kernel(), b.grid(), f);
    return ProblemInstance{std::move(b), std::move(u0), std::move(f), cone};
}

GridFunction apply_T(const ProblemInstance& p, std::span<const double> u) {
    GridFunction out = p.b.apply(u, u);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += p.u0[i];
    return out;
}

double residual(const ProblemInstance& p, std::span<const double> u) {
    const GridFunction tu = apply_T(p, u);
    double worst = 0.0;
    for (std::size_t i = 0; i < tu.size(); ++i) worst = std::max(worst, std::abs(u[i] - tu[i]));
    return worst;
}

}  // namespace hamcert
