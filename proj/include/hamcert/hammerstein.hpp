#pragma once

#include "hamcert/cone_params.hpp"
#include "hamcert/kernels.hpp"

#include <span>
#include <vector>

namespace hamcert {

using GridFunction = std::vector<double>;

double sup_norm(std::span<const double> u) noexcept;

/// Discrete form (b(u,v))_i = sum_j G(i,j) w_j u_j v_j, with the measure
/// density folded into w.
class BilinearOperator {
public:
    BilinearOperator(KernelMatrix kernel, std::vector<double> weights);

    const KernelMatrix& kernel() const noexcept { return kernel_; }
    const Grid& grid() const noexcept { return kernel_.grid; }
    std::span<const double> weights() const noexcept { return weights_; }
    std::size_t size() const noexcept { return weights_.size(); }

    /// max_i sum_j |G(i,j)| w_j: the sup-norm bound |b(u,v)| <= B |u| |v|,
    /// attained at u = v = 1 for nonnegative kernels.
    double norm_B() const noexcept { return norm_B_; }

    GridFunction apply(std::span<const double> u, std::span<const double> v) const;
    void apply_into(std::span<const double> u, std::span<const double> v, std::span<double> out) const;

private:
    KernelMatrix kernel_;
    std::vector<double> weights_;
    double norm_B_ = 0.0;
};

BilinearOperator assemble(const KernelMatrix& kernel, const Grid& grid);

GridFunction bilinear_apply(const BilinearOperator& b, std::span<const double> u, std::span<const double> v);

/// u0_i = sum_j G(i,j) w_j m_j f_j.
GridFunction compute_u0(const KernelMatrix& kernel, const Grid& grid, std::span<const double> f);

struct ProblemInstance {
    BilinearOperator b;
    GridFunction u0;
    GridFunction f;
    ConeParams cone;

    static ProblemInstance make(BilinearOperator b, GridFunction f, ConeParams cone);
    const Grid& grid() const noexcept { return b.grid(); }
};

/// T u = b(u,u) + u0.
GridFunction apply_T(const ProblemInstance& p, std::span<const double> u);

/// max_i |u_i - (b(u,u)_i + u0_i)|.
double residual(const ProblemInstance& p, std::span<const double> u);

}  // namespace hamcert
