#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace hamcert {

/// Square row-major matrix of doubles.
class DenseMatrix {
public:
    DenseMatrix() = default;
    explicit DenseMatrix(std::size_t n, double fill = 0.0) : n_(n), data_(n * n, fill) {}

    std::size_t size() const noexcept { return n_; }

    double& operator()(std::size_t i, std::size_t j) noexcept { return data_[i * n_ + j]; }
    double operator()(std::size_t i, std::size_t j) const noexcept { return data_[i * n_ + j]; }

    std::span<double> row(std::size_t i) noexcept { return {data_.data() + i * n_, n_}; }
    std::span<const double> row(std::size_t i) const noexcept { return {data_.data() + i * n_, n_}; }

    std::span<double> data() noexcept { return data_; }
    std::span<const double> data() const noexcept { return data_; }

    friend bool operator==(const DenseMatrix&, const DenseMatrix&) = default;

private:
    std::size_t n_ = 0;
    std::vector<double> data_;
};

// Dense kernels behind the Nystrom operator. Every routine exists twice: a
// plain loop in `serial` (the reference used by tests) and an OpenMP version
// in `omp`. The OpenMP versions parallelize over rows only and keep each
// row's inner sum in serial order, so both produce bit-identical results for
// any thread count.
namespace dense {

namespace serial {

/// out[i] = sum_j G(i,j) * coeff[j]
void weighted_matvec(const DenseMatrix& g, std::span<const double> coeff, std::span<double> out);

/// out[i] = sum_j G(i,j) * (w[j] * (u[j] * v[j]))
void bilinear(const DenseMatrix& g, std::span<const double> w, std::span<const double> u,
              std::span<const double> v, std::span<double> out);

/// out[i] = sum_j |G(i,j)| * w[j]
void abs_row_sums(const DenseMatrix& g, std::span<const double> w, std::span<double> out);

/// J(i,j) = delta_ij - 2 * G(i,j) * w[j] * u[j]
void newton_jacobian(const DenseMatrix& g, std::span<const double> w, std::span<const double> u, DenseMatrix& jac);

}  // namespace serial

namespace omp {

void weighted_matvec(const DenseMatrix& g, std::span<const double> coeff, std::span<double> out);
void bilinear(const DenseMatrix& g, std::span<const double> w, std::span<const double> u,
              std::span<const double> v, std::span<double> out);
void abs_row_sums(const DenseMatrix& g, std::span<const double> w, std::span<double> out);
void newton_jacobian(const DenseMatrix& g, std::span<const double> w, std::span<const double> u, DenseMatrix& jac);

}  // namespace omp

// Library-wide entry points dispatch to the OpenMP kernels.
using omp::abs_row_sums;
using omp::bilinear;
using omp::newton_jacobian;
using omp::weighted_matvec;

/// Fills m(i,j) = fn(i,j) for all i,j. fn must be safe to call concurrently.
template <typename Fn>
void fill_serial(DenseMatrix& m, Fn&& fn) {
    const std::size_t n = m.size();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) m(i, j) = fn(i, j);
}

template <typename Fn>
void fill(DenseMatrix& m, Fn&& fn) {
    const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(m.size());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i)
        for (std::ptrdiff_t j = 0; j < n; ++j)
            m(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) =
                fn(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
}

}  // namespace dense
}  // namespace hamcert
