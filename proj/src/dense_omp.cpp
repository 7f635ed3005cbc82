#include "hamcert/dense.hpp"

#include <cmath>
#include <cstddef>

namespace hamcert::dense::omp {

// Same arithmetic as the serial reference, row loop distributed over threads.

void weighted_matvec(const DenseMatrix& g, std::span<const double> coeff, std::span<double> out) {
    const auto n = static_cast<std::ptrdiff_t>(g.size());
    const double* c = coeff.data();
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        const double* row = g.row(static_cast<std::size_t>(i)).data();
        double acc = 0.0;
        for (std::ptrdiff_t j = 0; j < n; ++j) acc += row[j] * c[j];
        out[static_cast<std::size_t>(i)] = acc;
    }
}

void bilinear(const DenseMatrix& g, std::span<const double> w, std::span<const double> u, std::span<const double> v,
              std::span<double> out) {
    const auto n = static_cast<std::ptrdiff_t>(g.size());
    const double* wp = w.data();
    const double* up = u.data();
    const double* vp = v.data();
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        const double* row = g.row(static_cast<std::size_t>(i)).data();
        double acc = 0.0;
        for (std::ptrdiff_t j = 0; j < n; ++j) acc += row[j] * (wp[j] * (up[j] * vp[j]));
        out[static_cast<std::size_t>(i)] = acc;
    }
}

void abs_row_sums(const DenseMatrix& g, std::span<const double> w, std::span<double> out) {
    const auto n = static_cast<std::ptrdiff_t>(g.size());
    const double* wp = w.data();
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        const double* row = g.row(static_cast<std::size_t>(i)).data();
        double acc = 0.0;
        for (std::ptrdiff_t j = 0; j < n; ++j) acc += std::abs(row[j]) * wp[j];
        out[static_cast<std::size_t>(i)] = acc;
    }
}

void newton_jacobian(const DenseMatrix& g, std::span<const double> w, std::span<const double> u, DenseMatrix& jac) {
    const auto n = static_cast<std::ptrdiff_t>(g.size());
    const double* wp = w.data();
    const double* up = u.data();
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        const double* row = g.row(static_cast<std::size_t>(i)).data();
        double* out = jac.row(static_cast<std::size_t>(i)).data();
        for (std::ptrdiff_t j = 0; j < n; ++j) out[j] = -2.0 * row[j] * (wp[j] * up[j]);
        out[i] += 1.0;
    }
}

}  // namespace hamcert::dense::omp
