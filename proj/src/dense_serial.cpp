#include "hamcert/dense.hpp"

#include <cmath>

namespace hamcert::dense::serial {

void weighted_matvec(const DenseMatrix& g, std::span<const double> coeff, std::span<double> out) {
    const std::size_t n = g.size();
    for (std::size_t i = 0; i < n; ++i) {
        const auto row = g.row(i);
        double acc = 0.0;
        for (std::size_t j = 0; j < n; ++j) acc += row[j] * coeff[j];
        out[i] = acc;
    }
}

void bilinear(const DenseMatrix& g, std::span<const double> w, std::span<const double> u, std::span<const double> v,
              std::span<double> out) {
    const std::size_t n = g.size();
    for (std::size_t i = 0; i < n; ++i) {
        const auto row = g.row(i);
        double acc = 0.0;
        for (std::size_t j = 0; j < n; ++j) acc += row[j] * (w[j] * (u[j] * v[j]));
        out[i] = acc;
    }
}

void abs_row_sums(const DenseMatrix& g, std::span<const double> w, std::span<double> out) {
    const std::size_t n = g.size();
    for (std::size_t i = 0; i < n; ++i) {
        const auto row = g.row(i);
        double acc = 0.0;
        for (std::size_t j = 0; j < n; ++j) acc += std::abs(row[j]) * w[j];
        out[i] = acc;
    }
}

void newton_jacobian(const DenseMatrix& g, std::span<const double> w, std::span<const double> u, DenseMatrix& jac) {
    const std::size_t n = g.size();
    for (std::size_t i = 0; i < n; ++i) {
        const auto row = g.row(i);
        auto out = jac.row(i);
        for (std::size_t j = 0; j < n; ++j) out[j] = -2.0 * row[j] * (w[j] * u[j]);
        out[i] += 1.0;
    }
}

}  // namespace hamcert::dense::serial
