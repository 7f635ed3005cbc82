#pragma once

#include "hamcert/dense.hpp"

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace hamcert {

enum class QuadratureRule { trapezoid, simpson };

std::string_view rule_name(QuadratureRule rule) noexcept;
/// Parses "trapezoid" or "simpson"; throws InvalidArgument otherwise.
QuadratureRule parse_rule(std::string_view name);

/// Quadrature grid: strictly increasing nodes with nonnegative weights.
struct Grid {
    std::vector<double> nodes;
    std::vector<double> weights;
    QuadratureRule rule = QuadratureRule::trapezoid;

    std::size_t size() const noexcept { return nodes.size(); }
    double lo() const noexcept { return nodes.front(); }
    double hi() const noexcept { return nodes.back(); }

    /// Arbitrary nodes/weights (e.g. the one-node scalar reduction). Validates
    /// ordering, nonnegativity and matching lengths.
    static Grid custom(std::vector<double> nodes, std::vector<double> weights);
};

/// Uniform grid on [lo, hi] with composite trapezoid or Simpson weights.
/// Simpson needs odd n.
Grid make_grid(std::size_t n, double lo, double hi, QuadratureRule rule);

struct IntervalDirichlet {};

/// Radial Dirichlet problem on the annulus inner < r < outer in R^dim.
struct AnnulusRadial {
    double inner;
    double outer;
    int dim;

    static AnnulusRadial make(double inner, double outer, int dim);
};

struct FromFile {
    std::filesystem::path path;
};

using KernelSpec = std::variant<IntervalDirichlet, AnnulusRadial, FromFile>;

/// Green kernel sampled on a grid. `measure` is the density of the
/// integration measure per node (r^(dim-1) for radial kernels, 1 otherwise).
struct KernelMatrix {
    DenseMatrix values;
    Grid grid;
    std::vector<double> measure;
    bool symmetric = false;
    bool nonnegative = false;

    std::size_t size() const noexcept { return values.size(); }

    /// Builds from raw values and computes the symmetry/positivity flags.
    static KernelMatrix from_values(DenseMatrix values, Grid grid, std::vector<double> measure = {});
};

/// G(t,s) = t(1-s) for t <= s, s(1-t) otherwise, on the unit square.
double interval_green(double t, double s);

/// Green function of -(r^(d-1) u')' with zero values at inner and outer.
double annulus_radial_green(double r, double rho, const AnnulusRadial& spec);

KernelMatrix kernel_matrix(const KernelSpec& spec, const Grid& grid);

/// Reads the kernel file format:
///   # grid: lo=<float> hi=<float> n=<int> rule=<name>
/// followed by n rows of n comma-separated floats.
KernelMatrix load_kernel(const std::filesystem::path& path);
void save_kernel(const std::filesystem::path& path, const KernelMatrix& kernel);
std::string format_kernel(const KernelMatrix& kernel);
KernelMatrix parse_kernel(std::string_view text);

/// Applies the centered finite-difference form of -(r^(d-1) u')' to every
/// interior column of a radial kernel matrix and returns
///   max_{interior i, j} | h * (L_h G)(i,j) - delta_ij |,
/// which tends to zero as the grid is refined. Needs a uniform grid.
double radial_operator_defect(const KernelMatrix& kernel, const AnnulusRadial& spec);

}  // namespace hamcert
