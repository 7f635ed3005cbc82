#include "hamcert/kernels.hpp"

#include "hamcert/errors.hpp"
#include "hamcert/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>

namespace hamcert {

namespace {

constexpr double symmetry_tol = 1e-10;
constexpr double nonnegative_tol = 1e-12;

bool same_domain(double a, double b, double scale) { return std::abs(a - b) <= 1e-12 * std::max(1.0, scale); }

// Accepts values that overshoot [lo, hi] by rounding noise and clamps them.
double clamp_to_domain(double x, double lo, double hi, const char* what) {
    const double slack = 1e-12 * std::max({1.0, std::abs(lo), std::abs(hi)});
    if (!(x >= lo - slack && x <= hi + slack))
        throw DomainError(std::string(what) + ": argument " + std::to_string(x) + " outside [" + std::to_string(lo) +
                          ", " + std::to_string(hi) + "]");
    return std::clamp(x, lo, hi);
}

// Radial potential with phi' = r^(1-d).
double radial_phi(double r, int dim) {
    if (dim == 2) return std::log(r);
    return std::pow(r, 2 - dim) / (2 - dim);
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

double parse_double(std::string_view token, const std::string& context) {
    token = trim(token);
    if (!token.empty() && token.front() == '+') token.remove_prefix(1);
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc{} || ptr != token.data() + token.size() || token.empty())
        throw FormatError(context + ": cannot parse number '" + std::string(token) + "'");
    if (!std::isfinite(value)) throw FormatError(context + ": non-finite entry '" + std::string(token) + "'");
    return value;
}

}  // namespace

std::string_view rule_name(QuadratureRule rule) noexcept {
    return rule == QuadratureRule::simpson ? "simpson" : "trapezoid";
}

QuadratureRule parse_rule(std::string_view name) {
    if (name == "trapezoid") return QuadratureRule::trapezoid;
    if (name == "simpson") return QuadratureRule::simpson;
    throw InvalidArgument("unknown quadrature rule '" + std::string(name) + "'");
}

Grid Grid::custom(std::vector<double> nodes, std::vector<double> weights) {
    if (nodes.empty()) throw InvalidArgument("grid: no nodes");
    if (nodes.size() != weights.size()) throw DimensionMismatch("grid: nodes and weights differ in length");
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        if (!std::isfinite(nodes[i]) || !std::isfinite(weights[i])) throw InvalidArgument("grid: non-finite entry");
        if (weights[i] < 0.0) throw InvalidArgument("grid: negative weight");
        if (i > 0 && !(nodes[i] > nodes[i - 1])) throw InvalidArgument("grid: nodes must be strictly increasing");
    }
    Grid g;
    g.nodes = std::move(nodes);
    g.weights = std::move(weights);
    return g;
}

Grid make_grid(std::size_t n, double lo, double hi, QuadratureRule rule) {
    if (n < 2) throw InvalidArgument("make_grid: need n >= 2");
    if (!(lo < hi)) throw InvalidArgument("make_grid: need lo < hi");
    if (rule == QuadratureRule::simpson && n % 2 == 0) throw InvalidArgument("make_grid: simpson needs odd n");

    Grid g;
    g.rule = rule;
    g.nodes.resize(n);
    g.weights.resize(n);
    const double h = (hi - lo) / static_cast<double>(n - 1);
    for (std::size_t i = 0; i < n; ++i) g.nodes[i] = lo + static_cast<double>(i) * h;
    g.nodes.back() = hi;

    if (rule == QuadratureRule::trapezoid) {
        std::fill(g.weights.begin(), g.weights.end(), h);
        g.weights.front() = g.weights.back() = h / 2.0;
    } else {
        for (std::size_t i = 0; i < n; ++i) g.weights[i] = (i % 2 == 1 ? 4.0 : 2.0) * h / 3.0;
        g.weights.front() = g.weights.back() = h / 3.0;
    }
    return g;
}

AnnulusRadial AnnulusRadial::make(double inner, double outer, int dim) {
    if (!(inner > 0.0 && inner < outer && std::isfinite(outer)))
        throw InvalidArgument("annulus: need 0 < inner < outer");
    if (dim < 2) throw InvalidArgument("annulus: need dim >= 2");
    return {inner, outer, dim};
}

KernelMatrix KernelMatrix::from_values(DenseMatrix values, Grid grid, std::vector<double> measure) {
    const std::size_t n = values.size();
    if (grid.size() != n) throw DimensionMismatch("kernel: matrix size does not match grid");
    if (measure.empty()) measure.assign(n, 1.0);
    if (measure.size() != n) throw DimensionMismatch("kernel: measure size does not match grid");

    KernelMatrix k;
    k.symmetric = true;
    k.nonnegative = true;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const double v = values(i, j);
            if (v < -nonnegative_tol) k.nonnegative = false;
            if (j > i && std::abs(v - values(j, i)) > symmetry_tol) k.symmetric = false;
        }
    }
    k.values = std::move(values);
    k.grid = std::move(grid);
    k.measure = std::move(measure);
    return k;
}

double interval_green(double t, double s) {
    if (!(t >= 0.0 && t <= 1.0 && s >= 0.0 && s <= 1.0))
        throw DomainError("interval_green: (" + std::to_string(t) + ", " + std::to_string(s) + ") outside unit square");
    return t <= s ? t * (1.0 - s) : s * (1.0 - t);
}

double annulus_radial_green(double r, double rho, const AnnulusRadial& spec) {
    r = clamp_to_domain(r, spec.inner, spec.outer, "annulus_radial_green");
    rho = clamp_to_domain(rho, spec.inner, spec.outer, "annulus_radial_green");

    const double phi_in = radial_phi(spec.inner, spec.dim);
    const double phi_out = radial_phi(spec.outer, spec.dim);
    const double lo = std::min(r, rho);
    const double hi = std::max(r, rho);
    const double u1 = radial_phi(lo, spec.dim) - phi_in;
    const double u2 = phi_out - radial_phi(hi, spec.dim);

    // Weighted Wronskian p (u1 u2' - u1' u2) is constant (Abel); evaluate its
    // magnitude once at the midpoint.
    const double mid = 0.5 * (spec.inner + spec.outer);
    const double p = std::pow(mid, spec.dim - 1);
    const double dphi = std::pow(mid, 1 - spec.dim);
    const double wronskian = p * dphi * ((radial_phi(mid, spec.dim) - phi_in) + (phi_out - radial_phi(mid, spec.dim)));
    return std::max(0.0, u1 * u2 / wronskian);
}

KernelMatrix kernel_matrix(const KernelSpec& spec, const Grid& grid) {
    const std::size_t n = grid.size();
    if (n == 0) throw InvalidArgument("kernel_matrix: empty grid");

    if (std::holds_alternative<IntervalDirichlet>(spec)) {
        if (!same_domain(grid.lo(), 0.0, 1.0) || !same_domain(grid.hi(), 1.0, 1.0))
            throw DimensionMismatch("kernel_matrix: interval kernel needs a grid on [0, 1]");
        DenseMatrix g(n);
        dense::fill(g, [&](std::size_t i, std::size_t j) {
            return interval_green(std::clamp(grid.nodes[i], 0.0, 1.0), std::clamp(grid.nodes[j], 0.0, 1.0));
        });
        return KernelMatrix::from_values(std::move(g), grid);
    }

    if (const auto* annulus = std::get_if<AnnulusRadial>(&spec)) {
        if (!same_domain(grid.lo(), annulus->inner, annulus->outer) ||
            !same_domain(grid.hi(), annulus->outer, annulus->outer))
            throw DimensionMismatch("kernel_matrix: annulus kernel needs a grid on [inner, outer]");
        DenseMatrix g(n);
        dense::fill(g, [&](std::size_t i, std::size_t j) {
            return annulus_radial_green(grid.nodes[i], grid.nodes[j], *annulus);
        });
        std::vector<double> measure(n);
        for (std::size_t i = 0; i < n; ++i) measure[i] = std::pow(grid.nodes[i], annulus->dim - 1);
        return KernelMatrix::from_values(std::move(g), grid, std::move(measure));
    }

    const auto& file = std::get<FromFile>(spec);
    KernelMatrix loaded = load_kernel(file.path);
    if (loaded.size() != n) throw DimensionMismatch("kernel_matrix: file kernel size does not match grid");
    for (std::size_t i = 0; i < n; ++i)
        if (!same_domain(loaded.grid.nodes[i], grid.nodes[i], std::abs(grid.hi())))
            throw DimensionMismatch("kernel_matrix: file kernel grid does not match requested grid");
    return loaded;
}

std::string format_kernel(const KernelMatrix& kernel) {
    const std::size_t n = kernel.size();
    std::string out = "# grid: lo=" + io::format_double(kernel.grid.lo()) + " hi=" + io::format_double(kernel.grid.hi()) +
                      " n=" + std::to_string(n) + " rule=" + std::string(rule_name(kernel.grid.rule)) + "\n";
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (j) out += ',';
            out += io::format_double(kernel.values(i, j));
        }
        out += '\n';
    }
    return out;
}

KernelMatrix parse_kernel(std::string_view text) {
    std::vector<std::string_view> lines;
    while (!text.empty()) {
        const auto nl = text.find('\n');
        lines.push_back(text.substr(0, nl));
        if (nl == std::string_view::npos) break;
        text.remove_prefix(nl + 1);
    }
    while (!lines.empty() && trim(lines.back()).empty()) lines.pop_back();
    if (lines.empty()) throw FormatError("kernel file: empty");

    const std::string_view prefix = "# grid:";
    std::string_view header = trim(lines.front());
    if (header.substr(0, prefix.size()) != prefix) throw FormatError("kernel file: missing '# grid:' header");
    header.remove_prefix(prefix.size());

    std::optional<double> lo, hi;
    std::optional<long> n;
    std::optional<QuadratureRule> rule;
    std::istringstream tokens{std::string(header)};
    for (std::string tok; tokens >> tok;) {
        const auto eq = tok.find('=');
        if (eq == std::string::npos) throw FormatError("kernel file: malformed header token '" + tok + "'");
        const std::string key = tok.substr(0, eq);
        const std::string value = tok.substr(eq + 1);
        if (key == "lo") {
            lo = parse_double(value, "kernel header lo");
        } else if (key == "hi") {
            hi = parse_double(value, "kernel header hi");
        } else if (key == "n") {
            long parsed = 0;
            const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), parsed);
            if (ec != std::errc{} || ptr != value.data() + value.size() || parsed < 1)
                throw FormatError("kernel header: bad n '" + value + "'");
            n = parsed;
        } else if (key == "rule") {
            try {
                rule = parse_rule(value);
            } catch (const InvalidArgument& e) {
                throw FormatError(std::string("kernel header: ") + e.what());
            }
        } else {
            throw FormatError("kernel header: unknown key '" + key + "'");
        }
    }
    if (!lo || !hi || !n || !rule) throw FormatError("kernel header: need lo, hi, n and rule");

    const auto size = static_cast<std::size_t>(*n);
    if (lines.size() - 1 != size)
        throw FormatError("kernel file: header declares n=" + std::to_string(size) + " but found " +
                          std::to_string(lines.size() - 1) + " rows");

    DenseMatrix values(size);
    for (std::size_t i = 0; i < size; ++i) {
        std::string_view row = lines[i + 1];
        std::size_t j = 0;
        while (true) {
            const auto comma = row.find(',');
            if (j >= size) throw FormatError("kernel file: row " + std::to_string(i) + " has more than n entries");
            values(i, j++) = parse_double(row.substr(0, comma), "kernel row " + std::to_string(i));
            if (comma == std::string_view::npos) break;
            row.remove_prefix(comma + 1);
        }
        if (j != size)
            throw FormatError("kernel file: row " + std::to_string(i) + " has " + std::to_string(j) +
                              " entries, expected " + std::to_string(size) + " (matrix must be square)");
    }

    Grid grid;
    try {
        grid = size >= 2 ? make_grid(size, *lo, *hi, *rule) : Grid::custom({*lo}, {*hi - *lo});
    } catch (const InvalidArgument& e) {
        throw FormatError(std::string("kernel header: ") + e.what());
    }
    return KernelMatrix::from_values(std::move(values), std::move(grid));
}

KernelMatrix load_kernel(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError("cannot open kernel file " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_kernel(buf.str());
}

void save_kernel(const std::filesystem::path& path, const KernelMatrix& kernel) {
    io::write_file_atomic(path, format_kernel(kernel));
}

double radial_operator_defect(const KernelMatrix& kernel, const AnnulusRadial& spec) {
    const auto& nodes = kernel.grid.nodes;
    const std::size_t n = nodes.size();
    if (n < 3) return 0.0;
    const double h = nodes[1] - nodes[0];
    for (std::size_t i = 1; i + 1 < n; ++i)
        if (std::abs((nodes[i + 1] - nodes[i]) - h) > 1e-9 * h)
            throw InvalidArgument("radial_operator_defect: grid is not uniform");

    const auto& g = kernel.values;
    double worst = 0.0;
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const double p_plus = std::pow(nodes[i] + 0.5 * h, spec.dim - 1);
        const double p_minus = std::pow(nodes[i] - 0.5 * h, spec.dim - 1);
        for (std::size_t j = 1; j + 1 < n; ++j) {
            const double lh = -(p_plus * (g(i + 1, j) - g(i, j)) - p_minus * (g(i, j) - g(i - 1, j))) / (h * h);
            const double target = i == j ? 1.0 : 0.0;
            worst = std::max(worst, std::abs(h * lh - target));
        }
    }
    return worst;
}

}  // namespace hamcert
