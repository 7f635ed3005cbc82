#include "hamcert/cli.hpp"

#include "hamcert/cone.hpp"
#include "hamcert/errors.hpp"
#include "hamcert/io.hpp"
#include "hamcert/kernels.hpp"
#include "hamcert/scalar_oracle.hpp"
#include "hamcert/solvers.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <ostream>

namespace hamcert::cli {

namespace {

using nlohmann::json;

ProblemKind parse_problem(const std::string& name) {
    if (name == "interval") return ProblemKind::interval;
    if (name == "annulus") return ProblemKind::annulus;
    if (name == "kernel-file") return ProblemKind::kernel_file;
    throw InvalidArgument("unknown problem '" + name + "' (expected interval, annulus or kernel-file)");
}

// Everything derived from a RunConfig.
struct Setup {
    KernelMatrix kernel;
    std::optional<AnnulusRadial> annulus;
    HarnackResult harnack;
    Subregion subregion{};
    ProblemInstance problem;
};

Setup build_setup(const RunConfig& config) {
    validate(config);
    const QuadratureRule rule = parse_rule(config.rule);
    KernelMatrix kernel;
    std::optional<AnnulusRadial> annulus;
    switch (config.problem) {
        case ProblemKind::interval:
            kernel = kernel_matrix(IntervalDirichlet{}, make_grid(static_cast<std::size_t>(config.grid_n), 0.0, 1.0, rule));
            break;
        case ProblemKind::annulus: {
            annulus = AnnulusRadial::make(config.inner, config.outer, config.dim);
            kernel = kernel_matrix(*annulus,
                                   make_grid(static_cast<std::size_t>(config.grid_n), annulus->inner, annulus->outer, rule));
            break;
        }
        case ProblemKind::kernel_file:
            kernel = load_kernel(config.kernel_path);
            break;
    }
    const Grid& grid = kernel.grid;
    if (grid.size() < 3) throw InvalidArgument("problem grid needs at least 3 nodes");

    GridFunction f(grid.size(), config.source_const.value_or(1.0));
    if (!config.source_file.empty()) {
        const auto nv = io::read_grid_function_csv(config.source_file);
        if (nv.values.size() != grid.size())
            throw FormatError("source file has " + std::to_string(nv.values.size()) + " rows, grid has " +
                              std::to_string(grid.size()) + " nodes");
        for (std::size_t i = 0; i < grid.size(); ++i)
            if (std::abs(nv.nodes[i] - grid.nodes[i]) > 1e-9 * std::max(1.0, std::abs(grid.hi())))
                throw FormatError("source file node " + std::to_string(i) + " does not match the grid");
        f = nv.values;
    }

    const double span = grid.hi() - grid.lo();
    const Subregion sub{config.cone_lo.value_or(grid.lo() + 0.25 * span), config.cone_hi.value_or(grid.lo() + 0.75 * span)};
    if (!(grid.lo() < sub.lo && sub.lo < sub.hi && sub.hi < grid.hi()))
        throw InvalidArgument("cone subregion must lie strictly inside the problem domain");
    const HarnackResult harnack = harnack_gamma(kernel, sub);
    const ConeParams cone = ConeParams::make(sub, harnack.gamma, grid.lo(), grid.hi());
    BilinearOperator b = assemble(kernel, grid);
    ProblemInstance problem = ProblemInstance::make(std::move(b), std::move(f), cone);
    return Setup{std::move(kernel), annulus, harnack, sub, std::move(problem)};
}

std::filesystem::path prepare_output_dir(const RunConfig& config) {
    std::filesystem::create_directories(config.output_dir);
    return config.output_dir;
}

void print_certificate(std::ostream& out, const Certificate& c) {
    out << "norm_B: " << io::format_double(c.norm_B) << "\n"
        << "u0_norm: " << io::format_double(c.u0_norm) << "\n"
        << "4*B*|u0|: " << io::format_double(4.0 * c.norm_B * c.u0_norm) << "\n"
        << "coercivity_C: " << io::format_double(c.coercivity_C) << "\n"
        << "rho1 rho2 rho3: " << io::format_double(c.rho1) << " " << io::format_double(c.rho2) << " "
        << io::format_double(c.rho3) << "\n"
        << "compression_margin: " << io::format_double(c.compression_margin) << "\n"
        << "expansion_margin: " << io::format_double(c.expansion_margin) << "\n"
        << "condition_ok: " << std::boolalpha << c.condition_ok << "\n"
        << "coercive_ok: " << c.coercive_ok << "\n"
        << "u0_in_cone: " << c.u0_in_cone << "\n"
        << "invariance_pass_rate: " << io::format_double(c.invariance_pass_rate) << "\n"
        << "degenerate: " << c.degenerate << "\n";
    if (!c.radii_violation.empty()) out << "radii: infeasible (" << c.radii_violation << ")\n";
}

int cmd_scalar(double a, double u0, double tol, int max_iter, std::ostream& out, std::ostream& err) {
    ScalarProblem p{};
    try {
        p = ScalarProblem::make(a, u0);
    } catch (const InvalidArgument& e) {
        err << "usage error: " << e.what() << "\n";
        return exit_usage;
    }
    const bool ok = scalar_discriminant_ok(p);
    out << "4*a*u0: " << io::format_double(4.0 * p.a * p.u0) << "\n"
        << "discriminant_ok: " << std::boolalpha << ok << "\n";
    const auto roots = scalar_roots(p);
    if (!roots) {
        out << "no real roots\n";
        return exit_no_roots;
    }
    out << "roots: " << io::format_double(roots->lower) << " " << io::format_double(roots->upper) << "\n";
    if (roots->degenerate) {
        out << "double root (4*a*u0 = 1)\n";
        return exit_no_roots;
    }
    out << "picard: " << io::format_double(scalar_picard(p, tol, max_iter)) << "\n";
    return exit_ok;
}

int cmd_certify(const RunConfig& config, std::ostream& out) {
    const Setup setup = build_setup(config);
    const Certificate cert = build_certificate(setup.problem, {500, config.seed});
    const auto dir = prepare_output_dir(config);
    io::write_file_atomic(dir / "certificate.json", io::certificate_json(cert));
    print_certificate(out, cert);
    return cert.passed() ? exit_ok : exit_uncertified;
}

int cmd_solve(const RunConfig& config, std::ostream& out) {
    const Setup setup = build_setup(config);
    const Certificate cert = build_certificate(setup.problem, {500, config.seed});
    const TwoSolutions result = find_two(setup.problem, cert, {config.tol, config.max_iter});

    const auto dir = prepare_output_dir(config);
    io::write_file_atomic(dir / "certificate.json", io::certificate_json(cert));
    const auto& nodes = setup.problem.grid().nodes;
    if (result.small) io::write_file_atomic(dir / "small.csv", io::grid_function_csv(nodes, result.small->u));
    if (result.large) io::write_file_atomic(dir / "large.csv", io::grid_function_csv(nodes, result.large->u));

    std::string summary = "{\n";
    summary += std::string("  \"certified\": ") + (result.certified ? "true" : "false") + ",\n";
    summary += std::string("  \"complete\": ") + (result.complete ? "true" : "false") + ",\n";
    summary += "  \"small\": " + (result.small ? io::solution_json(*result.small) : std::string("null")) + ",\n";
    summary += "  \"large\": " + (result.large ? io::solution_json(*result.large) : std::string("null")) + ",\n";
    summary += "  \"diagnostics\": " + json(result.diagnostics).dump() + "\n}\n";
    io::write_file_atomic(dir / "summary.json", summary);

    print_certificate(out, cert);
    for (const auto* s : {&result.small, &result.large}) {
        if (*s)
            out << branch_name((*s)->branch) << ": sup_norm " << io::format_double((*s)->sup_norm) << " residual "
                << io::format_double((*s)->residual) << " in_cone " << std::boolalpha << (*s)->in_cone
                << " iterations " << (*s)->iterations << "\n";
    }
    for (const auto& d : result.diagnostics) out << "diagnostic: " << d << "\n";
    return result.certified && result.complete ? exit_ok : exit_partial;
}

int cmd_kernel_check(const RunConfig& config, std::ostream& out) {
    const Setup setup = build_setup(config);
    const auto& kernel = setup.kernel;
    const InvarianceReport inv =
        cone_invariance_check(setup.problem.b, setup.problem.u0, setup.problem.cone, 500, config.seed);

    json report;
    report["n"] = kernel.size();
    report["symmetric"] = kernel.symmetric;
    report["nonnegative"] = kernel.nonnegative;
    report["subregion"] = {io::format_double(setup.subregion.lo), io::format_double(setup.subregion.hi)};
    report["gamma"] = io::format_double(setup.harnack.gamma);
    report["zero_kernel"] = setup.harnack.zero_kernel;
    if (config.problem == ProblemKind::interval) {
        const double reference = std::min(setup.subregion.lo, 1.0 - setup.subregion.hi);
        report["reference_gamma"] = io::format_double(reference);
        report["reference_gamma_valid"] = setup.harnack.gamma >= reference - 1e-9;
    }
    if (setup.annulus) report["radial_operator_defect"] = io::format_double(radial_operator_defect(kernel, *setup.annulus));
    report["invariance"] = {{"samples", inv.samples()},
                            {"passes", inv.passes},
                            {"failures", inv.failures},
                            {"worst_margin", io::format_double(inv.worst_margin)}};

    const auto dir = prepare_output_dir(config);
    io::write_file_atomic(dir / "kernel_report.json", report.dump(2) + "\n");
    out << report.dump(2) << "\n";
    const bool ok = kernel.symmetric && kernel.nonnegative && setup.harnack.gamma > 0.0;
    return ok ? exit_ok : exit_kernel_rejected;
}

// Flag values before merging; unset optionals keep the config/default value.
struct Overrides {
    std::string config_path;
    std::optional<std::string> problem;
    std::optional<double> inner, outer;
    std::optional<int> dim;
    std::optional<std::string> kernel;
    std::optional<double> source_const;
    std::optional<std::string> source_file;
    std::optional<int> n;
    std::optional<std::string> rule;
    std::optional<double> cone_lo, cone_hi;
    std::optional<double> tol;
    std::optional<int> max_iter;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out;
};

void add_run_flags(CLI::App* sub, Overrides& o) {
    sub->add_option("--config", o.config_path, "Flat JSON run configuration");
    sub->add_option("--problem", o.problem, "interval | annulus | kernel-file");
    sub->add_option("--inner", o.inner, "Annulus inner radius");
    sub->add_option("--outer", o.outer, "Annulus outer radius");
    sub->add_option("--dim", o.dim, "Annulus space dimension");
    sub->add_option("--kernel", o.kernel, "Kernel file for --problem kernel-file");
    sub->add_option("--source-const", o.source_const, "Constant source term f");
    sub->add_option("--source-file", o.source_file, "Source term as node,value CSV");
    sub->add_option("--n", o.n, "Number of grid nodes");
    sub->add_option("--rule", o.rule, "trapezoid | simpson");
    sub->add_option("--cone-lo", o.cone_lo, "Cone subregion lower end");
    sub->add_option("--cone-hi", o.cone_hi, "Cone subregion upper end");
    sub->add_option("--tol", o.tol, "Solver tolerance");
    sub->add_option("--max-iter", o.max_iter, "Solver iteration budget");
    sub->add_option("--seed", o.seed, "Seed for sampled checks");
    sub->add_option("--out", o.out, "Output directory");
}

RunConfig merge(const Overrides& o) {
    RunConfig c = o.config_path.empty() ? RunConfig{} : load_config(o.config_path);
    if (o.problem) c.problem = parse_problem(*o.problem);
    if (o.inner) c.inner = *o.inner;
    if (o.outer) c.outer = *o.outer;
    if (o.dim) c.dim = *o.dim;
    if (o.kernel) c.kernel_path = *o.kernel;
    if (o.source_const) {
        c.source_const = *o.source_const;
        c.source_file.clear();
    }
    if (o.source_file) c.source_file = *o.source_file;
    if (o.n) c.grid_n = *o.n;
    if (o.rule) c.rule = *o.rule;
    if (o.cone_lo) c.cone_lo = *o.cone_lo;
    if (o.cone_hi) c.cone_hi = *o.cone_hi;
    if (o.tol) c.tol = *o.tol;
    if (o.max_iter) c.max_iter = *o.max_iter;
    if (o.seed) c.seed = *o.seed;
    if (o.out) c.output_dir = *o.out;
    return c;
}

}  // namespace

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw FormatError("cannot open config " + path.string());
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw FormatError("config " + path.string() + ": " + e.what());
    }
    if (!j.is_object()) throw FormatError("config must be a flat JSON object");

    RunConfig c;
    try {
        for (const auto& [key, value] : j.items()) {
            if (key == "problem") c.problem = parse_problem(value.get<std::string>());
            else if (key == "inner") c.inner = value.get<double>();
            else if (key == "outer") c.outer = value.get<double>();
            else if (key == "dim") c.dim = value.get<int>();
            else if (key == "kernel_path") c.kernel_path = value.get<std::string>();
            else if (key == "source_const") c.source_const = value.get<double>();
            else if (key == "source_file") c.source_file = value.get<std::string>();
            else if (key == "grid_n") c.grid_n = value.get<int>();
            else if (key == "rule") c.rule = value.get<std::string>();
            else if (key == "cone_lo") c.cone_lo = value.get<double>();
            else if (key == "cone_hi") c.cone_hi = value.get<double>();
            else if (key == "tol") c.tol = value.get<double>();
            else if (key == "max_iter") c.max_iter = value.get<int>();
            else if (key == "seed") c.seed = value.get<std::uint64_t>();
            else if (key == "output_dir") c.output_dir = value.get<std::string>();
            else throw FormatError("config: unknown field '" + key + "'");
        }
    } catch (const json::exception& e) {
        throw FormatError("config " + path.string() + ": " + e.what());
    }
    return c;
}

void validate(const RunConfig& c) {
    if (c.problem != ProblemKind::kernel_file && c.grid_n < 3) throw InvalidArgument("grid_n must be at least 3");
    if (c.problem == ProblemKind::kernel_file && c.kernel_path.empty())
        throw InvalidArgument("kernel-file problem needs a kernel path");
    if (!(c.tol > 0.0)) throw InvalidArgument("tol must be positive");
    if (c.max_iter < 1) throw InvalidArgument("max_iter must be positive");
    if (c.source_const && !std::isfinite(*c.source_const)) throw InvalidArgument("source_const must be finite");
    parse_rule(c.rule);
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Two-solution certificates for quadratic Hammerstein equations u = b(u,u) + u0", "hamcert"};
    app.require_subcommand(1);

    double a = 0.0, u0 = 0.0, scalar_tol = 1e-12;
    int scalar_max_iter = 1000000;
    auto* scalar = app.add_subcommand("scalar", "Closed-form and Picard roots of u = a u^2 + u0");
    scalar->add_option("--a", a, "Quadratic coefficient (> 0)")->required();
    scalar->add_option("--u0", u0, "Inhomogeneity (>= 0)")->required();
    scalar->add_option("--tol", scalar_tol, "Picard tolerance");
    scalar->add_option("--max-iter", scalar_max_iter, "Picard iteration budget");

    Overrides certify_o, solve_o, check_o;
    auto* certify = app.add_subcommand("certify", "Build the two-solution certificate");
    add_run_flags(certify, certify_o);
    auto* solve = app.add_subcommand("solve", "Certify, then compute both solution branches");
    add_run_flags(solve, solve_o);
    auto* check = app.add_subcommand("kernel-check", "Report kernel symmetry, positivity and Harnack constant");
    add_run_flags(check, check_o);

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return exit_ok;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << "\n";
        return exit_usage;
    }

    try {
        if (scalar->parsed()) return cmd_scalar(a, u0, scalar_tol, scalar_max_iter, out, err);
        if (certify->parsed()) return cmd_certify(merge(certify_o), out);
        if (solve->parsed()) return cmd_solve(merge(solve_o), out);
        if (check->parsed()) return cmd_kernel_check(merge(check_o), out);
    } catch (const NonConvergence& e) {
        err << "error: " << e.what() << "\n";
        return exit_partial;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return exit_usage;
    } catch (const std::filesystem::filesystem_error& e) {
        err << "error: " << e.what() << "\n";
        return exit_usage;
    }
    return exit_usage;
}

}  // namespace hamcert::cli
