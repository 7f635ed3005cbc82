#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace hamcert::cli {

enum ExitCode : int {
    exit_ok = 0,
    exit_usage = 1,
    exit_no_roots = 2,
    exit_uncertified = 3,
    exit_partial = 4,
    exit_kernel_rejected = 5,
};

enum class ProblemKind { interval, annulus, kernel_file };

struct RunConfig {
    ProblemKind problem = ProblemKind::interval;
    double inner = 1.0;
    double outer = 2.0;
    int dim = 3;
    std::filesystem::path kernel_path;
    std::optional<double> source_const;
    std::filesystem::path source_file;
    int grid_n = 201;
    std::string rule = "trapezoid";
    std::optional<double> cone_lo;
    std::optional<double> cone_hi;
    double tol = 1e-10;
    int max_iter = 500;
    std::uint64_t seed = 0;
    std::filesystem::path output_dir = ".";
};

/// Reads a flat JSON object with RunConfig field names.
RunConfig load_config(const std::filesystem::path& path);

/// Throws InvalidArgument on violated RunConfig invariants.
void validate(const RunConfig& config);

/// Entry point shared by the executable and the tests. args excludes argv[0].
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hamcert::cli
