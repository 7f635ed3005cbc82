#pragma once

#include "hamcert/cone.hpp"
#include "hamcert/solvers.hpp"

#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace hamcert::io {

/// 17 significant digits, '.' decimal separator.
std::string format_double(double x);

/// Writes to a sibling temporary and renames over the target.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

std::string grid_function_csv(std::span<const double> nodes, std::span<const double> values);

struct NodeValues {
    std::vector<double> nodes;
    std::vector<double> values;
};
/// Parses `node,value` CSV (header line required).
NodeValues parse_grid_function_csv(const std::string& text);
NodeValues read_grid_function_csv(const std::filesystem::path& path);

std::string certificate_json(const Certificate& cert);
std::string solution_json(const Solution& s);

}  // namespace hamcert::io
