#include "hamcert/io.hpp"

#include "hamcert/errors.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace hamcert::io {

namespace {

std::string json_number(double x) { return std::isfinite(x) ? format_double(x) : std::string("null"); }

std::string json_bool(bool b) { return b ? "true" : "false"; }

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

double parse_field(std::string_view field, std::size_t line) {
    field = trim(field);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
    if (field.empty() || ec != std::errc{} || ptr != field.data() + field.size() || !std::isfinite(v))
        throw FormatError("grid function CSV line " + std::to_string(line) + ": bad number '" + std::string(field) +
                          "'");
    return v;
}

}  // namespace

std::string format_double(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw FormatError("cannot write " + tmp.string());
        out << content;
        out.flush();
        if (!out) throw FormatError("write failed for " + tmp.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) throw FormatError("cannot rename " + tmp.string() + " to " + path.string() + ": " + ec.message());
}

std::string grid_function_csv(std::span<const double> nodes, std::span<const double> values) {
    if (nodes.size() != values.size()) throw DimensionMismatch("grid_function_csv: nodes and values differ in length");
    std::string out = "node,value\n";
    for (std::size_t i = 0; i < nodes.size(); ++i) out += format_double(nodes[i]) + "," + format_double(values[i]) + "\n";
    return out;
}

NodeValues parse_grid_function_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || trim(line) != "node,value") throw FormatError("grid function CSV: missing 'node,value' header");
    NodeValues nv;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string_view row = trim(line);
        if (row.empty()) continue;
        const auto comma = row.find(',');
        if (comma == std::string_view::npos || row.find(',', comma + 1) != std::string_view::npos)
            throw FormatError("grid function CSV line " + std::to_string(lineno) + ": expected two fields");
        nv.nodes.push_back(parse_field(row.substr(0, comma), lineno));
        nv.values.push_back(parse_field(row.substr(comma + 1), lineno));
    }
    return nv;
}

NodeValues read_grid_function_csv(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError("cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_grid_function_csv(buf.str());
}

std::string certificate_json(const Certificate& c) {
    std::string s = "{\n";
    s += "  \"norm_B\": " + json_number(c.norm_B) + ",\n";
    s += "  \"u0_norm\": " + json_number(c.u0_norm) + ",\n";
    s += "  \"coercivity_C\": " + json_number(c.coercivity_C) + ",\n";
    s += "  \"rho1\": " + json_number(c.rho1) + ",\n";
    s += "  \"rho2\": " + json_number(c.rho2) + ",\n";
    s += "  \"rho3\": " + json_number(c.rho3) + ",\n";
    s += "  \"condition_ok\": " + json_bool(c.condition_ok) + ",\n";
    s += "  \"coercive_ok\": " + json_bool(c.coercive_ok) + ",\n";
    s += "  \"u0_in_cone\": " + json_bool(c.u0_in_cone) + ",\n";
    s += "  \"invariance_pass_rate\": " + json_number(c.invariance_pass_rate) + ",\n";
    s += "  \"degenerate\": " + json_bool(c.degenerate) + "\n";
    s += "}\n";
    return s;
}

std::string solution_json(const Solution& sol) {
    return "{\"branch\": \"" + std::string(branch_name(sol.branch)) + "\", \"sup_norm\": " + json_number(sol.sup_norm) +
           ", \"residual\": " + json_number(sol.residual) + ", \"in_cone\": " + json_bool(sol.in_cone) +
           ", \"iterations\": " + std::to_string(sol.iterations) + "}";
}

}  // namespace hamcert::io
