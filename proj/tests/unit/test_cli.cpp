#include "hamcert/cli.hpp"
#include "hamcert/io.hpp"
#include "hamcert/kernels.hpp"

#include <doctest.h>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace fs = std::filesystem;
using namespace hamcert;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
    const auto dir = fs::temp_directory_path() / "hamcert_test_cli" / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

nlohmann::json read_json(const fs::path& p) { return nlohmann::json::parse(slurp(p)); }

}  // namespace

TEST_CASE("scalar subcommand") {
    const Run ok = run({"scalar", "--a", "1", "--u0", "0.1875"});
    CHECK(ok.code == 0);
    CHECK(ok.out.find("roots: 0.25 0.75") != std::string::npos);

    const Run none = run({"scalar", "--a", "1", "--u0", "0.5"});
    CHECK(none.code == 2);
    CHECK(none.out.find("no real roots") != std::string::npos);

    const Run fold = run({"scalar", "--a", "1", "--u0", "0.25"});
    CHECK(fold.code == 2);

    CHECK(run({"scalar", "--a", "-1", "--u0", "0.1"}).code == 1);
    CHECK(run({"scalar", "--a", "1"}).code == 1);
    CHECK(run({}).code == 1);
    CHECK(run({"bogus"}).code == 1);
}

TEST_CASE("certify subcommand") {
    SUBCASE("interval, source 1") {
        const auto dir = scratch("certify_ok");
        const Run r = run({"certify", "--source-const", "1", "--n", "101", "--out", dir.string()});
        CHECK(r.code == 0);
        const auto cert = read_json(dir / "certificate.json");
        CHECK(std::abs(cert["norm_B"].get<double>() - 0.125) < 1e-10);
        CHECK(std::abs(cert["u0_norm"].get<double>() - 0.125) < 1e-10);
        CHECK(cert["condition_ok"].get<bool>());
        std::vector<std::string> keys;
        for (const auto& [k, v] : cert.items()) keys.push_back(k);
        std::vector<std::string> expected{"norm_B",       "u0_norm",     "coercivity_C", "rho1",
                                          "rho2",         "rho3",        "condition_ok", "coercive_ok",
                                          "u0_in_cone",   "invariance_pass_rate",        "degenerate"};
        std::sort(keys.begin(), keys.end());
        std::sort(expected.begin(), expected.end());
        CHECK(keys == expected);
    }
    SUBCASE("interval, source 20") {
        const auto dir = scratch("certify_fail");
        CHECK(run({"certify", "--source-const", "20", "--out", dir.string()}).code == 3);
        CHECK_FALSE(read_json(dir / "certificate.json")["condition_ok"].get<bool>());
    }
    SUBCASE("kernel file with negative entries") {
        const auto dir = scratch("certify_negative");
        const Grid grid = make_grid(11, 0.0, 1.0, QuadratureRule::trapezoid);
        DenseMatrix g(11);
        for (std::size_t i = 0; i < 11; ++i)
            for (std::size_t j = 0; j < 11; ++j) g(i, j) = interval_green(grid.nodes[i], grid.nodes[j]) - 0.01;
        save_kernel(dir / "neg.csv", KernelMatrix::from_values(std::move(g), grid));
        const Run r = run({"certify", "--problem", "kernel-file", "--kernel", (dir / "neg.csv").string(), "--out",
                           dir.string()});
        CHECK(r.code == 3);
        CHECK_FALSE(read_json(dir / "certificate.json")["coercive_ok"].get<bool>());
    }
    SUBCASE("config errors") {
        const auto dir = scratch("certify_errors");
        CHECK(run({"certify", "--n", "2", "--out", dir.string()}).code == 1);
        CHECK(run({"certify", "--cone-lo", "0", "--out", dir.string()}).code == 1);
        CHECK(run({"certify", "--rule", "simpson", "--n", "100", "--out", dir.string()}).code == 1);
        CHECK(run({"certify", "--config", (dir / "missing.json").string()}).code == 1);
        std::ofstream(dir / "bad.json") << R"({"grid_n": 51, "colour": "red"})";
        CHECK(run({"certify", "--config", (dir / "bad.json").string()}).code == 1);
        CHECK(run({"certify", "--problem", "kernel-file", "--kernel", (dir / "nope.csv").string()}).code == 1);
    }
}

TEST_CASE("config file with flag overrides") {
    const auto dir = scratch("config");
    std::ofstream(dir / "run.json") << R"({"problem": "interval", "source_const": 20, "grid_n": 51,
        "rule": "simpson", "cone_lo": 0.2, "cone_hi": 0.8, "tol": 1e-10, "max_iter": 300, "seed": 3,
        "output_dir": ")" + dir.string() + R"("})";
    CHECK(run({"certify", "--config", (dir / "run.json").string()}).code == 3);
    CHECK(run({"certify", "--config", (dir / "run.json").string(), "--source-const", "1"}).code == 0);
}

TEST_CASE("solve subcommand") {
    SUBCASE("interval f = 1") {
        const auto dir = scratch("solve_ok");
        const Run r = run({"solve", "--source-const", "1", "--out", dir.string()});
        CHECK(r.code == 0);
        const auto summary = read_json(dir / "summary.json");
        CHECK(summary["certified"].get<bool>());
        CHECK(summary["complete"].get<bool>());
        const double small = summary["small"]["sup_norm"].get<double>();
        const double large = summary["large"]["sup_norm"].get<double>();
        CHECK(small < 4.0);
        CHECK(large > 4.0);
        for (const char* key : {"branch", "sup_norm", "residual", "in_cone", "iterations"}) {
            CHECK(summary["small"].contains(key));
            CHECK(summary["large"].contains(key));
        }
        const auto csv = io::read_grid_function_csv(dir / "large.csv");
        CHECK(csv.values.size() == 201);
        CHECK(std::abs(*std::max_element(csv.values.begin(), csv.values.end()) - large) < 1e-12);
        CHECK(fs::exists(dir / "small.csv"));
    }
    SUBCASE("zero source is degenerate but solvable") {
        const auto dir = scratch("solve_zero");
        CHECK(run({"solve", "--source-const", "0", "--n", "101", "--out", dir.string()}).code == 0);
        CHECK(read_json(dir / "certificate.json")["degenerate"].get<bool>());
        CHECK(read_json(dir / "summary.json")["small"]["sup_norm"].get<double>() == 0.0);
    }
    SUBCASE("uncertified problem reports partial") {
        const auto dir = scratch("solve_uncertified");
        CHECK(run({"solve", "--source-const", "20", "--n", "101", "--out", dir.string()}).code == 4);
        CHECK_FALSE(read_json(dir / "summary.json")["certified"].get<bool>());
    }
    SUBCASE("source file") {
        const auto dir = scratch("solve_source_file");
        const Grid grid = make_grid(101, 0.0, 1.0, QuadratureRule::trapezoid);
        io::write_file_atomic(dir / "f.csv", io::grid_function_csv(grid.nodes, std::vector<double>(101, 1.0)));
        CHECK(run({"solve", "--source-file", (dir / "f.csv").string(), "--n", "101", "--out", dir.string()}).code == 0);
        CHECK(run({"solve", "--source-file", (dir / "f.csv").string(), "--n", "51", "--out", dir.string()}).code == 1);
    }
    SUBCASE("byte-identical outputs for identical runs") {
        const auto a = scratch("repro_a"), b = scratch("repro_b");
        CHECK(run({"solve", "--n", "101", "--seed", "42", "--out", a.string()}).code == 0);
        CHECK(run({"solve", "--n", "101", "--seed", "42", "--out", b.string()}).code == 0);
        for (const char* f : {"summary.json", "certificate.json", "small.csv", "large.csv"})
            CHECK(slurp(a / f) == slurp(b / f));
    }
}

TEST_CASE("kernel-check subcommand") {
    SUBCASE("interval") {
        const auto dir = scratch("check_interval");
        CHECK(run({"kernel-check", "--out", dir.string()}).code == 0);
        const auto report = read_json(dir / "kernel_report.json");
        CHECK(report["symmetric"].get<bool>());
        CHECK(report["reference_gamma"].get<std::string>() == "0.25");
        CHECK(report["reference_gamma_valid"].get<bool>());
        CHECK(report["invariance"]["failures"].get<int>() == 0);
    }
    SUBCASE("asymmetric loaded kernel") {
        const auto dir = scratch("check_asym");
        const Grid grid = make_grid(5, 0.0, 1.0, QuadratureRule::trapezoid);
        DenseMatrix g(5, 1.0);
        g(1, 3) = 2.0;
        save_kernel(dir / "asym.csv", KernelMatrix::from_values(std::move(g), grid));
        CHECK(run({"kernel-check", "--problem", "kernel-file", "--kernel", (dir / "asym.csv").string(), "--out",
                   dir.string()}).code == 5);
        CHECK_FALSE(read_json(dir / "kernel_report.json")["symmetric"].get<bool>());
    }
    SUBCASE("annulus d = 3") {
        const auto dir = scratch("check_annulus");
        CHECK(run({"kernel-check", "--problem", "annulus", "--inner", "1", "--outer", "2", "--dim", "3", "--out",
                   dir.string()}).code == 0);
        const auto report = read_json(dir / "kernel_report.json");
        CHECK(std::stod(report["radial_operator_defect"].get<std::string>()) < 1e-2);
    }
}

TEST_CASE("executable entry point") {
    const auto dir = scratch("exe");
    const std::string cmd = std::string(HAMCERT_CLI_PATH) + " scalar --a 1 --u0 0.5 > " + (dir / "o.txt").string();
    const int status = std::system(cmd.c_str());
    REQUIRE(WIFEXITED(status));
    CHECK(WEXITSTATUS(status) == 2);
    CHECK(slurp(dir / "o.txt").find("no real roots") != std::string::npos);
}
