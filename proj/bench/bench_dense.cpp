// Serial reference vs OpenMP kernels on the interval Green matrix.
#include "hamcert/dense.hpp"
#include "hamcert/kernels.hpp"

#include <benchmark/benchmark.h>

#include <vector>

namespace {

using namespace hamcert;

struct Fixture {
    explicit Fixture(std::size_t n)
        : kernel(kernel_matrix(IntervalDirichlet{}, make_grid(n, 0.0, 1.0, QuadratureRule::trapezoid))),
          u(n, 0.5),
          v(n, 1.5),
          out(n),
          jac(n) {}
    KernelMatrix kernel;
    std::vector<double> u, v, out;
    DenseMatrix jac;
};

void BM_BilinearSerial(benchmark::State& state) {
    Fixture fx(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) {
        dense::serial::bilinear(fx.kernel.values, fx.kernel.grid.weights, fx.u, fx.v, fx.out);
        benchmark::DoNotOptimize(fx.out.data());
    }
}

void BM_BilinearOmp(benchmark::State& state) {
    Fixture fx(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) {
        dense::omp::bilinear(fx.kernel.values, fx.kernel.grid.weights, fx.u, fx.v, fx.out);
        benchmark::DoNotOptimize(fx.out.data());
    }
}

void BM_JacobianSerial(benchmark::State& state) {
    Fixture fx(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) {
        dense::serial::newton_jacobian(fx.kernel.values, fx.kernel.grid.weights, fx.u, fx.jac);
        benchmark::DoNotOptimize(fx.jac.data().data());
    }
}

void BM_JacobianOmp(benchmark::State& state) {
    Fixture fx(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) {
        dense::omp::newton_jacobian(fx.kernel.values, fx.kernel.grid.weights, fx.u, fx.jac);
        benchmark::DoNotOptimize(fx.jac.data().data());
    }
}

void BM_KernelFillSerial(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const Grid grid = make_grid(n, 1.0, 2.0, QuadratureRule::trapezoid);
    const AnnulusRadial spec{1.0, 2.0, 3};
    DenseMatrix g(n);
    for (auto _ : state) {
        dense::fill_serial(g, [&](std::size_t i, std::size_t j) {
            return annulus_radial_green(grid.nodes[i], grid.nodes[j], spec);
        });
        benchmark::DoNotOptimize(g.data().data());
    }
}

void BM_KernelFillOmp(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const Grid grid = make_grid(n, 1.0, 2.0, QuadratureRule::trapezoid);
    const AnnulusRadial spec{1.0, 2.0, 3};
    DenseMatrix g(n);
    for (auto _ : state) {
        dense::fill(g, [&](std::size_t i, std::size_t j) {
            return annulus_radial_green(grid.nodes[i], grid.nodes[j], spec);
        });
        benchmark::DoNotOptimize(g.data().data());
    }
}

}  // namespace

BENCHMARK(BM_BilinearSerial)->Arg(201)->Arg(801)->Arg(2001);
BENCHMARK(BM_BilinearOmp)->Arg(201)->Arg(801)->Arg(2001);
BENCHMARK(BM_JacobianSerial)->Arg(201)->Arg(801)->Arg(2001);
BENCHMARK(BM_JacobianOmp)->Arg(201)->Arg(801)->Arg(2001);
BENCHMARK(BM_KernelFillSerial)->Arg(201)->Arg(801);
BENCHMARK(BM_KernelFillOmp)->Arg(201)->Arg(801);

BENCHMARK_MAIN();
