// Matrix-free OpenMP operator application against the serial assembled
// sparse matrix, for the 2D FD and DG systems at a few sizes.

#include <benchmark/benchmark.h>

#include <omp.h>

#include <random>

#include "waveholtz/dg.hpp"
#include "waveholtz/fd.hpp"

using namespace wh;

namespace
{
    DiscreteSystem make(int kind, int n)
    {
        if (kind == 0)
            return build_fd(10.0, Grid::uniform(2, n), BoundarySpec::standard(2), {});
        return build_dg(10.0, DGMesh::uniform(2, n, kind), FluxKind::Upwind, BoundarySpec::standard(2), {});
    }

    Vector random_state(std::size_t n)
    {
        std::mt19937_64 rng(3);
        std::normal_distribution<double> g;
        Vector w(n);
        for (double& x : w)
            x = g(rng);
        return w;
    }

    void label(benchmark::State& state, const DiscreteSystem& s)
    {
        state.counters["dofs"] = double(s.size());
        state.SetItemsProcessed(state.iterations() * s.size());
    }

    // range(0): 0 = FD, P > 0 = DG of degree P; range(1): grid points or elements per side
    void matrix_free(benchmark::State& state)
    {
        const DiscreteSystem s = make(state.range(0), state.range(1));
        const Vector w = random_state(s.size());
        Vector out(s.size());
        for (auto _ : state)
        {
            s.apply(w, out);
            benchmark::DoNotOptimize(out.data());
        }
        state.counters["threads"] = omp_get_max_threads();
        label(state, s);
    }

    void assembled_serial(benchmark::State& state)
    {
        const DiscreteSystem s = make(state.range(0), state.range(1));
        const SparseMatrix A = s.op->assemble();
        const Vector w = random_state(s.size());
        const Eigen::Map<const Eigen::VectorXd> x(w.data(), w.size());
        Eigen::VectorXd y(s.size());
        Eigen::setNbThreads(1);
        for (auto _ : state)
        {
            y.noalias() = A * x;
            benchmark::DoNotOptimize(y.data());
        }
        label(state, s);
    }

    void sizes(benchmark::internal::Benchmark * b)
    {
        for (int m : {64, 256, 512})
            b->Args({0, m});
        for (int P : {1, 2})
            for (int ne : {16, 64, 128})
                b->Args({P, ne});
    }
} // namespace

BENCHMARK(matrix_free)->Apply(sizes)->Unit(benchmark::kMicrosecond);
BENCHMARK(assembled_serial)->Apply(sizes)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
