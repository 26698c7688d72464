// OpenMP kernels against their serial references.
#include "heat/pipeline.hpp"
#include "ncalg/leading.hpp"
#include "nctorus/element.hpp"
#include "nctorus/opmodel.hpp"
#include "nctorus/stages.hpp"

#include <benchmark/benchmark.h>

#include <random>

using namespace nctorus;

namespace {

TorusParams params(int N) {
    TorusParams p;
    p.N = N;
    return p;
}

NCElement dense(const TorusParams& p, std::uint64_t seed) {
    std::mt19937_64 g(seed);
    std::normal_distribution<double> nd;
    NCElement a(p);
    for (auto& c : a.coeffs()) c = {nd(g), nd(g)};
    return a;
}

template <NCElement (*Mul)(const NCElement&, const NCElement&)>
void BM_mul(benchmark::State& st) {
    const auto p = params(static_cast<int>(st.range(0)));
    const auto a = dense(p, 1), b = dense(p, 2);
    for (auto _ : st) benchmark::DoNotOptimize(Mul(a, b));
    st.SetComplexityN(p.dim());
}

template <Matrix (*Build)(const NCElement&)>
void BM_left_matrix(benchmark::State& st) {
    const auto p = params(static_cast<int>(st.range(0)));
    const auto a = dense(p, 3);
    for (auto _ : st) benchmark::DoNotOptimize(Build(a));
}

template <bool Parallel>
void BM_eval(benchmark::State& st) {
    const auto p = params(static_cast<int>(st.range(0)));
    const Binding b(rieffel_element(p), random_selfadjoint(p, 4, 0.2));
    const auto expr = heat::a2_trace(ncalg::kLMinus);
    (void)eval_expr(expr, b);  // fill the binding's caches outside the timing
    for (auto _ : st) benchmark::DoNotOptimize(Parallel ? eval_expr(expr, b) : eval_expr_serial(expr, b));
}

}  // namespace

BENCHMARK(BM_mul<nc_mul>)->Name("nc_mul/omp")->Arg(8)->Arg(16)->Arg(32);
BENCHMARK(BM_mul<nc_mul_serial>)->Name("nc_mul/serial")->Arg(8)->Arg(16)->Arg(32);
BENCHMARK(BM_left_matrix<left_mult_matrix>)->Name("left_mult_matrix/omp")->Arg(8)->Arg(12);
BENCHMARK(BM_left_matrix<left_mult_matrix_serial>)->Name("left_mult_matrix/serial")->Arg(8)->Arg(12);
BENCHMARK(BM_eval<true>)->Name("eval_expr/omp")->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_eval<false>)->Name("eval_expr/serial")->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
