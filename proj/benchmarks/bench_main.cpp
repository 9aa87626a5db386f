#include <benchmark/benchmark.h>

#include "agler/certificate.hpp"
#include "agler/detrep.hpp"
#include "agler/realization.hpp"

using namespace agler;

namespace {

Matrix scalar(Complex c) { return Matrix::Constant(1, 1, c); }

MatPoly average(std::size_t d, double scale) {
  MatPoly s(d, 1, 1);
  for (std::size_t i = 0; i < d; ++i) s = s + MatPoly::variable(d, i);
  return s * Complex(scale / static_cast<double>(d));
}

void BM_CertifyPolydisk(benchmark::State& state) {
  const auto d = static_cast<std::size_t>(state.range(0));
  const DomainSpec s = make_preset("polydisk:" + std::to_string(d));
  const HermPoly target = HermPoly::identity(d, 1) - HermPoly::outer(average(d, 0.9));
  for (auto _ : state) benchmark::DoNotOptimize(certify(target, s));
}
BENCHMARK(BM_CertifyPolydisk)->Arg(1)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

void BM_CertifyRowBall(benchmark::State& state) {
  const auto d = static_cast<std::size_t>(state.range(0));
  const DomainSpec s = make_preset("cartan1:1x" + std::to_string(d));
  HermPoly target = HermPoly::constant(d, scalar(static_cast<double>(d)));
  for (std::size_t i = 0; i < d; ++i) target = target - HermPoly::outer(MatPoly::variable(d, i));
  for (auto _ : state) benchmark::DoNotOptimize(certify(target, s));
}
BENCHMARK(BM_CertifyRowBall)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

void BM_GramSolve(benchmark::State& state) {
  const DomainSpec s = make_preset("polydisk:2");
  const HermPoly target = HermPoly::identity(2, 1) - HermPoly::outer(average(2, 0.9) * average(2, 1.0));
  const GramProblem gp = build_gram_problem(target, defect_polys(s), static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(sdp::solve_psd_feasibility(gp.sdp));
}
BENCHMARK(BM_GramSolve)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

void BM_Realize(benchmark::State& state) {
  const auto d = static_cast<std::size_t>(state.range(0));
  const DomainSpec s = make_preset("polydisk:" + std::to_string(d));
  const RationalMatFn fn{average(d, 0.8), MatPoly::identity(d, 1)};
  for (auto _ : state) benchmark::DoNotOptimize(realize(fn, s));
}
BENCHMARK(BM_Realize)->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond);

void BM_ExpandDet(benchmark::State& state) {
  const Index n = state.range(0);
  const DomainSpec s = make_preset("polydisk:2");
  const Matrix k = Matrix::Random(n, n) * 0.3;
  const std::vector<Index> blocks{n / 2, n - n / 2};
  for (auto _ : state) benchmark::DoNotOptimize(expand_det(k, blocks, s));
}
BENCHMARK(BM_ExpandDet)->Arg(2)->Arg(4)->Arg(8);

void BM_ExtractDetRep(benchmark::State& state) {
  const DomainSpec s = make_preset("polydisk:2");
  const MatPoly p = MatPoly::constant(2, scalar(1.0)) - average(2, 0.5);
  for (auto _ : state) benchmark::DoNotOptimize(extract_detrep(p, s));
}
BENCHMARK(BM_ExtractDetRep)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
