// Serial vs OpenMP kernels, plus one full verification run.
//   ./kernels_bench --benchmark_filter=Gate

#include <benchmark/benchmark.h>

#include <numeric>
#include <random>
#include <vector>

#include "qsnet/kernels.hpp"
#include "qsnet/verification.hpp"

namespace {

using qsnet::cplx;

std::vector<cplx> random_register(std::size_t dim) {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> g;
  std::vector<cplx> v(dim);
  for (auto& a : v) a = {g(rng), g(rng)};
  return v;
}

const qsnet::CMatrix& hadamard() {
  static const qsnet::CMatrix h = qsnet::gates::hadamard().matrix();
  return h;
}

template <bool Parallel>
void Gate1Q(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  auto data = random_register(std::size_t{1} << n);
  const std::size_t bits[] = {n / 2};
  for (auto _ : state) {
    if constexpr (Parallel) {
      qsnet::kernels::omp::apply_gate(data, bits, hadamard());
    } else {
      qsnet::kernels::serial::apply_gate(data, bits, hadamard());
    }
    benchmark::DoNotOptimize(data.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long long>(data.size()));
}

template <bool Parallel>
void PauliExpectation(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto data = random_register(std::size_t{1} << n);
  const std::uint64_t x = 0x5555'5555ULL & ((1ULL << n) - 1);
  const std::uint64_t z = 0x3333'3333ULL & ((1ULL << n) - 1);
  for (auto _ : state) {
    cplx v = Parallel ? qsnet::kernels::omp::pauli_expectation_pure(data, x, z)
                      : qsnet::kernels::serial::pauli_expectation_pure(data, x, z);
    benchmark::DoNotOptimize(v);
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long long>(data.size()));
}

template <bool Parallel>
void PartialTraceMixed(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto dim = static_cast<Eigen::Index>(1) << n;
  const qsnet::CMatrix rho = qsnet::CMatrix::Random(dim, dim);
  // keep the first half of the qubits
  const int k = n / 2;
  std::vector<std::uint64_t> kept(std::size_t{1} << k), env(std::size_t{1} << (n - k));
  for (std::size_t a = 0; a < kept.size(); ++a) kept[a] = a << (n - k);
  std::iota(env.begin(), env.end(), std::uint64_t{0});
  for (auto _ : state) {
    auto r = Parallel ? qsnet::kernels::omp::partial_trace_mixed(rho, kept, env)
                      : qsnet::kernels::serial::partial_trace_mixed(rho, kept, env);
    benchmark::DoNotOptimize(r.data());
  }
}

void VerificationRun(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  qsnet::VerificationParams p;
  p.n = n;
  if (n == 3) {  // c = 2 is outside the window at n = 3
    p.m = 2.0;
    p.c = 0.9;
  }
  const qsnet::VerificationRunner runner(p, qsnet::NetworkTopology::all_honest(n), qsnet::AdversaryModel::none(),
                                         qsnet::Resource::ghz(n));
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(runner.run(++seed).accepted);
  state.counters["copies"] = static_cast<double>(qsnet::total_copies(p));
}

}  // namespace

BENCHMARK(Gate1Q<false>)->Name("Gate1Q/serial")->DenseRange(12, 20, 4);
BENCHMARK(Gate1Q<true>)->Name("Gate1Q/omp")->DenseRange(12, 20, 4);
BENCHMARK(PauliExpectation<false>)->Name("PauliExpectation/serial")->DenseRange(12, 20, 4);
BENCHMARK(PauliExpectation<true>)->Name("PauliExpectation/omp")->DenseRange(12, 20, 4);
BENCHMARK(PartialTraceMixed<false>)->Name("PartialTraceMixed/serial")->DenseRange(6, 10, 2);
BENCHMARK(PartialTraceMixed<true>)->Name("PartialTraceMixed/omp")->DenseRange(6, 10, 2);
BENCHMARK(VerificationRun)->Arg(3)->Arg(4)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
