#include <atomic>
#include <random>

#include "benchmark/benchmark.h"
#include "qflat/lattice.hpp"

namespace qflat {

namespace {

Rational r(long n) { return Rational(n); }

const ZLattice& eight_squares_maximal() {
  static const ZLattice l = maximal_lattice(QuadraticSpace::identity(8));
  return l;
}

const ZLattice& six_squares_maximal() {
  static const ZLattice l = maximal_lattice(QuadraticSpace::identity(6));
  return l;
}

}  // namespace

void BM_HilbertSymbol(benchmark::State& state) {
  std::mt19937_64 rng(1);
  std::uniform_int_distribution<long> d(1, 1'000'000);
  std::vector<std::pair<Rational, Rational>> pairs;
  for (int i = 0; i < 256; ++i) pairs.emplace_back(r(d(rng) * (i % 2 ? -1 : 1)), r(d(rng)));
  const Place two = Place::prime(Integer(2)), three = Place::prime(Integer(3));
  std::size_t i = 0;
  for (auto _ : state) {
    const auto& [a, b] = pairs[i++ % pairs.size()];
    benchmark::DoNotOptimize(hilbert(a, b, two) * hilbert(a, b, three));
  }
}
BENCHMARK(BM_HilbertSymbol);

void BM_Invariants(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  RationalMatrix g(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    g(i, i) = r(static_cast<long>(2 + i));
    if (i + 1 < n) g(i, i + 1) = g(i + 1, i) = r(1);
  }
  const QuadraticSpace space(g);
  for (auto _ : state) benchmark::DoNotOptimize(invariants(space));
}
BENCHMARK(BM_Invariants)->DenseRange(2, 8, 2);

void BM_MaximalLattice(benchmark::State& state) {
  const QuadraticSpace space = QuadraticSpace::identity(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(maximal_lattice(space));
}
BENCHMARK(BM_MaximalLattice)->Arg(4)->Arg(6)->Arg(8)->Unit(benchmark::kMicrosecond);

void BM_EnumerateEightSquares(benchmark::State& state) {
  const ShortVectorEnumerator e(eight_squares_maximal());
  const Rational bound(state.range(0));
  std::uint64_t total = 0;
  for (auto _ : state) {
    std::atomic<std::uint64_t> count{0};
    e.for_each(bound, true, 1, [&](unsigned, const std::int64_t*, std::int64_t) { ++count; });
    total += count;
  }
  state.counters["vectors"] = benchmark::Counter(static_cast<double>(total), benchmark::Counter::kIsRate);
}
BENCHMARK(BM_EnumerateEightSquares)->Arg(2)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);

void BM_VerifySection(benchmark::State& state) {
  const ZLattice& l = six_squares_maximal();
  const auto vectors = enumerate_vectors(l, r(state.range(0)));
  std::size_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(verify_section_formula(l, l.vector(vectors[i++ % vectors.size()])));
}
BENCHMARK(BM_VerifySection)->Arg(3)->Arg(5)->Arg(29)->Unit(benchmark::kMicrosecond);

void BM_SweepSixSquares(benchmark::State& state) {
  const std::vector<Rational> qs{r(2), r(3), r(5), r(7), r(11), r(13)};
  SweepOptions options;
  options.per_h_full = state.range(0) != 0;
  for (auto _ : state) benchmark::DoNotOptimize(sweep_sections(six_squares_maximal(), qs, options));
}
BENCHMARK(BM_SweepSixSquares)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace qflat

BENCHMARK_MAIN();
