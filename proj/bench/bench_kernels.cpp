#include <benchmark/benchmark.h>
#include <omp.h>

#include <memory>

#include "unram/corpus.hpp"
#include "unram/integrals.hpp"
#include "unram/mat2.hpp"

using namespace unram;

namespace {

// one twisted orbital integral job: sl2-cond2 at layer r, the first compact class, window {N, 0, c}
struct Job {
  std::unique_ptr<ElementaryFunction> phi;
  SmoothCharacter chi;
  Rank1Orbital job;

  Job(int r, int c) {
    phi = std::make_unique<ElementaryFunction>(make_character(corpus_entry("sl2-cond2"), 6), r, IVec{1});
    Window w{6, 0, c};
    const RingSpec& L = phi->layer(w.N);
    chi = phi->chi_r(w.N);
    TorusClass delta{compact_torus_classes(false, L, 2).front().m, IVec{1}};
    job.ring = &L;
    job.theta_power = phi->theta_power();
    job.gl2 = false;
    job.cell = phi->cell();
    job.chi = &chi;
    job.delta = torus_class_matrix(delta, false, torus_class_ring(delta, false, L), &job.delta_det_val,
                                   &job.delta_det_unit);
    job.B = w.B;
    job.c = w.c;
  }
};

void BM_Rank1Serial(benchmark::State& state) {
  Job j(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)));
  int64_t evals = 0;
  for (auto _ : state) {
    Rank1Result res = rank1_orbital_serial(j.job);
    evals += res.evaluations;
    benchmark::DoNotOptimize(res.counts);
  }
  state.counters["cosets/s"] = benchmark::Counter(static_cast<double>(evals), benchmark::Counter::kIsRate);
}

void BM_Rank1Parallel(benchmark::State& state) {
  Job j(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)));
  int threads = omp_get_max_threads();
  int64_t evals = 0;
  for (auto _ : state) {
    Rank1Result res = rank1_orbital_parallel(j.job, threads);
    evals += res.evaluations;
    benchmark::DoNotOptimize(res.counts);
  }
  state.counters["cosets/s"] = benchmark::Counter(static_cast<double>(evals), benchmark::Counter::kIsRate);
  state.counters["threads"] = threads;
}

}  // namespace

// args: layer r, unipotent modulus c
BENCHMARK(BM_Rank1Serial)->Args({1, 2})->Args({2, 2})->Args({2, 3})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Rank1Parallel)->Args({1, 2})->Args({2, 2})->Args({2, 3})->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
