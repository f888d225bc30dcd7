#include <benchmark/benchmark.h>

#include "ccons/candidates.hpp"
#include "ccons/energy.hpp"
#include "ccons/optimizer.hpp"
#include "ccons/simulator.hpp"
#include "ccons/spectral.hpp"

namespace {

struct Pool {
  ccons::Topology topology;
  std::vector<ccons::ClusterCandidate> candidates;
  std::vector<double> costs;
};

Pool make_pool(std::size_t lo, std::size_t hi) {
  auto topo = ccons::Topology::generate(30, 50, 7);
  const auto all = ccons::enumerate_candidates(topo, lo, hi);
  auto kept = ccons::prune_dominated(all, ccons::candidate_costs_l1(all, topo, {}));
  auto costs = ccons::candidate_costs_l1(kept, topo, {});
  return {std::move(topo), std::move(kept), std::move(costs)};
}

const Pool& small_pool() {
  static const Pool pool = make_pool(2, 10);
  return pool;
}

void BM_Enumerate(benchmark::State& state) {
  const auto topo = ccons::Topology::generate(30, 50, 7);
  for (auto _ : state) {
    benchmark::DoNotOptimize(ccons::enumerate_candidates(topo, 2, 30));
  }
}
BENCHMARK(BM_Enumerate);

void BM_Xi(benchmark::State& state) {
  const auto& pool = small_pool();
  const Eigen::VectorXd p = Eigen::VectorXd::Constant(Eigen::Index(pool.candidates.size()),
                                                      1.0 / double(pool.candidates.size()));
  for (auto _ : state) {
    benchmark::DoNotOptimize(ccons::xi(p, pool.candidates, 30));
  }
}
BENCHMARK(BM_Xi);

void BM_Optimize(benchmark::State& state) {
  const auto& pool = small_pool();
  ccons::OptimizerOptions opt;
  opt.alpha = 4e-5;
  opt.method = state.range(0) == 0 ? ccons::SolverMethod::kBarrier
                                   : ccons::SolverMethod::kProjectedSubgradient;
  for (auto _ : state) {
    benchmark::DoNotOptimize(ccons::optimize(pool.candidates, pool.costs, pool.topology, opt));
  }
}
BENCHMARK(BM_Optimize)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_MonteCarlo(benchmark::State& state) {
  const auto& pool = small_pool();
  ccons::OptimizerOptions opt;
  opt.alpha = 4e-5;
  const auto r = ccons::optimize(pool.candidates, pool.costs, pool.topology, opt);
  ccons::Scenario sc;
  sc.candidates = pool.candidates;
  sc.l1_costs = pool.costs;
  sc.p = r.best.p;
  sc.n = 30;
  for (auto _ : state) {
    benchmark::DoNotOptimize(ccons::monte_carlo(sc, std::size_t(state.range(0)), 1));
  }
}
BENCHMARK(BM_MonteCarlo)->Arg(100)->Arg(1000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
