#include <benchmark/benchmark.h>

#include <vector>

#include "uavroute/baselines.hpp"
#include "uavroute/config.hpp"
#include "uavroute/dirichlet.hpp"
#include "uavroute/policy.hpp"
#include "uavroute/simplex.hpp"
#include "uavroute/trainer.hpp"

namespace {

using namespace uavroute;

void BM_Sparsemax(benchmark::State& state) {
  RandomStream rng(1);
  std::vector<double> z(static_cast<std::size_t>(state.range(0)));
  for (auto& x : z) x = rng.uniform(-1.0, 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(sparsemax(z));
}
BENCHMARK(BM_Sparsemax)->Arg(3)->Arg(5)->Arg(9);

void BM_DirichletSample(benchmark::State& state) {
  RandomStream rng(2);
  std::vector<double> alpha(static_cast<std::size_t>(state.range(0)), 0.5);
  alpha[0] = 30.5;
  for (auto _ : state) benchmark::DoNotOptimize(sample_dirichlet(alpha, rng));
}
BENCHMARK(BM_DirichletSample)->Arg(5)->Arg(9);

void BM_DirichletLogProbAndEntropy(benchmark::State& state) {
  RandomStream rng(3);
  const std::vector<double> alpha{10.5, 5.5, 0.5, 3.2, 1.1};
  const auto a = sample_dirichlet(alpha, rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(dirichlet_log_prob(a, alpha));
    benchmark::DoNotOptimize(dirichlet_entropy(alpha));
  }
}
BENCHMARK(BM_DirichletLogProbAndEntropy);

template <typename Policy>
void BM_Episode(benchmark::State& state) {
  SimConfig config = state.range(0) == 0 ? desk_scale() : SimConfig{};
  RoutingEnv env(config);
  Policy policy;
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(run_episode(env, policy, seed++));
}
BENCHMARK(BM_Episode<HeuristicPolicy>)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Episode<GreedyPolicy>)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_ActorForwardStep(benchmark::State& state) {
  const SimConfig sim = desk_scale();
  RandomStream init(4);
  const RecurrentEncoder actor(actor_shape(sim, TrainConfig{}), init);
  const int batch = static_cast<int>(state.range(0));
  Matrix own = Matrix::Random(3, batch), neigh = Matrix::Random(3 * sim.max_neighbors, batch);
  EncoderCache cache;
  actor.begin(cache, 1, batch);
  for (auto _ : state) benchmark::DoNotOptimize(actor.forward_step(cache, 0, own, neigh).sum());
}
BENCHMARK(BM_ActorForwardStep)->Arg(8)->Arg(35);

void BM_ActorSequenceAndBackward(benchmark::State& state) {
  const SimConfig sim = desk_scale();
  RandomStream init(5);
  RecurrentEncoder actor(actor_shape(sim, TrainConfig{}), init);
  const int steps = sim.num_slots(), batch = sim.num_uavs;
  const Matrix own = Matrix::Random(3, steps * batch);
  const Matrix neigh = Matrix::Random(3 * sim.max_neighbors, steps * batch);
  const Matrix d_out = Matrix::Random(sim.max_neighbors + 1, steps * batch);
  EncoderCache cache;
  for (auto _ : state) {
    actor.forward_sequence(cache, steps, batch, own, neigh);
    actor.params().zero_grad();
    actor.backward(cache, steps, d_out);
  }
}
BENCHMARK(BM_ActorSequenceAndBackward)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
