#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "groupwalk/eval.hpp"
#include "groupwalk/kmeans.hpp"
#include "groupwalk/pipeline.hpp"
#include "groupwalk/similarity.hpp"
#include "groupwalk/spectral.hpp"
#include "groupwalk/synth.hpp"

namespace gw = groupwalk;

namespace {

std::vector<gw::TrackState> crowd(int n) {
  std::mt19937_64 gen(1);
  std::uniform_real_distribution<double> pos(0.0, 1000.0);
  std::uniform_real_distribution<double> vel(-3.0, 3.0);
  std::vector<gw::TrackState> out;
  for (int i = 0; i < n; ++i) {
    gw::TrackState s;
    s.id = i + 1;
    s.mean << pos(gen), pos(gen), 20.0, 40.0, vel(gen), vel(gen), 0.0, 0.0;
    s.cov = gw::StateMatrix::Identity() * 4.0;
    out.push_back(s);
  }
  return out;
}

void BM_BuildGraph(benchmark::State& state) {
  const auto tracks = crowd(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(gw::build_graph(tracks, gw::SimilarityParams{}));
  }
}
BENCHMARK(BM_BuildGraph)->Arg(8)->Arg(32)->Arg(64);

void BM_EigSym(benchmark::State& state) {
  const auto g = gw::build_graph(crowd(static_cast<int>(state.range(0))), gw::SimilarityParams{});
  const Eigen::MatrixXd l = gw::laplacian(g);
  for (auto _ : state) {
    benchmark::DoNotOptimize(gw::eig_sym(l));
  }
}
BENCHMARK(BM_EigSym)->Arg(8)->Arg(32)->Arg(64);

void BM_KMeans(benchmark::State& state) {
  std::mt19937_64 gen(2);
  std::normal_distribution<double> nd(0.0, 1.0);
  Eigen::MatrixXd pts(state.range(0), 4);
  for (Eigen::Index i = 0; i < pts.size(); ++i) {
    pts.data()[i] = nd(gen);
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(gw::kmeans(pts, 4, 0));
  }
}
BENCHMARK(BM_KMeans)->Arg(16)->Arg(64);

void BM_Ami(benchmark::State& state) {
  std::mt19937_64 gen(3);
  std::uniform_int_distribution<int> label(1, 5);
  gw::Partition u(static_cast<std::size_t>(state.range(0)));
  gw::Partition v(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) {
    u[i] = label(gen);
    v[i] = label(gen);
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(gw::ami(u, v));
  }
}
BENCHMARK(BM_Ami)->Arg(8)->Arg(64)->Arg(256);

void BM_EngineFrame(benchmark::State& state) {
  const auto scenario = gw::generate(gw::preset_scenario("p5-split"));
  for (auto _ : state) {
    gw::Engine engine{gw::RunConfig{}};
    for (std::size_t t = 0; t < scenario.detections.size(); ++t) {
      benchmark::DoNotOptimize(
          engine.process(static_cast<gw::FrameIndex>(t), scenario.detections[t]));
    }
  }
  state.SetItemsProcessed(state.iterations() *
                          static_cast<std::int64_t>(scenario.detections.size()));
}
BENCHMARK(BM_EngineFrame);

}  // namespace

BENCHMARK_MAIN();
