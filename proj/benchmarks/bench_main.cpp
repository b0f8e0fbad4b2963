#include <benchmark/benchmark.h>

#include "rlnc/rlnc.hpp"

namespace {

void FieldMulTable(benchmark::State& state) {
  const auto field = rlnc::Field::from_order(static_cast<std::uint32_t>(state.range(0)));
  rlnc::Symbol acc = 1;
  rlnc::Symbol x = 2 % field->order();
  for (auto _ : state) {
    acc = field->mul(acc, x) ^ 1;
    if (acc >= field->order()) acc = 1;
    benchmark::DoNotOptimize(acc);
  }
}
BENCHMARK(FieldMulTable)->Arg(4)->Arg(256)->Arg(1024)->Arg(65536);

void SimulateButterfly(benchmark::State& state) {
  const auto net = rlnc::butterfly();
  const auto field = rlnc::Field::from_order(static_cast<std::uint32_t>(state.range(0)));
  rlnc::Simulator sim(net, 2, field);
  const auto sink = *net.find_node("t1");
  std::uint64_t i = 0;
  for (auto _ : state) {
    auto rng = rlnc::make_stream(1, i++);
    benchmark::DoNotOptimize(sim.run_for(rng, sink));
  }
}
BENCHMARK(SimulateButterfly)->Arg(2)->Arg(16)->Arg(256);

void ExactButterfly(benchmark::State& state) {
  const auto net = rlnc::butterfly();
  const auto field = rlnc::Field::from_order(static_cast<std::uint32_t>(state.range(0)));
  const auto sink = *net.find_node("t1");
  for (auto _ : state) {
    auto exact = rlnc::exact_failure(net, 2, field, sink);
    benchmark::DoNotOptimize(exact.failing);
  }
}
BENCHMARK(ExactButterfly)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

void BoundReportRandomDag(benchmark::State& state) {
  const auto net = rlnc::random_dag(static_cast<int>(state.range(0)), 2, 0.5, 11);
  const auto sink = net.sinks().front();
  for (auto _ : state) {
    auto report = rlnc::full_report(net, sink, 2, 4);
    benchmark::DoNotOptimize(report.thm1);
  }
}
BENCHMARK(BoundReportRandomDag)->Arg(4)->Arg(8)->Arg(12)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
