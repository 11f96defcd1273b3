#include "worldsim/ensemble.hpp"
#include "worldsim/registry.hpp"
#include "worldsim/sampling.hpp"
#include "worldsim/sectors.hpp"

#include <benchmark/benchmark.h>

#include <string>

using namespace worldsim;

namespace {

const ParameterRegistry& registry() {
    static const ParameterRegistry reg =
        ParameterRegistry::load(std::string(WORLDSIM_SOURCE_DIR) + "/data/registry.cfg");
    return reg;
}

const ExecutableModel& world_model() {
    static const ExecutableModel model = compile_model(sectors::assemble_world_model(
        registry().nominals(), sectors::default_nonco2_forcing()));
    return model;
}

void BM_ExpressionStep(benchmark::State& state) {
    ModelDefinition def;
    def.parameters.push_back({"r", 0.04, ""});
    def.stocks.push_back({"x", "1", ""});
    def.auxiliaries.push_back({"gain", "r * x * (1 - x / 10) + min(x, 2) * exp(0 - x)", ""});
    def.flows.push_back({"f", "", "x", "gain"});
    const auto model = compile_model(def);
    std::vector<double> stocks = {1.0};
    for (auto _ : state) {
        stocks = model.step(stocks, 0.0);
        benchmark::DoNotOptimize(stocks);
    }
}
BENCHMARK(BM_ExpressionStep);

void BM_WorldModelRun(benchmark::State& state) {
    const auto& model = world_model();
    for (auto _ : state) {
        const Trajectory traj = model.run(TimeGrid{});
        benchmark::DoNotOptimize(traj.values);
    }
}
BENCHMARK(BM_WorldModelRun)->Unit(benchmark::kMillisecond);

void BM_WorldModelEnsemble(benchmark::State& state) {
    const auto& model = world_model();
    const std::vector<ParameterRange> unc = {
        registry().admissible_range("climate.sensitivity"),
        registry().admissible_range("economy.alpha"),
        registry().admissible_range("energy.renewable_learning"),
        registry().admissible_range("carbon.uptake_scale"),
    };
    const int n = static_cast<int>(state.range(0));
    for (auto _ : state) {
        const EnsembleResult res =
            run_ensemble(model, "BAU", registry().nominals(), unc, TimeGrid{}, n, 42, 0);
        benchmark::DoNotOptimize(res.mean);
    }
    state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_WorldModelEnsemble)->Arg(100)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_LhsSample(benchmark::State& state) {
    std::vector<ParameterRange> ranges;
    for (int i = 0; i < 20; ++i) ranges.push_back({"p" + std::to_string(i), 0.0, 1.0});
    for (auto _ : state) {
        const SampleMatrix m = lhs_sample(ranges, 10000, 42);
        benchmark::DoNotOptimize(m.data);
    }
}
BENCHMARK(BM_LhsSample)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
