// Serial reference against the OpenMP path for the two hot loops: the
// replica ensemble of the diffusion estimator and an eta sweep.

#include <benchmark/benchmark.h>

#include "json.hpp"

#include "langesim/config.hpp"
#include "langesim/diffusion.hpp"
#include "langesim/experiments.hpp"

using namespace langesim;

namespace {

ExecPolicy policy_for(const benchmark::State& state) {
    return state.range(0) == 0 ? ExecPolicy::serial() : ExecPolicy::parallel(static_cast<int>(state.range(0)));
}

void label(benchmark::State& state) {
    state.SetLabel(state.range(0) == 0 ? "serial" : "omp threads=" + std::to_string(state.range(0)));
}

void BM_ReplicaDisplacements(benchmark::State& state) {
    const SystemParams params(SystemParamsInit{});
    const Potential pot(PotentialKind::cos2d);
    const ForceField field(parse_force_tag("nm"), pot, params);
    const SplittingIntegrator integrator(params, pot, field, 0.5);
    const ReplicaPlan plan = make_replica_plan(params, 256, 0.0, 10.0);
    const ExecPolicy policy = policy_for(state);
    for (auto _ : state) {
        DisplacementSet set = replica_displacements(integrator, plan, 42, policy);
        benchmark::DoNotOptimize(set);
    }
    state.SetItemsProcessed(state.iterations() * plan.replicas * (plan.burn_in_steps + plan.sample_steps));
    label(state);
}

void BM_LinearResponseSweep(benchmark::State& state) {
    const nlohmann::json doc = {
        {"experiment", "linear-response"}, {"potential", "cos2d"}, {"force", "cosine-mode(2)"},
        {"eta", {{"max", 1.0}, {"count", 8}}}, {"n_steps", 200000}, {"burn_in_steps", 1000},
        {"batches", 16}, {"seed", 7},
    };
    const ExperimentConfig cfg = parse_config(doc);
    const ExecPolicy policy = policy_for(state);
    std::int64_t steps = 0;
    for (auto _ : state) {
        LinearResponseResult r = run_linear_response(cfg, policy);
        steps = r.total_steps;
        benchmark::DoNotOptimize(r);
    }
    state.SetItemsProcessed(state.iterations() * steps);
    label(state);
}

void thread_args(benchmark::internal::Benchmark* b) {
    b->Arg(0);
    for (int t = 1; t <= available_threads(); t *= 2) b->Arg(t);
    b->Unit(benchmark::kMillisecond)->UseRealTime();
}

}  // namespace

BENCHMARK(BM_ReplicaDisplacements)->Apply(thread_args);
BENCHMARK(BM_LinearResponseSweep)->Apply(thread_args);

BENCHMARK_MAIN();
