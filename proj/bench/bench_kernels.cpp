#include <benchmark/benchmark.h>

#include <vector>

#include "homeokit/cdm.hpp"
#include "homeokit/harness.hpp"

using namespace homeokit;

namespace {

template <void (*Step)(CdmState&, std::span<const double>, const CdmConfig&)>
void flock_step(benchmark::State& st) {
    CdmConfig c;
    c.n_agents = static_cast<int>(st.range(0));
    auto s = init_cdm(c, default_attractors(), 11);
    const std::vector<double> u{1.0, 0.3};
    for (auto _ : st) {
        Step(s, u, c);
        benchmark::DoNotOptimize(s.agents.data());
    }
    st.SetItemsProcessed(st.iterations() * st.range(0));
}

template <bool Parallel>
void replicates(benchmark::State& st) {
    auto c = experiment2_config();
    c.max_minutes = 2.0;
    c.cmm = resolve_cmm(c);
    const auto n = static_cast<std::size_t>(st.range(0));
    for (auto _ : st) {
        auto r = Parallel ? run_replicates(c, n, 1) : run_replicates_serial(c, n, 1);
        benchmark::DoNotOptimize(r.data());
    }
}

}  // namespace

BENCHMARK(flock_step<step_cdm_serial>)->Name("step_cdm/serial")->Arg(20)->Arg(200)->Arg(800);
BENCHMARK(flock_step<step_cdm>)->Name("step_cdm/omp")->Arg(20)->Arg(200)->Arg(800);
BENCHMARK(replicates<false>)->Name("replicates/serial")->Arg(8)->Unit(benchmark::kMillisecond);
BENCHMARK(replicates<true>)->Name("replicates/omp")->Arg(8)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
