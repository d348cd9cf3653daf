#include <benchmark/benchmark.h>

#include <random>

#include "formation/config.hpp"
#include "formation/linalg.hpp"
#include "formation/polytope.hpp"
#include "formation/random_graphs.hpp"
#include "formation/sim_engine.hpp"

using namespace formation;

namespace {

GeneralStochasticMatrix admissible_matrix(int n) {
    std::mt19937_64 rng(42);
    CouplingBounds b(0.2, 0.08);
    return stochastic_from_graph(sample_admissible_graph(n, b, rng), b);
}

void BM_MinWeightDecomposition(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    ExtremeSet gens = lifted_extremes(n);
    GeneralStochasticMatrix s = admissible_matrix(n);
    Eigen::MatrixXd st2 = kron_with_identity2(s.entries().transpose());
    Eigen::VectorXd target = st2 * gens.points[0];
    for (auto _ : state) {
        benchmark::DoNotOptimize(min_weight_decomposition(target, gens));
    }
}
BENCHMARK(BM_MinWeightDecomposition)->Arg(3)->Arg(4)->Arg(5);

void BM_Lemma3(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    CouplingBounds b(0.2, 0.08);
    GeneralStochasticMatrix s = admissible_matrix(n);
    for (auto _ : state) {
        benchmark::DoNotOptimize(check_lemma3(s, b));
    }
}
BENCHMARK(BM_Lemma3)->Arg(3)->Arg(4)->Arg(5);

void BM_Lemma6Certificate(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    std::mt19937_64 rng(7);
    CouplingBounds b(0.2, 0.08);
    SignedDigraph g = sample_admissible_graph(n, b, rng);
    Eigen::VectorXd angles = Eigen::VectorXd::Zero(n);
    const double h = 1.0 / (2.0 * n);
    for (auto _ : state) {
        benchmark::DoNotOptimize(lemma6_certificate(g, angles, h, b));
    }
}
BENCHMARK(BM_Lemma6Certificate)->Arg(3)->Arg(4)->Arg(5);

void BM_SectionOracle(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(section_vertices_oracle(n));
    }
}
BENCHMARK(BM_SectionOracle)->Arg(3)->Arg(4)->Arg(5);

void BM_SimulationStep(benchmark::State& state) {
    ScenarioConfig config = paper_sec4_config();
    FormationSpec spec{config.desired};
    RotationProfile profile = profile_from_spec(config.angles, config.n);
    AgentState s{config.initial, 0.0, 0};
    for (auto _ : state) {
        s = step_agentwise(s, 0.125, config.modes[0], spec, profile);
        benchmark::DoNotOptimize(s);
    }
}
BENCHMARK(BM_SimulationStep);

void BM_FullScenario(benchmark::State& state) {
    ScenarioConfig config = paper_sec4_config();
    for (auto _ : state) {
        benchmark::DoNotOptimize(run(config));
    }
}
BENCHMARK(BM_FullScenario);

}  // namespace

BENCHMARK_MAIN();
