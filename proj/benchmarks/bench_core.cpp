#include <benchmark/benchmark.h>

#include "fixtures.hpp"
#include "qcorr/bounds.hpp"
#include "qcorr/compression.hpp"
#include "qcorr/factorization.hpp"
#include "qcorr/random.hpp"

using namespace qcorr;

static void AlgebraClosure(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    Rng rng(1);
    std::vector<Matrix> gens{random_hermitian(n, rng), random_hermitian(n, rng)};
    for (auto _ : state) {
        AlgebraBasis a = generate_star_algebra(gens, n);
        benchmark::DoNotOptimize(a.basis.data());
    }
    state.SetComplexityN(n);
}
BENCHMARK(AlgebraClosure)->Arg(3)->Arg(5)->Arg(8)->Unit(benchmark::kMillisecond)->Complexity();

static void Commutant(benchmark::State& state) {
    const int mult = static_cast<int>(state.range(0));
    Rng rng(2);
    const int n = 2 * mult;
    Matrix u = random_unitary(n, rng);
    std::vector<Matrix> gens;
    for (int g = 0; g < 2; ++g)
        gens.push_back(u * kron(random_hermitian(2, rng), Matrix::Identity(mult, mult)) *
                       u.adjoint());
    AlgebraBasis a = generate_star_algebra(gens, n);
    for (auto _ : state) {
        AlgebraBasis c = commutant(a);
        benchmark::DoNotOptimize(c.basis.data());
    }
}
BENCHMARK(Commutant)->Arg(2)->Arg(4)->Arg(6)->Unit(benchmark::kMillisecond);

static void DoublingTheCenter(benchmark::State& state) {
    CommutingModel m = fixtures::random_block_commuting_model(static_cast<std::uint64_t>(state.range(0)));
    for (auto _ : state) {
        TensorRealization r = doubling_the_center(m, 0);
        benchmark::DoNotOptimize(r.isometry.data());
    }
}
BENCHMARK(DoublingTheCenter)->Arg(9001)->Arg(9007)->Arg(9013)->Unit(benchmark::kMillisecond);

static void ScrambledChshRoundTrip(benchmark::State& state) {
    CommutingModel m = fixtures::scrambled_chsh(5);
    for (auto _ : state) {
        TensorRealization r = doubling_the_center(m, 0);
        benchmark::DoNotOptimize(verify_realization(m, r));
    }
}
BENCHMARK(ScrambledChshRoundTrip)->Unit(benchmark::kMillisecond);

static void SdpLambdaMax(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    Rng rng(3);
    SdpProblem p;
    p.n = n;
    p.objective = random_hermitian(n, rng);
    p.constraints.emplace_back(Matrix::Identity(n, n), 1.0);
    for (auto _ : state) {
        SdpSolution sol = solve_sdp(p);
        benchmark::DoNotOptimize(sol.value);
    }
}
BENCHMARK(SdpLambdaMax)->Arg(10)->Arg(20)->Unit(benchmark::kMillisecond);

static void NpaChsh(benchmark::State& state) {
    BellFunctional f = fixtures::chsh_functional();
    const NpaLevel level = state.range(0) == 0 ? NpaLevel::one : NpaLevel::one_ab;
    for (auto _ : state) {
        NpaBound b = npa_upper_bound(f, level);
        benchmark::DoNotOptimize(b.value);
    }
}
BENCHMARK(NpaChsh)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

static void SeesawChsh(benchmark::State& state) {
    BellFunctional f = fixtures::chsh_functional();
    for (auto _ : state) {
        Strategy s = seesaw_lower_bound(f, 2, 2, static_cast<int>(state.range(0)), 0);
        benchmark::DoNotOptimize(s.value);
    }
}
BENCHMARK(SeesawChsh)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

static void CompressChain(benchmark::State& state) {
    TensorModel m = fixtures::four_qubit_chain_model();
    auto [p, q] = choose_subspaces(m, 3, 3);
    for (auto _ : state) {
        CompressionResult r = compress(m, p, q);
        benchmark::DoNotOptimize(r.error);
    }
}
BENCHMARK(CompressChain)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
