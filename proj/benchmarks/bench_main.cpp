#include <benchmark/benchmark.h>

#include <map>
#include <memory>
#include <random>
#include <string>

#include "cdt/axioms.hpp"
#include "cdt/geometry.hpp"

namespace {

cdt::ConeModel random_cone(std::size_t dim, std::size_t generators, unsigned seed) {
    std::mt19937 rng(seed);
    std::uniform_int_distribution<long> entry(-3, 3);
    cdt::ConeModel cone;
    cone.dim = dim;
    for (std::size_t g = 0; g < generators; ++g) {
        cdt::Vector v(dim);
        for (auto& x : v) x = entry(rng);
        cone.generators.push_back(v);
    }
    return cone;
}

void BM_ConeMember(benchmark::State& state) {
    const auto dim = static_cast<std::size_t>(state.range(0));
    cdt::ConeModel cone = random_cone(dim, 2 * dim, 1);
    cdt::Vector d = random_cone(dim, 1, 2).generators[0];
    for (auto _ : state) benchmark::DoNotOptimize(cdt::cone_member(d, cone).member);
}
BENCHMARK(BM_ConeMember)->Arg(4)->Arg(8)->Arg(16)->Arg(32);

void BM_DualGenerators(benchmark::State& state) {
    const auto dim = static_cast<std::size_t>(state.range(0));
    cdt::ConeModel cone = random_cone(dim, dim + 2, 3);
    for (auto _ : state) benchmark::DoNotOptimize(cdt::dual_generators(cone).size());
}
BENCHMARK(BM_DualGenerators)->Arg(3)->Arg(5)->Arg(7)->Arg(9);

/// A chain of k conditional choices over n tests and two primitives.
std::shared_ptr<const cdt::Universe> chain_universe(std::size_t tests, std::size_t choices) {
    std::vector<std::string> names;
    for (std::size_t i = 0; i < tests; ++i) names.push_back("t" + std::to_string(i));
    std::vector<std::string> prims{"a", "b"};
    std::map<std::string, cdt::ChoiceProgram> progs;
    std::mt19937 rng(5);
    for (std::size_t c = 0; c < choices; ++c) {
        const std::string& t = names[rng() % names.size()];
        std::string text = rng() % 2 ? "if " + t + " then a else b" : "if " + t + " then b else a";
        progs.emplace("c" + std::to_string(c), cdt::parse_choice(text, prims, names));
    }
    auto basis = std::make_shared<const cdt::Basis>(cdt::Basis::standard(names));
    return std::make_shared<const cdt::Universe>(cdt::make_universe(basis, cdt::Theory(std::vector<cdt::TestFormula>{}), prims, progs));
}

void BM_Closure(benchmark::State& state) {
    auto u = chain_universe(4, static_cast<std::size_t>(state.range(0)));
    std::vector<cdt::Pair> pairs;
    for (std::size_t i = 0; i + 1 < u->size(); ++i) pairs.push_back({i, i + 1});
    cdt::PreferenceData prefs(u, pairs);
    for (auto _ : state) benchmark::DoNotOptimize(cdt::closure(prefs).relation.weak_pairs.size());
}
BENCHMARK(BM_Closure)->Arg(4)->Arg(8)->Arg(12);

}  // namespace

BENCHMARK_MAIN();
