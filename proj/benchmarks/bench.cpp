// Microbenchmarks for the exact-arithmetic hot paths.
#include "trop/additive.hpp"
#include "trop/curve.hpp"
#include "trop/newton.hpp"
#include "trop/parse.hpp"
#include "trop/synth.hpp"

#include <benchmark/benchmark.h>

#include <random>

using namespace trop;

namespace {

TropPolynomial dense_poly(int n, int terms, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> ex(0, 4), num(-40, 40), den(1, 4);
    std::vector<Monomial> ms;
    for (int t = 0; t < terms; ++t) {
        Exps e(n);
        for (int c = 0; c < n; ++c) e[c] = ex(rng);
        ms.push_back({Rat(num(rng), den(rng)), e});
    }
    return TropPolynomial(n, ms);
}

TropCurve space_star() {
    TropCurve C;
    C.dim = 3;
    C.vertices.push_back({Rat(0), Rat(0), Rat(0)});
    C.rays.push_back({0, {1, 1, 1}, 1});
    C.rays.push_back({0, {-1, -1, 0}, 1});
    C.rays.push_back({0, {0, 0, -1}, 1});
    return canonicalize(C);
}

void bm_evaluate(benchmark::State& state) {
    TropPolynomial f = dense_poly(3, 16, 1);
    Point p{Rat(3, 2), Rat(-1), Rat(7, 3)};
    for (auto _ : state) benchmark::DoNotOptimize(evaluate(f, p));
}
BENCHMARK(bm_evaluate);

void bm_curve_from_poly2(benchmark::State& state) {
    TropPolynomial f = dense_poly(2, 12, 2);
    for (auto _ : state) benchmark::DoNotOptimize(curve_from_poly2(f));
}
BENCHMARK(bm_curve_from_poly2);

void bm_dual_subdivision(benchmark::State& state) {
    TropPolynomial f = dense_poly(3, 12, 3);
    for (auto _ : state) benchmark::DoNotOptimize(dual_subdivision(f));
}
BENCHMARK(bm_dual_subdivision);

void bm_essential_lp(benchmark::State& state) {
    TropPolynomial f = dense_poly(3, 12, 4);
    for (auto _ : state) benchmark::DoNotOptimize(essential_monomials_lp(f));
}
BENCHMARK(bm_essential_lp);

void bm_is_additive_plane(benchmark::State& state) {
    TropCurve C = curve_from_poly2(parse_poly("0 + x1 + x2 + 1*x1^2 + x2^2"));
    for (auto _ : state) benchmark::DoNotOptimize(is_additive(C));
}
BENCHMARK(bm_is_additive_plane);

void bm_synthesize_plane(benchmark::State& state) {
    TropCurve C = curve_from_poly2(parse_poly("0 + x1 + x2 + 1*x1^2 + x2^2"));
    for (auto _ : state) benchmark::DoNotOptimize(synthesize_plane(C));
}
BENCHMARK(bm_synthesize_plane);

void bm_synthesize_space_curve(benchmark::State& state) {
    TropCurve C = space_star();
    for (auto _ : state) benchmark::DoNotOptimize(synthesize_space_curve(C));
}
BENCHMARK(bm_synthesize_space_curve);

void bm_verify_ideal(benchmark::State& state) {
    TropCurve C = space_star();
    Ideal I = synthesize_space_curve(C);
    for (auto _ : state) benchmark::DoNotOptimize(verify_ideal(I, C, 200, 7));
}
BENCHMARK(bm_verify_ideal);

}  // namespace

BENCHMARK_MAIN();
