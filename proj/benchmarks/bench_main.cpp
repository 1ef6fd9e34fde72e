#include <benchmark/benchmark.h>

#include "mrs/collapse.hpp"
#include "mrs/irreducibles.hpp"
#include "mrs/presentation.hpp"
#include "mrs/tietze.hpp"

using namespace mrs;

namespace {

Mrs naturals_mod(int k) {
  auto n = make_naturals();
  return Mrs(n, {{n->parse(std::to_string(k)), n->parse("0")}});
}

Mrs powerset_example() {
  auto p = make_powerset({"a", "b", "c"});
  return Mrs(p, {{p->parse("{a}"), p->parse("{a,c}")}, {p->parse("{b,c}"), p->parse("{a,b,c}")}});
}

Mrs cancellation() {
  auto f = make_free({"a", "b"});
  return Mrs(f, {{f->parse("ab"), f->parse("_")}, {f->parse("ba"), f->parse("_")}});
}

void normal_form_naturals(benchmark::State& st) {
  const auto a = naturals_mod(2);
  const auto x = a.parse(std::to_string(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(normal_form(a, x).value);
}
BENCHMARK(normal_form_naturals)->Arg(100)->Arg(1000);

void normal_form_free(benchmark::State& st) {
  const auto a = cancellation();
  std::string w;
  for (int i = 0; i < st.range(0); ++i) w += i % 3 ? "ab" : "ba";
  const auto x = a.parse(w);
  for (auto _ : st) benchmark::DoNotOptimize(normal_form(a, x).value);
}
BENCHMARK(normal_form_free)->Arg(8)->Arg(64);

void certify_powerset(benchmark::State& st) {
  const auto a = powerset_example();
  for (auto _ : st) benchmark::DoNotOptimize(certify(a).ok());
}
BENCHMARK(certify_powerset);

void certify_cancellation(benchmark::State& st) {
  const auto a = cancellation();
  Bounds b;
  b.size = static_cast<std::size_t>(st.range(0));
  for (auto _ : st) benchmark::DoNotOptimize(certify(a, b).ok());
}
BENCHMARK(certify_cancellation)->Arg(6)->Arg(8);

void irreducible_monoid_powerset(benchmark::State& st) {
  const auto a = powerset_example();
  for (auto _ : st) benchmark::DoNotOptimize(monoid_of_irreducibles(a).table.order());
}
BENCHMARK(irreducible_monoid_powerset);

void coherence_bicyclic(benchmark::State& st) {
  const auto a = cancellation();
  for (auto _ : st) benchmark::DoNotOptimize(check_coherent(a, {a.rules()[0]}).ok());
}
BENCHMARK(coherence_bicyclic);

void unit_identity_order3(benchmark::State& st) {
  const auto ms = enumerate_monoids(3);
  for (auto _ : st)
    for (const auto& m : ms) benchmark::DoNotOptimize(check_unit_identity(m));
}
BENCHMARK(unit_identity_order3);

void presentation_script_cyclic(benchmark::State& st) {
  const auto m = cyclic_group(static_cast<std::size_t>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(presentation_script(m).moves.size());
}
BENCHMARK(presentation_script_cyclic)->Arg(2)->Arg(3);

void tietze_path_z2(benchmark::State& st) {
  const auto z2 = cyclic_group(2);
  const auto a = g_of_monoid(z2).mrs;
  const Mrs b(make_table(z2), {});
  for (auto _ : st) benchmark::DoNotOptimize(tietze_path(a, b).final_matches);
}
BENCHMARK(tietze_path_z2)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
