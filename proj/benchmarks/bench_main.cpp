#include <benchmark/benchmark.h>

#include <fstream>
#include <random>
#include <sstream>

#include "spillscope/spillscope.hpp"

#ifdef SPILLSCOPE_BENCH_SYNTH
#include "synth.hpp"
#endif

namespace {

std::string read_file(const char* path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

#ifdef SPILLSCOPE_BENCH_SYNTH
std::string synthetic_listing(int functions) {
  std::mt19937_64 rng(42);
  std::string text;
  for (int i = 0; i < functions; ++i) {
    text += spillscope::testkit::generate(spillscope::testkit::random_spec(rng),
                                          "fn_" + std::to_string(i))
                .text;
  }
  return text;
}

void BM_ParseAnalyzeSynthetic(benchmark::State& state) {
  const std::string text = synthetic_listing(static_cast<int>(state.range(0)));
  const spillscope::ParserConfig config;
  for (auto _ : state) {
    auto unit = spillscope::parse_unit(text, config);
    benchmark::DoNotOptimize(spillscope::analyze_program(unit));
  }
  state.SetBytesProcessed(static_cast<int64_t>(state.iterations()) *
                          static_cast<int64_t>(text.size()));
}
BENCHMARK(BM_ParseAnalyzeSynthetic)->Arg(10)->Arg(100)->Arg(1000);
#endif

void BM_ParseAnalyzeSpillExample(benchmark::State& state) {
  const std::string text = read_file(SPILLSCOPE_DATA_DIR "/spill_example.s");
  const spillscope::ParserConfig config;
  for (auto _ : state) {
    auto unit = spillscope::parse_unit(text, config);
    benchmark::DoNotOptimize(spillscope::analyze_program(unit));
  }
}
BENCHMARK(BM_ParseAnalyzeSpillExample);

void BM_SummarizeFixture(benchmark::State& state) {
  const auto records = spillscope::load_fixture(SPILLSCOPE_DATA_DIR "/mibench_fixture.csv");
  for (auto _ : state) {
    benchmark::DoNotOptimize(spillscope::summarize(records));
  }
}
BENCHMARK(BM_SummarizeFixture);

void BM_ReportFixture(benchmark::State& state) {
  const auto records = spillscope::load_fixture(SPILLSCOPE_DATA_DIR "/mibench_fixture.csv");
  const spillscope::Provenance pinned{"bench", "0000000000000000", "pinned"};
  spillscope::ReportRequest request;
  request.chart = true;
  for (auto _ : state) {
    const auto summary = spillscope::summarize(records);
    benchmark::DoNotOptimize(
        spillscope::emit_report(summary, records, request, spillscope::Format::Markdown, pinned));
  }
}
BENCHMARK(BM_ReportFixture);

}  // namespace

BENCHMARK_MAIN();
