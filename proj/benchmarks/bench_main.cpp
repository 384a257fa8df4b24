#include <benchmark/benchmark.h>

#include <string>
#include <vector>

#include "skewstream/engine.hpp"
#include "skewstream/gamma.hpp"
#include "skewstream/sifi.hpp"
#include "skewstream/synthgen.hpp"

using namespace skewstream;

namespace {

constexpr std::size_t kTicks = 30;

AttributeSchema schema_of(const std::vector<std::size_t>& vocab, std::size_t num_continuous) {
    AttributeSchema s;
    for (std::size_t m = 0; m < vocab.size(); ++m) s.categorical_names.push_back("c" + std::to_string(m));
    for (std::size_t a = 0; a < num_continuous; ++a) s.continuous_names.push_back("x" + std::to_string(a));
    s.vocab_sizes = vocab;
    return s;
}

ComponentMatrices random_truth(std::size_t K, const std::vector<std::size_t>& vocab, std::size_t num_continuous,
                               std::uint64_t seed) {
    Rng rng(seed);
    return regime_matrices(random_regime_spec("bench", K, vocab, num_continuous, rng), kTicks);
}

void BM_FitGamma(benchmark::State& state) {
    const GammaPrior prior{};
    double sum = 250.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(fit_gamma_shape_rate(100.0, sum, -40.0, prior));
        sum += 1e-9;
    }
}
BENCHMARK(BM_FitGamma);

void BM_Decompose(benchmark::State& state) {
    const auto events = static_cast<std::size_t>(state.range(0));
    const std::vector<std::size_t> vocab{50};
    const auto schema = schema_of(vocab, 2);
    const auto truth = random_truth(8, vocab, 2, 1);
    Rng rng(2);
    const auto window = sample_window(truth, spread_events(events, kTicks), 0, 0.0, 1.0, rng).window;
    SifiConfig cfg;
    cfg.K = 8;
    const auto priors = initial_priors(schema, cfg.K, kTicks);
    for (auto _ : state) benchmark::DoNotOptimize(decompose(window, priors, cfg, rng));
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(events));
}
BENCHMARK(BM_Decompose)->Arg(500)->Arg(2000)->Arg(8000)->Unit(benchmark::kMillisecond);

void BM_EngineWindow(benchmark::State& state) {
    const auto events = static_cast<std::size_t>(state.range(0));
    const std::vector<std::size_t> vocab{50};
    const auto schema = schema_of(vocab, 2);
    const auto truth = random_truth(8, vocab, 2, 3);
    Rng rng(4);
    std::vector<CurrentTensor> windows;
    for (std::size_t w = 0; w < 16; ++w)
        windows.push_back(sample_window(truth, spread_events(events, kTicks), w, 30.0 * static_cast<double>(w), 1.0,
                                        rng)
                              .window);
    EngineConfig cfg;
    cfg.sifi.K = 8;
    Engine engine(cfg, 5);
    engine.process(windows[0], schema);
    std::size_t next = 1;
    for (auto _ : state) {
        CurrentTensor w = windows[next % windows.size()];
        w.window_index = next;
        w.start_time = 30.0 * static_cast<double>(next);
        ++next;
        benchmark::DoNotOptimize(engine.process(w, schema));
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(events));
}
BENCHMARK(BM_EngineWindow)->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
