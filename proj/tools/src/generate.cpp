#include <chrono>
#include <fstream>
#include <iostream>
#include <stdexcept>

#include "commands.hpp"
#include "io.hpp"
#include "skewstream/synthgen.hpp"

namespace skewstream::cli {

namespace {

struct GenerateOptions {
    std::string scenario;
    std::string out;
    std::uint64_t seed = 1;
};

void execute(const GenerateOptions& opt) {
    const auto start = std::chrono::steady_clock::now();
    const Scenario scenario = parse_scenario(read_file(opt.scenario));
    Rng rng(opt.seed);
    const GeneratedStream stream = sample_stream(scenario, rng);

    std::ofstream events(opt.out + ".csv", std::ios::binary | std::ios::trunc);
    if (!events) throw std::runtime_error("cannot write '" + opt.out + ".csv'");
    write_events_csv(stream, events);
    std::ofstream truth(opt.out + ".truth.csv", std::ios::binary | std::ios::trunc);
    if (!truth) throw std::runtime_error("cannot write '" + opt.out + ".truth.csv'");
    write_truth_csv(stream, truth);
    write_file_atomic(opt.out + ".config.json", run_config_for(scenario));
    if (!events.flush() || !truth.flush()) throw std::runtime_error("writing generated files failed");

    std::size_t total = 0;
    for (const SampledWindow& w : stream.windows) total += w.window.events.size();
    const std::chrono::duration<double> wall = std::chrono::steady_clock::now() - start;
    std::cout << "windows," << stream.windows.size() << "\nevents," << total << "\nwall_seconds," << wall.count()
              << '\n';
}

}  // namespace

void add_generate(CLI::App& app) {
    auto opt = std::make_shared<GenerateOptions>();
    CLI::App* cmd = app.add_subcommand("generate", "Sample a labeled synthetic stream from a scenario");
    cmd->add_option("--scenario", opt->scenario, "Scenario file (JSON)")->required()->check(CLI::ExistingFile);
    cmd->add_option("--out", opt->out, "Output prefix for .csv, .truth.csv and .config.json")->required();
    cmd->add_option("--seed", opt->seed, "Sampling seed")->capture_default_str();
    cmd->callback([opt] { execute(*opt); });
}

}  // namespace skewstream::cli
