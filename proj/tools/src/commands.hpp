#pragma once

#include <CLI11.hpp>

namespace skewstream::cli {

void add_run(CLI::App& app);
void add_generate(CLI::App& app);
void add_evaluate(CLI::App& app);

}  // namespace skewstream::cli
