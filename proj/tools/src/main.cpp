#include <CLI11.hpp>
#include <exception>
#include <iostream>

#include "commands.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Streaming regime discovery and anomaly scoring for multi-attribute event logs"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "skewstream 0.1.0");
    skewstream::cli::add_run(app);
    skewstream::cli::add_generate(app);
    skewstream::cli::add_evaluate(app);
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
