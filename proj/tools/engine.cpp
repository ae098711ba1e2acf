// engine <command> --config <file> [--out <file>] [--format csv|json] [--jobs N]

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "otto/cli/config.hpp"
#include "otto/cli/emit.hpp"
#include "otto/cli/runner.hpp"

namespace {

std::string slurp(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw otto::cli::IoError("cannot read " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

} // namespace

int main(int argc, char** argv) {
    using namespace otto::cli;

    CLI::App app{"Two-qubit quantum Otto engine simulator"};
    std::string command, config_path, out_path, format;
    int jobs = 1;
    app.add_option("command", command, "steady-state | cycle | sweep | finite-time | discord-map")
        ->required()
        ->check(CLI::IsMember({"steady-state", "cycle", "sweep", "finite-time", "discord-map"}));
    app.add_option("--config", config_path, "JSON configuration")->required();
    app.add_option("--out", out_path, "output file (default: output.path, else stdout)");
    app.add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--jobs", jobs, "worker threads for sweeps (0 = all cores)")->check(CLI::NonNegativeNumber);
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    RunSpec spec;
    try {
        spec = parse_config(slurp(config_path));
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 5;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    }
    if (command != to_string(spec.command)) {
        std::cerr << "config error: command '" << command << "' does not match the config's '" << to_string(spec.command)
                  << "'\n";
        return 2;
    }
    if (!format.empty()) spec.output.format = format == "json" ? Format::json : Format::csv;
    if (!out_path.empty()) spec.output.path = out_path;

    const RunOutput result = run(spec, jobs);
    for (std::size_t k = 0; k < result.failures.size(); ++k)
        if (result.failures[k] != Failure::none)
            std::cerr << "row " << k << ": " << std::get<std::string>(result.table.rows[k].back()) << "\n";

    try {
        const std::string text = render(result.table, spec.output.format == Format::json);
        if (spec.output.path) write_file(*spec.output.path, text);
        else write_stream(std::cout, text);
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 5;
    }
    return result.exit_code();
}
