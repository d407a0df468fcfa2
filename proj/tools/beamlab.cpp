// Command-line front end: runs scenario files or built-in presets and writes CSV output.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "beamlab/errors.hpp"
#include "beamlab/scenario.hpp"

namespace {

using namespace beamlab;

constexpr int kExitValidation = 2;
constexpr int kExitSolver = 3;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("scenario", "cannot read '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// A scenario argument is either a preset name or a path to a JSON file.
Scenario load(const std::string& file, const std::string& preset_name) {
    if (!preset_name.empty() && !file.empty()) throw ValidationError("scenario", "give either a file or --preset, not both");
    if (!preset_name.empty()) return preset(preset_name);
    if (file.empty()) throw ValidationError("scenario", "a scenario file or --preset is required");
    return parse_scenario(read_file(file));
}

Scenario with_solver(Scenario s, SolverKind solver) {
    s.solver = solver;
    s.validate();
    return s;
}

void report(const ResultSet& r, const std::string& out) {
    const auto files = write_csv(r, out);
    std::cout << r.scenario.name << " (" << to_string(r.scenario.solver) << ") -> " << out << "\n";
    for (const auto& f : files) std::cout << "  " << f << "\n";
}

void print_modes(const ResultSet& r) {
    std::cout << "mode_index,beta,omega_rad_s,f_hz\n";
    for (std::size_t i = 0; i < r.modes.size(); ++i) {
        const auto& m = r.modes[i];
        std::cout << i + 1 << "," << format_number(m.beta) << "," << format_number(m.omega) << ","
                  << format_number(m.frequency_hz) << "\n";
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Euler-Bernoulli beam statics, modal analysis and dynamics"};
    app.require_subcommand(1);

    std::string file, preset_name, out;
    std::size_t stride = 0, threads = 1, modes = 3;

    auto* run = app.add_subcommand("run", "Run a scenario file or preset");
    run->add_option("scenario", file, "Scenario JSON file");
    run->add_option("--preset", preset_name, "Built-in preset name");
    run->add_option("--out", out, "Output directory")->required();
    run->add_option("--stride", stride, "Keep every S-th time step")->check(CLI::PositiveNumber);
    run->add_option("--threads", threads, "Worker threads for sweeps")->check(CLI::PositiveNumber);

    auto* modal = app.add_subcommand("modal", "Natural frequencies and mode shapes");
    modal->add_option("scenario", file, "Scenario JSON file");
    modal->add_option("--preset", preset_name, "Built-in preset name");
    modal->add_option("--modes", modes, "Number of modes")->check(CLI::PositiveNumber);
    modal->add_option("--out", out, "Also write CSV output here");

    auto* sweep = app.add_subcommand("sweep", "Harmonic frequency sweep");
    sweep->add_option("scenario", file, "Scenario JSON file");
    sweep->add_option("--preset", preset_name, "Built-in preset name");
    sweep->add_option("--out", out, "Output directory")->required();
    sweep->add_option("--threads", threads, "Worker threads")->check(CLI::PositiveNumber);

    auto* stat = app.add_subcommand("static", "Static deflection");
    stat->add_option("scenario", file, "Scenario JSON file");
    stat->add_option("--preset", preset_name, "Built-in preset name");
    stat->add_option("--out", out, "Output directory")->required();

    std::string dump;
    auto* presets = app.add_subcommand("presets", "List built-in presets");
    presets->add_option("--json", dump, "Print the scenario JSON of one preset");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitValidation;
    }

    try {
        RunOptions opts;
        opts.threads = threads;
        if (stride > 0) opts.stride = stride;
        opts.modes = modes;

        if (presets->parsed()) {
            if (dump.empty()) {
                for (const auto& name : preset_names()) std::cout << name << "\n";
            } else {
                std::cout << to_json(preset(dump)).dump(2) << "\n";
            }
        } else if (run->parsed()) {
            report(run_scenario(load(file, preset_name), opts), out);
        } else if (modal->parsed()) {
            const auto r = run_scenario(with_solver(load(file, preset_name), SolverKind::Modal), opts);
            print_modes(r);
            if (!out.empty()) report(r, out);
        } else if (sweep->parsed()) {
            report(run_scenario(with_solver(load(file, preset_name), SolverKind::Sweep), opts), out);
        } else if (stat->parsed()) {
            report(run_scenario(with_solver(load(file, preset_name), SolverKind::Static), opts), out);
        }
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const ValidationError& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const SolverError& e) {
        std::cerr << "solver error: " << e.what() << "\n";
        return kExitSolver;
    } catch (const Error& e) {
        std::cerr << "invalid input: " << e.what() << "\n";
        return kExitValidation;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
