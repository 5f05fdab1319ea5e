// itc: figure sweeps for the inhomogeneous Tavis-Cummings model.
//
//   itc <spectrum|delta-e|conc-profile|conc-first-last> [--config FILE] [--out DIR]
//       [--verify] [--plot] [overrides...]
//
// Exit codes: 0 ok, 1 usage or input error, 2 verification failure.
// ITC_WORKERS sets the number of sweep threads.

#include <CLI11.hpp>

#include <chrono>
#include <iostream>
#include <map>
#include <string>

#include "itc/config.hpp"
#include "itc/experiments.hpp"

namespace {

struct Overrides {
    std::string config_path;
    std::string out;
    bool verify = false;
    bool plot = false;
    std::map<std::string, std::string> values;  // config key -> raw value text
};

void add_overrides(CLI::App* sub, Overrides& o) {
    sub->add_option("--config", o.config_path, "config file (key = value lines)");
    sub->add_option("--out", o.out, "output directory");
    sub->add_flag("--verify", o.verify, "check contracts and figure-shape claims; exit 2 on violation");
    sub->add_flag("--plot", o.plot, "also write an SVG plot");
    const std::pair<const char*, const char*> keys[] = {
        {"profile", "sine | uniform | explicit"},
        {"kappa", "coupling amplitude"},
        {"length", "cavity length for the sine profile"},
        {"kappas", "explicit couplings, e.g. [0.5, 1, 2]"},
        {"n_atoms", "atom counts, e.g. 4..20 or [10, 20]"},
        {"k", "excitation numbers, e.g. 1..6"},
        {"pair", "first_vs_all | first_vs_last | [i, j] (1-based)"},
        {"sector_cap", "largest sector dimension for exact diagonalization"},
        {"exact_oracle", "true | false: add the exact-sector concurrence oracle"},
    };
    for (const auto& [key, help] : keys) {
        std::string flag = std::string("--") + key;
        for (char& c : flag) {
            if (c == '_') c = '-';
        }
        sub->add_option_function<std::string>(
            flag, [&o, k = std::string(key)](const std::string& v) { o.values[k] = v; }, help);
    }
}

int run(itc::Experiment experiment, const Overrides& o) {
    itc::ConfigMap values;
    if (!o.config_path.empty()) values = itc::load_config_file(o.config_path);
    for (const auto& [key, text] : o.values) {
        try {
            values[key] = itc::parse_config_value(text);
        } catch (const std::invalid_argument& e) {
            throw std::invalid_argument("--" + key + ": " + e.what());
        }
    }
    if (!o.out.empty()) values["output_dir"] = itc::parse_config_value("\"" + o.out + "\"");
    if (o.verify) values["verify"] = itc::parse_config_value("true");
    if (o.plot) values["plot"] = itc::parse_config_value("true");

    const itc::RunConfig config = itc::make_run_config(experiment, values);
    const auto t0 = std::chrono::steady_clock::now();
    const itc::RunResult result = itc::run_experiment(config);
    const auto files = itc::write_outputs(result);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    std::cout << "wrote " << files.csv << " (" << result.rows.size() << " rows, " << secs << " s)\n";
    if (!files.audit.empty()) std::cout << "wrote " << files.audit << '\n';
    if (!files.svg.empty()) std::cout << "wrote " << files.svg << '\n';

    if (config.verify) {
        const auto violations = itc::verify_result(result);
        for (const auto& v : violations) std::cerr << "verify: " << v << '\n';
        if (!violations.empty()) {
            std::cerr << "verify: " << violations.size() << " violation(s)\n";
            return 2;
        }
        std::cout << "verify: ok\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Inhomogeneous Tavis-Cummings sweeps"};
    app.require_subcommand(1);

    const std::pair<const char*, itc::Experiment> commands[] = {
        {"spectrum", itc::Experiment::kSpectrum},
        {"delta-e", itc::Experiment::kDeltaE},
        {"conc-profile", itc::Experiment::kConcProfile},
        {"conc-first-last", itc::Experiment::kConcFirstLast},
    };
    std::map<std::string, Overrides> overrides;
    for (const auto& [name, e] : commands) {
        auto* sub = app.add_subcommand(name, std::string("run the ") + name + " sweep");
        add_overrides(sub, overrides[name]);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        for (const auto& [name, e] : commands) {
            if (app.got_subcommand(name)) return run(e, overrides[name]);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 1;
}
