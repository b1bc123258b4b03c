// riser-stab: stability checks, simulations, sweeps and lemma verification
// for the controlled marine riser model.

#include <iostream>

#include <CLI11.hpp>

#include "riser/cli.hpp"

int main(int argc, char** argv)
{
    CLI::App app{"Finite-volume feedback stabilization of a marine riser"};
    app.require_subcommand(1);

    std::string config, out_dir = "out", report, csv, dump;
    int samples = 1000;
    std::uint64_t seed = 1;

    auto* check = app.add_subcommand("check", "Print constants and theorem thresholds for a scenario");
    check->add_option("--config", config, "Scenario JSON")->required()->check(CLI::ExistingFile);
    check->add_option("--report", report, "Also write the report as JSON");

    auto* simulate = app.add_subcommand("simulate", "Integrate a scenario and write diagnostics");
    simulate->add_option("--config", config, "Scenario JSON")->required()->check(CLI::ExistingFile);
    simulate->add_option("--out", out_dir, "Output directory")->capture_default_str();
    simulate->add_option("--dump", dump, "Write the final state as a binary dump");

    auto* sweep = app.add_subcommand("sweep", "Run a parameter grid concurrently (RISER_STAB_THREADS caps threads)");
    sweep->add_option("--config", config, "Sweep JSON")->required()->check(CLI::ExistingFile);
    sweep->add_option("--out", out_dir, "Output directory")->capture_default_str();

    riser::LemmaSuiteOptions lemma;
    auto* lemmas = app.add_subcommand("verify-lemmas", "Randomized checks of the functional inequalities");
    lemmas->add_option("--samples", samples, "Samples per family")->capture_default_str()->check(CLI::PositiveNumber);
    lemmas->add_option("--seed", seed, "Generator seed")->capture_default_str();
    lemmas->add_option("--volumes", lemma.volume_counts, "Volume counts N")->capture_default_str();
    lemmas->add_option("--cutoff", lemma.harmonic_cutoff, "Harmonic cutoff")->capture_default_str();
    lemmas->add_option("--report", report, "Write the summary as JSON");

    riser::FitOptions fit_options;
    std::vector<double> window;
    auto* fit = app.add_subcommand("fit", "Fit a decay rate to a time-series CSV");
    fit->add_option("--csv", csv, "timeseries.csv")->required()->check(CLI::ExistingFile);
    fit->add_option("--column", fit_options.column, "Column to fit")->capture_default_str();
    fit->add_option("--kind", fit_options.kind, "exponential or polynomial")
        ->capture_default_str()
        ->check(CLI::IsMember({"exponential", "polynomial"}));
    fit->add_option("--p", fit_options.p, "Damping exponent for polynomial fits")->capture_default_str();
    fit->add_option("--window", window, "t_lo t_hi")->expected(2);

    CLI11_PARSE(app, argc, argv);

    try {
        if (*check) {
            std::optional<std::filesystem::path> json_out;
            if (!report.empty()) json_out = report;
            return riser::cmd_check(config, std::cout, std::cerr, json_out);
        }
        if (*simulate) {
            riser::SimulateOptions options;
            if (!dump.empty()) options.dump = dump;
            return riser::cmd_simulate(config, out_dir, std::cout, std::cerr, options);
        }
        if (*sweep) return riser::cmd_sweep(config, out_dir, std::cout, std::cerr);
        if (*lemmas) {
            lemma.samples = samples;
            lemma.seed = seed;
            std::optional<std::filesystem::path> json_out;
            if (!report.empty()) json_out = report;
            return riser::cmd_verify_lemmas(lemma, json_out, std::cout, std::cerr);
        }
        if (*fit) {
            if (window.size() == 2) fit_options.window = std::make_pair(window[0], window[1]);
            return riser::cmd_fit(csv, fit_options, std::cout, std::cerr);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return riser::kExitConfig;
    }
    return 0;
}
