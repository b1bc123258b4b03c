#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "riser/diagnostics.hpp"
#include "riser/io.hpp"
#include "riser/lemmas.hpp"
#include "riser/simulation.hpp"

namespace riser {

// Exit codes shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 1;      // unreadable or malformed input
inline constexpr int kExitInvalid = 2;     // scenario violates an invariant
inline constexpr int kExitStepFailure = 3;
inline constexpr int kExitCheckFailed = 4;  // lemma violation or unsound sweep row

/// Stabilization rule: exponential rate above the threshold with r^2 above
/// the floor, or a bounded t^((p+1)/(p+2)) product when the claim is polynomial.
struct Classification {
    double rate_threshold = 1e-3;
    double r2_floor = 0.9;
};

/// A finished run together with everything derived from it.
struct RunAnalysis {
    Trajectory traj;
    std::vector<TimeValue> series;  // ||u_t||^2 + ||u_xx||^2
    std::optional<DecayFit> fit;
    std::optional<DecayFit> exponential;  // nonlinear mode also gets an exponential fit for reference
    std::optional<BoundedProduct> bounded;
    std::string fit_skipped;  // reason when no fit was attempted or it failed
    BalanceResidual balance;
    Monotonicity script_E;
    Monotonicity W;
    bool e1_bound_holds = true;  // script_E1 >= D1 script_E at every sample
    bool theorem = false;
    bool stabilized = false;
};

RunAnalysis analyze(const ScenarioConfig& cfg, const Classification& rule = {},
                    const SimulationOptions& options = {});

/// Human-readable constants, thresholds and per-condition verdicts.
std::string format_condition_report(const ConditionReport& r, const ScenarioConfig& cfg);

int cmd_check(const std::filesystem::path& config, std::ostream& out, std::ostream& err,
              const std::optional<std::filesystem::path>& json_out = {});

struct SimulateOptions {
    std::optional<std::filesystem::path> dump;  // binary state at t_final
};

int cmd_simulate(const std::filesystem::path& config, const std::filesystem::path& out_dir, std::ostream& out,
                 std::ostream& err, const SimulateOptions& options = {});

// ---- sweeps ----------------------------------------------------------------

struct SweepTarget {
    std::string pointer;  // JSON pointer into the scenario
    double factor = 1.0;  // value written = factor * axis value
};

struct SweepAxis {
    std::string name;
    std::vector<double> values;
    std::vector<SweepTarget> targets;
};

struct SweepSpec {
    json base;  // scenario JSON with defaults filled in
    std::vector<SweepAxis> axes;
    Classification rule;
};

/// Parses a sweep file; `base_dir` resolves a relative "base_config" path.
SweepSpec parse_sweep(const json& j, const std::filesystem::path& base_dir = {});

struct SweepRow {
    std::vector<double> coordinates;
    std::string status = "ok";  // ok | invalid | failed | error
    std::string message;
    bool theorem = false;
    bool stabilized = false;
    std::string kind;
    double rate = 0.0;
    double r_squared = 0.0;
    double mu_min = 0.0;
    double h_max = 0.0;
};

struct SweepResult {
    std::vector<std::string> axis_names;
    std::vector<SweepRow> rows;
    int unsound = 0;  // rows passing the theorem check but not stabilized
    int threads = 1;
};

/// Concurrency from RISER_STAB_THREADS, else the hardware concurrency.
int sweep_threads();
SweepResult run_sweep(const SweepSpec& spec, int threads);
std::string sweep_csv(const SweepResult& result);

int cmd_sweep(const std::filesystem::path& sweep, const std::filesystem::path& out_dir, std::ostream& out,
              std::ostream& err);

// ---- lemma harness and offline fits ------------------------------------------

json to_json(const CheckSummary& c);
json to_json(const LemmaSuiteReport& r);

int cmd_verify_lemmas(const LemmaSuiteOptions& options, const std::optional<std::filesystem::path>& report,
                      std::ostream& out, std::ostream& err);

struct FitOptions {
    std::string column = "norm_sum";
    std::string kind = "exponential";  // or "polynomial"
    double p = 1.0;
    std::optional<std::pair<double, double>> window;
};

int cmd_fit(const std::filesystem::path& csv, const FitOptions& options, std::ostream& out, std::ostream& err);

}  // namespace riser
