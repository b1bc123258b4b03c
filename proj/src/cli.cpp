#include "riser/cli.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <thread>

namespace riser {

namespace fs = std::filesystem;

// ---- single runs ------------------------------------------------------------

RunAnalysis analyze(const ScenarioConfig& cfg, const Classification& rule, const SimulationOptions& options)
{
    RunAnalysis a;
    a.traj = simulate(cfg, options);
    const auto& samples = a.traj.samples;
    const auto& constants = a.traj.constants;
    a.series = norm_series(samples);
    a.balance = energy_balance_residual(samples);
    a.script_E = check_nonincreasing(samples, &EnergyReport::script_E);
    a.W = check_nonincreasing(samples, &EnergyReport::W);
    a.theorem = theorem_satisfied(constants, cfg.mode);

    const double scale = samples.empty() ? 0.0 : std::abs(samples.front().script_E);
    for (const auto& s : samples) {
        if (s.script_E1 < constants.D1 * s.script_E - 1e-12 * scale) a.e1_bound_holds = false;
    }

    const bool zero = std::all_of(a.series.begin(), a.series.end(), [](const TimeValue& v) { return v.value == 0.0; });
    if (zero) {
        a.fit_skipped = "zero energy";
        a.stabilized = !a.traj.failed;
        return a;
    }
    if (a.traj.failed) {
        a.fit_skipped = "step failure";
        return a;
    }

    const auto window = cfg.fit_window ? *cfg.fit_window : default_fit_window(cfg.t_final);
    try {
        if (cfg.mode == Mode::NonlinearDamping) {
            const double p = cfg.params.p;
            a.fit = fit_polynomial(a.series, window, p);
            a.bounded = bounded_product_check(a.series, (p + 1.0) / (p + 2.0), window);
            a.exponential = fit_exponential(a.series, window);
            a.stabilized = a.bounded->is_bounded;
        } else {
            a.fit = fit_exponential(a.series, window);
            a.stabilized = a.fit->rate > rule.rate_threshold && a.fit->r_squared > rule.r2_floor;
        }
        for (auto* f : {&a.fit, &a.exponential}) {
            if (*f) {
                (*f)->D1 = constants.D1;
                (*f)->M0 = constants.M0;
            }
        }
    } catch (const FitError& e) {
        a.fit.reset();
        a.fit_skipped = e.what();
        a.stabilized = false;
    }
    return a;
}

namespace {

std::string fmt(double x)
{
    std::ostringstream s;
    s << std::setprecision(10) << x;
    return s.str();
}

const char* verdict(bool ok) { return ok ? "PASS" : "FAIL"; }

/// Loads and validates; prints the problem and returns an exit code on failure.
std::optional<ScenarioConfig> load_checked(const fs::path& path, std::ostream& err, int& code)
{
    ScenarioConfig cfg;
    try {
        cfg = load_scenario(path);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        code = kExitConfig;
        return std::nullopt;
    }
    const auto validation = validate_scenario(cfg);
    if (!validation.ok()) {
        err << "invalid scenario " << path.string() << ":\n";
        for (const auto& v : validation.violations) err << "  - " << v << "\n";
        code = kExitInvalid;
        return std::nullopt;
    }
    code = kExitOk;
    return cfg;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

json monotonicity_json(const Monotonicity& m)
{
    return {{"nonincreasing", m.nonincreasing}, {"worst_increase", m.worst_increase}, {"at_t", m.at_t}};
}

}  // namespace

std::string format_condition_report(const ConditionReport& r, const ScenarioConfig& cfg)
{
    std::ostringstream s;
    s << "mode: " << to_string(cfg.mode) << "\n";
    s << "lambda1 = " << fmt(r.lambda1) << "\n";
    s << "delta = " << fmt(r.delta) << (r.delta_off_theorem ? "  (overridden, off-theorem)" : "") << "\n";
    s << "D0 = " << fmt(r.D0) << "\n";
    s << "D1 = " << fmt(r.D1) << "\n";
    s << "M0 = " << fmt(r.M0) << "\n";
    s << "eps = " << fmt(r.eps) << "\n";
    s << "d0 = k - a0 L^2/pi^2 = " << fmt(instability_threshold(cfg.params)) << "\n";
    s << "h = " << fmt(r.h) << ", mu = " << fmt(r.mu) << "\n";
    s << "\nnonlinear damping theorem (t^-(p+1)/(p+2) decay):\n";
    if (r.applicable_nonlinear) {
        s << "  h_max = " << fmt(r.h_max_nonlinear) << "  " << verdict(r.h <= r.h_max_nonlinear) << "\n";
        s << "  mu_min = " << fmt(r.mu_min_nonlinear) << "  " << verdict(r.mu >= r.mu_min_nonlinear) << "\n";
    } else {
        s << "  not applicable\n";
    }
    s << "  satisfied: " << (r.satisfied_nonlinear ? "yes" : "no") << "\n";
    s << "\nlinear damping theorem (exponential decay):\n";
    if (r.applicable_linear) {
        s << "  h_max = " << fmt(r.h_max_linear) << "  " << verdict(r.h <= r.h_max_linear) << "\n";
        s << "  mu_min = " << fmt(r.mu_min_linear) << "  " << verdict(r.mu >= r.mu_min_linear) << "\n";
    } else {
        s << "  not applicable\n";
    }
    s << "  satisfied: " << (r.satisfied_linear ? "yes" : "no") << "\n";
    if (!r.derivation_variant_flags.empty()) {
        s << "\nintermediate conditions:\n";
        for (const auto& c : r.derivation_variant_flags) {
            s << "  " << verdict(c.satisfied) << "  " << c.name << "  (" << c.quantity << " = " << fmt(c.value)
              << ", bound " << fmt(c.bound) << ")\n";
        }
    }
    for (const auto& n : r.notes) s << "note: " << n << "\n";
    s << "\nselected mode theorem satisfied: " << (theorem_satisfied(r, cfg.mode) ? "yes" : "no") << "\n";
    return s.str();
}

int cmd_check(const fs::path& config, std::ostream& out, std::ostream& err, const std::optional<fs::path>& json_out)
{
    int code = kExitOk;
    const auto cfg = load_checked(config, err, code);
    if (!cfg) return code;
    const auto report = check_conditions(cfg->params, cfg->control);
    out << format_condition_report(report, *cfg);
    if (json_out) {
        json j = to_json(report);
        j["mode"] = to_string(cfg->mode);
        j["theorem_satisfied"] = theorem_satisfied(report, cfg->mode);
        j["instability_threshold"] = instability_threshold(cfg->params);
        write_text_file(*json_out, dump(j));
    }
    return kExitOk;
}

int cmd_simulate(const fs::path& config, const fs::path& out_dir, std::ostream& out, std::ostream& err,
                 const SimulateOptions& options)
{
    int code = kExitOk;
    const auto cfg = load_checked(config, err, code);
    if (!cfg) return code;
    fs::create_directories(out_dir);

    RunAnalysis a;
    try {
        a = analyze(*cfg);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitConfig;
    }
    const auto& traj = a.traj;
    write_timeseries_csv(out_dir / "timeseries.csv", traj.samples);

    json report;
    report["scenario"] = scenario_to_json(*cfg);
    report["constants"] = to_json(traj.constants);
    report["theorem_satisfied"] = a.theorem;
    report["steps_taken"] = traj.steps_taken;
    report["samples"] = traj.samples.size();
    report["initial"] = to_json(traj.samples.front());
    report["final"] = to_json(traj.samples.back());
    report["energy_balance_residual"] = {{"value", a.balance.value}, {"absolute", a.balance.absolute}};
    report["script_E_monotone"] = monotonicity_json(a.script_E);
    report["W_monotone"] = monotonicity_json(a.W);
    report["script_E1_bound_holds"] = a.e1_bound_holds;
    if (traj.failed) {
        report["failure"] = {{"time", traj.failure_time},
                             {"residual", traj.failure_residual},
                             {"message", traj.failure_message}};
    }
    write_text_file(out_dir / "energy_report.json", dump(report));

    json fit;
    fit["series"] = "norm_sum";
    fit["fit"] = a.fit ? to_json(*a.fit) : json(nullptr);
    if (!a.fit_skipped.empty()) fit["skipped"] = a.fit_skipped;
    if (a.bounded) fit["bounded_product"] = to_json(*a.bounded);
    if (a.exponential) fit["exponential_reference"] = to_json(*a.exponential);
    fit["stabilized"] = a.stabilized;
    write_text_file(out_dir / "decay_fit.json", dump(fit));

    PlotSpec plot;
    plot.title = "||u_t||^2 + ||u_xx||^2, " + to_string(cfg->mode);
    plot.series = a.series;
    if (a.fit) {
        const auto window = a.fit->window;
        auto anchor = std::find_if(a.series.begin(), a.series.end(),
                                   [&](const TimeValue& v) { return v.t >= window.first; });
        if (anchor != a.series.end()) {
            plot.reference_anchor_t = anchor->t;
            plot.reference_anchor_value = anchor->value;
        }
        if (a.fit->kind == DecayKind::Polynomial) {
            plot.log_time = true;
            plot.reference_rate = a.fit->claimed_rate;
            plot.reference_label = "claimed slope -" + fmt(a.fit->claimed_rate);
        } else {
            plot.reference_rate = a.fit->rate;
            plot.reference_label = "fitted rate " + fmt(a.fit->rate);
        }
    }
    write_text_file(out_dir / "plot.svg", render_svg(plot));

    if (options.dump) {
        StateDump d;
        d.length = cfg->params.L;
        d.primary = traj.final_state;
        if (traj.final_reference) {
            // Stored as the pair (u, v) so a restart rebuilds the difference.
            d.reference = *traj.final_reference;
            for (std::size_t i = 0; i < d.primary.u.size(); ++i) {
                d.primary.u[i] += d.reference->u[i];
                d.primary.v[i] += d.reference->v[i];
            }
        }
        write_state_dump(*options.dump, d);
    }

    out << "steps: " << traj.steps_taken << ", samples: " << traj.samples.size() << "\n";
    out << "energy balance residual: " << fmt(a.balance.value) << (a.balance.absolute ? " (absolute)" : "") << "\n";
    if (a.fit) {
        out << "fit: " << to_string(a.fit->kind) << " rate " << fmt(a.fit->rate) << ", r^2 "
            << fmt(a.fit->r_squared) << "\n";
    } else {
        out << "fit skipped: " << a.fit_skipped << "\n";
    }
    out << "theorem satisfied: " << (a.theorem ? "yes" : "no") << ", stabilized: " << (a.stabilized ? "yes" : "no")
        << "\n";
    if (traj.failed) {
        err << "step failure at t = " << traj.failure_time << ": " << traj.failure_message << "\n";
        return kExitStepFailure;
    }
    return kExitOk;
}

// ---- sweeps -------------------------------------------------------------------

namespace {

std::vector<double> axis_values(const json& a, const std::string& name)
{
    std::vector<double> values;
    if (a.contains("values")) {
        if (!a.at("values").is_array()) throw ConfigError("axis '" + name + "': values must be an array");
        for (const auto& v : a.at("values")) {
            if (!v.is_number()) throw ConfigError("axis '" + name + "': values must be numbers");
            values.push_back(v.get<double>());
        }
    } else if (a.contains("start")) {
        const double start = a.at("start").get<double>();
        const double stop = a.value("stop", start);
        const int count = a.value("count", 0);
        const std::string scale = a.value("scale", "linear");
        if (scale != "linear" && scale != "log") throw ConfigError("axis '" + name + "': scale must be linear or log");
        if (scale == "log" && !(start > 0.0 && stop > 0.0)) {
            throw ConfigError("axis '" + name + "': log scale needs positive bounds");
        }
        for (int i = 0; i < count; ++i) {
            const double f = count == 1 ? 0.0 : static_cast<double>(i) / (count - 1);
            values.push_back(scale == "log" ? start * std::pow(stop / start, f) : start + f * (stop - start));
        }
    }
    if (values.empty()) throw ConfigError("axis '" + name + "' is empty");
    return values;
}

std::string default_pointer(const json& base, const std::string& name)
{
    for (const char* prefix : {"/params/", "/control/", "/"}) {
        const std::string ptr = prefix + name;
        if (base.contains(json::json_pointer(ptr))) return ptr;
    }
    throw ConfigError("axis '" + name + "' does not name a scenario field; give explicit targets");
}

void assign(json& scenario, const SweepTarget& target, double value)
{
    const json::json_pointer ptr(target.pointer);
    const double x = target.factor * value;
    if (scenario.at(ptr).is_number_integer()) {
        const double r = std::round(x);
        if (std::abs(r - x) > 1e-9) throw ConfigError(target.pointer + " needs an integer, got " + fmt(x));
        scenario[ptr] = static_cast<long long>(r);
    } else {
        scenario[ptr] = x;
    }
}

}  // namespace

SweepSpec parse_sweep(const json& j, const fs::path& base_dir)
{
    if (!j.is_object()) throw ConfigError("sweep: expected an object");
    SweepSpec spec;
    json base;
    if (j.contains("base")) {
        base = j.at("base");
    } else if (j.contains("base_config")) {
        fs::path p = j.at("base_config").get<std::string>();
        if (p.is_relative()) p = base_dir / p;
        base = read_json_file(p);
    } else {
        throw ConfigError("sweep: missing 'base' or 'base_config'");
    }
    try {
        spec.base = scenario_to_json(scenario_from_json(base));
    } catch (const DescriptorError& e) {
        throw ConfigError(std::string("sweep base: ") + e.what());
    }

    if (!j.contains("axes") || !j.at("axes").is_array() || j.at("axes").empty()) {
        throw ConfigError("sweep: 'axes' must be a nonempty array");
    }
    for (const auto& a : j.at("axes")) {
        SweepAxis axis;
        if (!a.contains("name") || !a.at("name").is_string()) throw ConfigError("sweep axis without a name");
        axis.name = a.at("name").get<std::string>();
        axis.values = axis_values(a, axis.name);
        if (a.contains("targets")) {
            for (const auto& t : a.at("targets")) {
                SweepTarget target{t.at("pointer").get<std::string>(), t.value("factor", 1.0)};
                try {
                    if (!spec.base.contains(json::json_pointer(target.pointer))) {
                        throw ConfigError("axis '" + axis.name + "': no scenario field at " + target.pointer);
                    }
                } catch (const json::exception& e) {
                    throw ConfigError("axis '" + axis.name + "': bad pointer " + target.pointer + ": " + e.what());
                }
                axis.targets.push_back(target);
            }
        } else {
            axis.targets.push_back({default_pointer(spec.base, axis.name), 1.0});
        }
        if (axis.targets.empty()) throw ConfigError("axis '" + axis.name + "' has no targets");
        spec.axes.push_back(std::move(axis));
    }
    if (j.contains("classification")) {
        const auto& c = j.at("classification");
        spec.rule.rate_threshold = c.value("rate_threshold", spec.rule.rate_threshold);
        spec.rule.r2_floor = c.value("r2_floor", spec.rule.r2_floor);
    }
    return spec;
}

int sweep_threads()
{
    if (const char* env = std::getenv("RISER_STAB_THREADS")) {
        char* end = nullptr;
        const long n = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && n >= 1) return static_cast<int>(std::min(n, 256L));
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

SweepResult run_sweep(const SweepSpec& spec, int threads)
{
    SweepResult result;
    std::size_t total = 1;
    for (const auto& axis : spec.axes) {
        result.axis_names.push_back(axis.name);
        total *= axis.values.size();
    }
    result.rows.resize(total);

    auto run_point = [&](std::size_t index) {
        SweepRow& row = result.rows[index];
        json scenario = spec.base;
        std::size_t rest = index;
        row.coordinates.resize(spec.axes.size());
        // First axis varies slowest.
        for (std::size_t a = spec.axes.size(); a-- > 0;) {
            const auto& axis = spec.axes[a];
            row.coordinates[a] = axis.values[rest % axis.values.size()];
            rest /= axis.values.size();
        }
        try {
            for (std::size_t a = 0; a < spec.axes.size(); ++a) {
                for (const auto& target : spec.axes[a].targets) assign(scenario, target, row.coordinates[a]);
            }
            const ScenarioConfig cfg = scenario_from_json(scenario);
            const auto validation = validate_scenario(cfg);
            if (!validation.ok()) {
                row.status = "invalid";
                for (const auto& v : validation.violations) row.message += (row.message.empty() ? "" : "; ") + v;
                return;
            }
            const auto a = analyze(cfg, spec.rule);
            const auto& c = a.traj.constants;
            const bool nonlinear = cfg.mode == Mode::NonlinearDamping;
            row.mu_min = nonlinear ? c.mu_min_nonlinear : c.mu_min_linear;
            row.h_max = nonlinear ? c.h_max_nonlinear : c.h_max_linear;
            row.theorem = a.theorem;
            row.stabilized = a.stabilized;
            if (a.fit) {
                row.kind = to_string(a.fit->kind);
                row.rate = a.fit->rate;
                row.r_squared = a.fit->r_squared;
            }
            if (a.traj.failed) {
                row.status = "failed";
                row.message = a.traj.failure_message;
            } else if (!a.fit_skipped.empty()) {
                row.message = a.fit_skipped;
            }
        } catch (const std::exception& e) {
            row.status = "error";
            row.message = e.what();
            row.theorem = false;
            row.stabilized = false;
        }
    };

    result.threads = std::max(1, std::min<int>(threads, static_cast<int>(total)));
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < total; i = next++) run_point(i);
    };
    std::vector<std::thread> pool;
    for (int t = 1; t < result.threads; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();

    for (const auto& row : result.rows) {
        if (row.theorem && !row.stabilized) ++result.unsound;
    }
    return result;
}

std::string sweep_csv(const SweepResult& result)
{
    auto quote = [](const std::string& s) {
        std::string q = "\"";
        for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
        return q + "\"";
    };
    std::string out = "index";
    for (const auto& name : result.axis_names) out += "," + name;
    out += ",status,theorem_satisfied,stabilized,fit_kind,rate,r_squared,h_max,mu_min,message\n";
    for (std::size_t i = 0; i < result.rows.size(); ++i) {
        const auto& r = result.rows[i];
        out += std::to_string(i);
        for (double c : r.coordinates) out += "," + format_double(c);
        out += "," + r.status;
        out += std::string(",") + (r.theorem ? "true" : "false");
        out += std::string(",") + (r.stabilized ? "true" : "false");
        out += "," + r.kind;
        out += "," + format_double(r.rate);
        out += "," + format_double(r.r_squared);
        out += "," + format_double(r.h_max);
        out += "," + format_double(r.mu_min);
        out += "," + quote(r.message) + "\n";
    }
    return out;
}

int cmd_sweep(const fs::path& sweep, const fs::path& out_dir, std::ostream& out, std::ostream& err)
{
    SweepSpec spec;
    try {
        spec = parse_sweep(read_json_file(sweep), sweep.parent_path());
    } catch (const std::exception& e) {
        err << "error: " << sweep.string() << ": " << e.what() << "\n";
        return kExitConfig;
    }
    const int threads = sweep_threads();
    const auto result = run_sweep(spec, threads);
    fs::create_directories(out_dir);
    write_text_file(out_dir / "sweep.csv", sweep_csv(result));

    int theorem = 0, stabilized = 0, problems = 0;
    json unsound = json::array();
    for (std::size_t i = 0; i < result.rows.size(); ++i) {
        const auto& r = result.rows[i];
        theorem += r.theorem;
        stabilized += r.stabilized;
        problems += r.status != "ok";
        if (r.theorem && !r.stabilized) unsound.push_back(i);
    }
    json axes = json::array();
    for (const auto& a : spec.axes) {
        json targets = json::array();
        for (const auto& t : a.targets) targets.push_back({{"pointer", t.pointer}, {"factor", t.factor}});
        axes.push_back({{"name", a.name}, {"values", a.values}, {"targets", targets}});
    }
    const json summary = {{"points", result.rows.size()},
                          {"theorem_satisfied", theorem},
                          {"stabilized", stabilized},
                          {"non_ok_rows", problems},
                          {"unsound_rows", unsound},
                          {"sound", result.unsound == 0},
                          {"classification",
                           {{"rate_threshold", spec.rule.rate_threshold}, {"r2_floor", spec.rule.r2_floor}}},
                          {"axes", axes}};
    write_text_file(out_dir / "summary.json", dump(summary));

    out << result.rows.size() << " points on " << result.threads << " threads: " << theorem
        << " theorem-satisfied, " << stabilized << " stabilized, " << problems << " not ok\n";
    if (result.unsound > 0) {
        err << result.unsound << " rows pass the theorem check but are not stabilized\n";
        return kExitCheckFailed;
    }
    return kExitOk;
}

// ---- lemmas and fits -------------------------------------------------------

json to_json(const CheckSummary& c)
{
    return {{"inequality", c.inequality},
            {"family", to_string(c.kind)},
            {"N", c.N == 0 ? json(nullptr) : json(c.N)},
            {"samples", c.samples},
            {"violations", c.violations},
            {"worst_margin", c.worst_margin},
            {"worst_ratio", c.worst_ratio},
            {"tolerance", c.tolerance}};
}

json to_json(const LemmaSuiteReport& r)
{
    json checks = json::array();
    for (const auto& c : r.checks) checks.push_back(to_json(c));
    return {{"violations", r.violations}, {"worst_margin", r.worst_margin}, {"passed", r.passed()}, {"checks", checks}};
}

int cmd_verify_lemmas(const LemmaSuiteOptions& options, const std::optional<fs::path>& report, std::ostream& out,
                      std::ostream& err)
{
    LemmaSuiteReport r;
    try {
        r = run_lemma_suite(options);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitConfig;
    }
    for (const auto& c : r.checks) {
        out << std::left << std::setw(18) << c.inequality << std::setw(20) << to_string(c.kind) << "N="
            << std::setw(4) << (c.N == 0 ? std::string("-") : std::to_string(c.N)) << " samples=" << c.samples
            << " violations=" << c.violations << " worst_margin=" << fmt(c.worst_margin)
            << " worst_ratio=" << fmt(c.worst_ratio) << "\n";
    }
    out << "total violations: " << r.violations << ", worst relative margin: " << fmt(r.worst_margin) << ", "
        << fmt(r.seconds) << " s\n";
    if (report) {
        json j = to_json(r);
        j["samples"] = options.samples;
        j["seed"] = options.seed;
        j["volume_counts"] = options.volume_counts;
        write_text_file(*report, dump(j));
    }
    return r.passed() ? kExitOk : kExitCheckFailed;
}

int cmd_fit(const fs::path& csv, const FitOptions& options, std::ostream& out, std::ostream& err)
{
    try {
        const auto series = read_csv_series(csv, options.column);
        if (series.empty()) throw ConfigError(csv.string() + ": no data rows");
        const auto window = options.window ? *options.window : default_fit_window(series.back().t);
        json j;
        if (options.kind == "polynomial") {
            const auto fit = fit_polynomial(series, window, options.p);
            j["fit"] = to_json(fit);
            j["bounded_product"] =
                to_json(bounded_product_check(series, (options.p + 1.0) / (options.p + 2.0), window));
        } else if (options.kind == "exponential") {
            j["fit"] = to_json(fit_exponential(series, window));
        } else {
            throw ConfigError("fit kind must be exponential or polynomial");
        }
        j["column"] = options.column;
        out << dump(j);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitConfig;
    }
    return kExitOk;
}

}  // namespace riser
