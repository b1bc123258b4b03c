#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "riser/controller.hpp"
#include "riser/diagnostics.hpp"
#include "riser/scenario.hpp"

namespace riser {

using json = nlohmann::json;

/// Configuration problems, with the offending field or file position in the message.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// ---- scenario files --------------------------------------------------------

FieldDescriptor parse_descriptor(const json& j, const std::string& field);
json descriptor_to_json(const FieldDescriptor& d);
SourceDescriptor parse_source(const json& j, const std::string& field);
json source_to_json(const SourceDescriptor& s);

ScenarioConfig scenario_from_json(const json& j);
json scenario_to_json(const ScenarioConfig& cfg);

/// Reads and parses a JSON file; parse errors carry line and column.
json read_json_file(const std::filesystem::path& path);
ScenarioConfig load_scenario(const std::filesystem::path& path);

// ---- reports ---------------------------------------------------------------

json to_json(const ConditionReport& r);
json to_json(const DecayFit& f);
json to_json(const BoundedProduct& b);
json to_json(const EnergyReport& e);

/// Deterministic shortest round-trip formatting of a double.
std::string format_double(double x);

// ---- time series CSV -------------------------------------------------------

/// Stable column order of timeseries.csv.
const std::vector<std::string>& timeseries_columns();
void write_timeseries_csv(const std::filesystem::path& path, std::span<const EnergyReport> samples);
std::string timeseries_csv(std::span<const EnergyReport> samples);

/// Reads (t, column) pairs from a CSV with a header row.
std::vector<TimeValue> read_csv_series(const std::filesystem::path& path, const std::string& column);

// ---- binary state dumps ----------------------------------------------------
//
// Little-endian layout:
//   char[8]  magic "RISERST1"
//   uint32   field_pairs (1, or 2 with a tracking reference)
//   uint32   reserved (0)
//   uint64   node count M
//   float64  t
//   float64  L
//   float64[M] u, float64[M] v           primary state
//   float64[M] u, float64[M] v           reference (field_pairs == 2)

struct StateDump {
    double length = 0.0;
    State primary;
    std::optional<State> reference;
};

void write_state_dump(const std::filesystem::path& path, const StateDump& dump);
StateDump read_state_dump(const std::filesystem::path& path);

// ---- plots -----------------------------------------------------------------

struct PlotSpec {
    std::string title;
    std::vector<TimeValue> series;
    bool log_time = false;  // log-log when true, semi-log otherwise
    /// Reference line value(t) = anchor * exp(-rate t) or anchor * t^-rate.
    std::optional<double> reference_rate;
    double reference_anchor_t = 1.0;
    double reference_anchor_value = 1.0;
    std::string reference_label;
};

/// Self-contained SVG with a log-scale value axis.
std::string render_svg(const PlotSpec& spec);

void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace riser
