#include "riser/io.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <set>
#include <sstream>

namespace riser {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};

std::string join(const std::string& prefix, const std::string& key)
{
    return prefix.empty() ? key : prefix + "." + key;
}

void reject_unknown(const json& j, const std::string& where, std::initializer_list<const char*> allowed)
{
    if (!j.is_object()) throw ConfigError((where.empty() ? "root" : where) + ": expected an object");
    const std::set<std::string> ok(allowed.begin(), allowed.end());
    for (const auto& [key, _] : j.items()) {
        if (!ok.contains(key)) throw ConfigError("unknown field '" + join(where, key) + "'");
    }
}

double number(const json& j, const std::string& where, const char* key, std::optional<double> fallback = {})
{
    if (!j.contains(key)) {
        if (fallback) return *fallback;
        throw ConfigError("missing field '" + join(where, key) + "'");
    }
    const auto& v = j.at(key);
    if (!v.is_number()) throw ConfigError("field '" + join(where, key) + "': expected a number");
    return v.get<double>();
}

int integer(const json& j, const std::string& where, const char* key, std::optional<int> fallback = {})
{
    if (!j.contains(key)) {
        if (fallback) return *fallback;
        throw ConfigError("missing field '" + join(where, key) + "'");
    }
    const auto& v = j.at(key);
    if (!v.is_number_integer()) throw ConfigError("field '" + join(where, key) + "': expected an integer");
    return v.get<int>();
}

std::vector<double> number_list(const json& j, const std::string& where, const char* key)
{
    if (!j.contains(key) || !j.at(key).is_array()) {
        throw ConfigError("field '" + join(where, key) + "': expected an array of numbers");
    }
    std::vector<double> out;
    for (const auto& v : j.at(key)) {
        if (!v.is_number()) throw ConfigError("field '" + join(where, key) + "': expected numbers");
        out.push_back(v.get<double>());
    }
    return out;
}

/// Numbers that may be infinite or NaN are written as strings.
json num(double x)
{
    if (std::isfinite(x)) return x;
    if (std::isnan(x)) return "nan";
    return x > 0 ? "inf" : "-inf";
}

}  // namespace

FieldDescriptor parse_descriptor(const json& j, const std::string& field)
{
    if (!j.is_object() || !j.contains("type") || !j.at("type").is_string()) {
        throw DescriptorError(field, "descriptor must be an object with a string 'type'");
    }
    const std::string type = j.at("type").get<std::string>();
    try {
        if (type == "zero") {
            reject_unknown(j, field, {"type"});
            return ZeroProfile{};
        }
        if (type == "constant") {
            reject_unknown(j, field, {"type", "value"});
            return ConstantProfile{number(j, field, "value")};
        }
        if (type == "polynomial") {
            reject_unknown(j, field, {"type", "coefficients"});
            return PolynomialProfile{number_list(j, field, "coefficients")};
        }
        if (type == "sine") {
            reject_unknown(j, field, {"type", "amplitude", "harmonic"});
            const int n = integer(j, field, "harmonic", 1);
            if (n < 1) throw DescriptorError(field, "harmonic must be >= 1");
            return SineProfile{{SineTerm{number(j, field, "amplitude", 1.0), n}}};
        }
        if (type == "sine_series") {
            reject_unknown(j, field, {"type", "terms"});
            if (!j.contains("terms") || !j.at("terms").is_array() || j.at("terms").empty()) {
                throw DescriptorError(field, "sine_series needs a nonempty 'terms' array");
            }
            SineProfile s;
            for (std::size_t i = 0; i < j.at("terms").size(); ++i) {
                const auto& t = j.at("terms")[i];
                const std::string where = field + ".terms[" + std::to_string(i) + "]";
                reject_unknown(t, where, {"amplitude", "harmonic"});
                const int n = integer(t, where, "harmonic");
                if (n < 1) throw DescriptorError(where, "harmonic must be >= 1");
                s.terms.push_back({number(t, where, "amplitude"), n});
            }
            return s;
        }
        if (type == "bump") {
            reject_unknown(j, field, {"type", "scale"});
            return BumpProfile{number(j, field, "scale", 1.0)};
        }
        if (type == "linear") {
            reject_unknown(j, field, {"type", "alpha", "beta"});
            return LinearProfile{number(j, field, "alpha"), number(j, field, "beta")};
        }
        if (type == "cosine") {
            reject_unknown(j, field, {"type", "mean", "amplitude", "harmonic"});
            return CosineProfile{number(j, field, "mean"), number(j, field, "amplitude"),
                                 integer(j, field, "harmonic", 1)};
        }
        if (type == "array") {
            reject_unknown(j, field, {"type", "values"});
            return ArrayProfile{number_list(j, field, "values")};
        }
    } catch (const ConfigError& e) {
        throw DescriptorError(field, e.what());
    }
    throw DescriptorError(field, "unknown descriptor type '" + type + "'");
}

json descriptor_to_json(const FieldDescriptor& d)
{
    return std::visit(overloaded{
                          [](const ZeroProfile&) { return json{{"type", "zero"}}; },
                          [](const ConstantProfile& c) { return json{{"type", "constant"}, {"value", c.value}}; },
                          [](const PolynomialProfile& p) {
                              return json{{"type", "polynomial"}, {"coefficients", p.coefficients}};
                          },
                          [](const SineProfile& s) {
                              if (s.terms.size() == 1) {
                                  return json{{"type", "sine"},
                                              {"amplitude", s.terms[0].amplitude},
                                              {"harmonic", s.terms[0].harmonic}};
                              }
                              json terms = json::array();
                              for (const auto& t : s.terms) {
                                  terms.push_back({{"amplitude", t.amplitude}, {"harmonic", t.harmonic}});
                              }
                              return json{{"type", "sine_series"}, {"terms", terms}};
                          },
                          [](const BumpProfile& b) { return json{{"type", "bump"}, {"scale", b.scale}}; },
                          [](const LinearProfile& l) {
                              return json{{"type", "linear"}, {"alpha", l.alpha}, {"beta", l.beta}};
                          },
                          [](const CosineProfile& c) {
                              return json{{"type", "cosine"},
                                          {"mean", c.mean},
                                          {"amplitude", c.amplitude},
                                          {"harmonic", c.harmonic}};
                          },
                          [](const ArrayProfile& a) { return json{{"type", "array"}, {"values", a.values}}; },
                      },
                      d);
}

SourceDescriptor parse_source(const json& j, const std::string& field)
{
    if (!j.is_object() || !j.contains("type") || !j.at("type").is_string()) {
        throw DescriptorError(field, "source must be an object with a string 'type'");
    }
    const std::string type = j.at("type").get<std::string>();
    try {
        if (type == "power") {
            reject_unknown(j, field, {"type", "coefficient", "exponent"});
            const double q = number(j, field, "exponent", 2.0);
            if (!(q >= 0.0)) throw DescriptorError(field, "exponent must be >= 0");
            return PowerSource{number(j, field, "coefficient", 1.0), q};
        }
        if (type == "polynomial") {
            reject_unknown(j, field, {"type", "coefficients"});
            return PolynomialSource{number_list(j, field, "coefficients")};
        }
    } catch (const ConfigError& e) {
        throw DescriptorError(field, e.what());
    }
    throw DescriptorError(field, "unknown source type '" + type + "'");
}

json source_to_json(const SourceDescriptor& s)
{
    return std::visit(overloaded{
                          [](const PowerSource& p) {
                              return json{{"type", "power"}, {"coefficient", p.coefficient}, {"exponent", p.exponent}};
                          },
                          [](const PolynomialSource& p) {
                              return json{{"type", "polynomial"}, {"coefficients", p.coefficients}};
                          },
                      },
                      s);
}

ScenarioConfig scenario_from_json(const json& j)
{
    reject_unknown(j, "",
                   {"params", "control", "grid_points", "dt", "t_final", "initial_u", "initial_v", "mode", "source",
                    "reference_initial", "sample_every", "fit_window", "restart", "description"});
    ScenarioConfig cfg;
    if (!j.contains("params")) throw ConfigError("missing field 'params'");
    const auto& pj = j.at("params");
    reject_unknown(pj, "params", {"m", "k", "b", "gamma", "p", "L", "tension", "a0", "a1"});
    auto& p = cfg.params;
    p.m = number(pj, "params", "m");
    p.k = number(pj, "params", "k");
    p.b = number(pj, "params", "b", 0.0);
    p.gamma = number(pj, "params", "gamma", 0.0);
    p.p = number(pj, "params", "p", 1.0);
    p.L = number(pj, "params", "L");
    p.a0 = number(pj, "params", "a0", 0.0);
    p.a1 = number(pj, "params", "a1", 1.0);
    if (pj.contains("tension")) p.tension = parse_descriptor(pj.at("tension"), "params.tension");

    if (j.contains("control")) {
        const auto& cj = j.at("control");
        reject_unknown(cj, "control", {"n_volumes", "mu", "delta_override"});
        cfg.control.n_volumes = integer(cj, "control", "n_volumes", 1);
        cfg.control.mu = number(cj, "control", "mu", 0.0);
        if (cj.contains("delta_override")) cfg.control.delta_override = number(cj, "control", "delta_override");
    }
    cfg.grid_points = integer(j, "", "grid_points");
    cfg.dt = number(j, "", "dt");
    cfg.t_final = number(j, "", "t_final");
    if (j.contains("initial_u")) cfg.initial_u = parse_descriptor(j.at("initial_u"), "initial_u");
    if (j.contains("initial_v")) cfg.initial_v = parse_descriptor(j.at("initial_v"), "initial_v");
    if (j.contains("mode")) {
        if (!j.at("mode").is_string()) throw ConfigError("field 'mode': expected a string");
        cfg.mode = parse_mode(j.at("mode").get<std::string>());
    }
    if (j.contains("source")) cfg.source = parse_source(j.at("source"), "source");
    if (j.contains("reference_initial")) {
        const auto& rj = j.at("reference_initial");
        reject_unknown(rj, "reference_initial", {"u", "v"});
        ReferenceInitial ref;
        if (rj.contains("u")) ref.u = parse_descriptor(rj.at("u"), "reference_initial.u");
        if (rj.contains("v")) ref.v = parse_descriptor(rj.at("v"), "reference_initial.v");
        cfg.reference_initial = ref;
    }
    cfg.sample_every = integer(j, "", "sample_every", 1);
    if (j.contains("fit_window")) {
        const auto w = number_list(j, "", "fit_window");
        if (w.size() != 2) throw ConfigError("field 'fit_window': expected [t_lo, t_hi]");
        cfg.fit_window = std::make_pair(w[0], w[1]);
    }
    if (j.contains("restart")) {
        if (!j.at("restart").is_string()) throw ConfigError("field 'restart': expected a path string");
        cfg.restart = j.at("restart").get<std::string>();
    }
    return cfg;
}

json scenario_to_json(const ScenarioConfig& cfg)
{
    const auto& p = cfg.params;
    json j;
    j["params"] = {{"m", p.m},   {"k", p.k},   {"b", p.b},   {"gamma", p.gamma},
                   {"p", p.p},   {"L", p.L},   {"a0", p.a0}, {"a1", p.a1},
                   {"tension", descriptor_to_json(p.tension)}};
    j["control"] = {{"n_volumes", cfg.control.n_volumes}, {"mu", cfg.control.mu}};
    if (cfg.control.delta_override) j["control"]["delta_override"] = *cfg.control.delta_override;
    j["grid_points"] = cfg.grid_points;
    j["dt"] = cfg.dt;
    j["t_final"] = cfg.t_final;
    j["initial_u"] = descriptor_to_json(cfg.initial_u);
    j["initial_v"] = descriptor_to_json(cfg.initial_v);
    j["mode"] = to_string(cfg.mode);
    if (cfg.source) j["source"] = source_to_json(*cfg.source);
    if (cfg.reference_initial) {
        j["reference_initial"] = {{"u", descriptor_to_json(cfg.reference_initial->u)},
                                  {"v", descriptor_to_json(cfg.reference_initial->v)}};
    }
    j["sample_every"] = cfg.sample_every;
    if (cfg.fit_window) j["fit_window"] = {cfg.fit_window->first, cfg.fit_window->second};
    if (cfg.restart) j["restart"] = *cfg.restart;
    return j;
}

json read_json_file(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open '" + path.string() + "'");
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
}

ScenarioConfig load_scenario(const std::filesystem::path& path)
{
    const json j = read_json_file(path);
    try {
        return scenario_from_json(j);
    } catch (const ConfigError& e) {
        throw ConfigError(path.string() + ": " + e.what());
    } catch (const DescriptorError& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
}

json to_json(const ConditionReport& r)
{
    json flags = json::array();
    for (const auto& c : r.derivation_variant_flags) {
        flags.push_back({{"name", c.name},
                         {"quantity", c.quantity},
                         {"bound", num(c.bound)},
                         {"value", num(c.value)},
                         {"satisfied", c.satisfied}});
    }
    return {{"lambda1", num(r.lambda1)},
            {"delta", num(r.delta)},
            {"delta_off_theorem", r.delta_off_theorem},
            {"D0", num(r.D0)},
            {"D1", num(r.D1)},
            {"M0", num(r.M0)},
            {"eps", num(r.eps)},
            {"h", num(r.h)},
            {"mu", num(r.mu)},
            {"nonlinear",
             {{"applicable", r.applicable_nonlinear},
              {"h_max", num(r.h_max_nonlinear)},
              {"mu_min", num(r.mu_min_nonlinear)},
              {"satisfied", r.satisfied_nonlinear}}},
            {"linear",
             {{"applicable", r.applicable_linear},
              {"h_max", num(r.h_max_linear)},
              {"mu_min", num(r.mu_min_linear)},
              {"satisfied", r.satisfied_linear}}},
            {"derivation_variant_flags", flags},
            {"notes", r.notes}};
}

json to_json(const DecayFit& f)
{
    return {{"kind", to_string(f.kind)},
            {"rate", num(f.rate)},
            {"intercept", num(f.intercept)},
            {"window", {num(f.window.first), num(f.window.second)}},
            {"r_squared", num(f.r_squared)},
            {"samples", f.samples},
            {"claimed_rate", num(f.claimed_rate)},
            {"alternative_rate", num(f.alternative_rate)},
            {"D1", num(f.D1)},
            {"M0", num(f.M0)}};
}

json to_json(const BoundedProduct& b)
{
    return {{"sup", num(b.sup)}, {"head_sup", num(b.head_sup)}, {"tail_sup", num(b.tail_sup)},
            {"is_bounded", b.is_bounded}};
}

json to_json(const EnergyReport& e)
{
    return {{"t", num(e.t)},
            {"norm_v_sq", num(e.norm_v_sq)},
            {"norm_uxx_sq", num(e.norm_uxx_sq)},
            {"norm_u_sq", num(e.norm_u_sq)},
            {"norm_sum", num(e.norm_sum)},
            {"tension_energy", num(e.tension_energy)},
            {"bn", num(e.bn)},
            {"source_energy", num(e.source_energy)},
            {"script_E", num(e.script_E)},
            {"big_E", num(e.big_E)},
            {"script_E1", num(e.script_E1)},
            {"W", num(e.W)},
            {"dissipation", num(e.dissipation)}};
}

std::string format_double(double x)
{
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

const std::vector<std::string>& timeseries_columns()
{
    static const std::vector<std::string> cols = {
        "t",      "norm_v_sq", "norm_uxx_sq", "norm_sum",  "norm_u_sq", "tension_energy", "bn",
        "source_energy", "script_E", "big_E", "script_E1", "W", "dissipation"};
    return cols;
}

std::string timeseries_csv(std::span<const EnergyReport> samples)
{
    std::string out;
    const auto& cols = timeseries_columns();
    for (std::size_t i = 0; i < cols.size(); ++i) {
        out += cols[i];
        out += i + 1 < cols.size() ? ',' : '\n';
    }
    for (const auto& e : samples) {
        const double row[] = {e.t,  e.norm_v_sq,   e.norm_uxx_sq, e.norm_sum,  e.norm_u_sq,
                              e.tension_energy, e.bn, e.source_energy, e.script_E, e.big_E,
                              e.script_E1, e.W, e.dissipation};
        for (std::size_t i = 0; i < std::size(row); ++i) {
            out += format_double(row[i]);
            out += i + 1 < std::size(row) ? ',' : '\n';
        }
    }
    return out;
}

void write_text_file(const std::filesystem::path& path, const std::string& text)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
    out << text;
}

void write_timeseries_csv(const std::filesystem::path& path, std::span<const EnergyReport> samples)
{
    write_text_file(path, timeseries_csv(samples));
}

std::vector<TimeValue> read_csv_series(const std::filesystem::path& path, const std::string& column)
{
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open '" + path.string() + "'");
    std::string line;
    if (!std::getline(in, line)) throw ConfigError(path.string() + ": empty CSV");
    auto split = [](const std::string& s) {
        std::vector<std::string> parts;
        std::stringstream ss(s);
        std::string item;
        while (std::getline(ss, item, ',')) parts.push_back(item);
        return parts;
    };
    const auto header = split(line);
    const auto find = [&](const std::string& name) {
        const auto it = std::find(header.begin(), header.end(), name);
        if (it == header.end()) throw ConfigError(path.string() + ": no column '" + name + "'");
        return static_cast<std::size_t>(it - header.begin());
    };
    const std::size_t ti = find("t");
    const std::size_t vi = find(column);
    std::vector<TimeValue> out;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        const auto parts = split(line);
        if (parts.size() <= std::max(ti, vi)) {
            throw ConfigError(path.string() + ": line " + std::to_string(lineno) + " is short");
        }
        try {
            out.push_back({std::stod(parts[ti]), std::stod(parts[vi])});
        } catch (const std::exception&) {
            throw ConfigError(path.string() + ": line " + std::to_string(lineno) + " has a non-numeric entry");
        }
    }
    return out;
}

namespace {

constexpr char kMagic[8] = {'R', 'I', 'S', 'E', 'R', 'S', 'T', '1'};

static_assert(std::endian::native == std::endian::little, "state dumps assume a little-endian host");

template <class T>
void put(std::ofstream& out, const T& value)
{
    out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <class T>
T get(std::ifstream& in)
{
    T value{};
    in.read(reinterpret_cast<char*>(&value), sizeof(T));
    if (!in) throw std::runtime_error("state dump truncated");
    return value;
}

}  // namespace

void write_state_dump(const std::filesystem::path& path, const StateDump& dump)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
    const std::uint64_t M = dump.primary.u.size();
    out.write(kMagic, sizeof kMagic);
    put<std::uint32_t>(out, dump.reference ? 2u : 1u);
    put<std::uint32_t>(out, 0u);
    put<std::uint64_t>(out, M);
    put<double>(out, dump.primary.t);
    put<double>(out, dump.length);
    auto fields = [&](const State& s) {
        if (s.u.size() != M || s.v.size() != M) throw std::invalid_argument("state dump: inconsistent field sizes");
        out.write(reinterpret_cast<const char*>(s.u.data()), static_cast<std::streamsize>(M * sizeof(double)));
        out.write(reinterpret_cast<const char*>(s.v.data()), static_cast<std::streamsize>(M * sizeof(double)));
    };
    fields(dump.primary);
    if (dump.reference) fields(*dump.reference);
}

StateDump read_state_dump(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open '" + path.string() + "'");
    char magic[8];
    in.read(magic, sizeof magic);
    if (!in || std::memcmp(magic, kMagic, sizeof kMagic) != 0) {
        throw std::runtime_error(path.string() + ": not a state dump");
    }
    const auto pairs = get<std::uint32_t>(in);
    (void)get<std::uint32_t>(in);
    const auto M = get<std::uint64_t>(in);
    if (pairs < 1 || pairs > 2 || M < 2 || M > (1u << 26)) throw std::runtime_error("state dump: bad header");
    StateDump dump;
    const double t = get<double>(in);
    dump.length = get<double>(in);
    auto fields = [&]() {
        State s{Field(M), Field(M), t};
        in.read(reinterpret_cast<char*>(s.u.data()), static_cast<std::streamsize>(M * sizeof(double)));
        in.read(reinterpret_cast<char*>(s.v.data()), static_cast<std::streamsize>(M * sizeof(double)));
        if (!in) throw std::runtime_error("state dump truncated");
        return s;
    };
    dump.primary = fields();
    if (pairs == 2) dump.reference = fields();
    return dump;
}

std::string render_svg(const PlotSpec& spec)
{
    constexpr double W = 800, H = 500, left = 80, right = 20, top = 40, bottom = 60;
    std::vector<TimeValue> pts;
    for (const auto& p : spec.series) {
        if (p.value > 0.0 && std::isfinite(p.value) && (!spec.log_time || p.t > 0.0)) pts.push_back(p);
    }
    std::ostringstream s;
    s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\" viewBox=\"0 0 " << W
      << " " << H << "\">\n";
    s << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    s << "<text x=\"" << W / 2 << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"16\">"
      << spec.title << "</text>\n";
    if (pts.size() < 2) {
        s << "<text x=\"" << W / 2 << "\" y=\"" << H / 2
          << "\" text-anchor=\"middle\" font-family=\"sans-serif\">no positive data</text>\n</svg>\n";
        return s.str();
    }
    auto tx = [&](double t) { return spec.log_time ? std::log10(t) : t; };
    double xmin = tx(pts.front().t), xmax = xmin, ymin = std::log10(pts.front().value), ymax = ymin;
    for (const auto& p : pts) {
        xmin = std::min(xmin, tx(p.t));
        xmax = std::max(xmax, tx(p.t));
        ymin = std::min(ymin, std::log10(p.value));
        ymax = std::max(ymax, std::log10(p.value));
    }
    if (xmax == xmin) xmax = xmin + 1;
    ymin = std::floor(ymin);
    ymax = std::ceil(ymax);
    if (ymax == ymin) ymax = ymin + 1;
    auto px = [&](double x) { return left + (x - xmin) / (xmax - xmin) * (W - left - right); };
    auto py = [&](double y) { return H - bottom - (y - ymin) / (ymax - ymin) * (H - top - bottom); };

    s << "<g stroke=\"black\" fill=\"none\"><rect x=\"" << left << "\" y=\"" << top << "\" width=\""
      << W - left - right << "\" height=\"" << H - top - bottom << "\"/></g>\n";
    const int decades = static_cast<int>(ymax - ymin);
    const int step = std::max(1, decades / 10);
    for (int d = static_cast<int>(ymin); d <= static_cast<int>(ymax); d += step) {
        s << "<line x1=\"" << left << "\" x2=\"" << W - right << "\" y1=\"" << py(d) << "\" y2=\"" << py(d)
          << "\" stroke=\"#ddd\"/>\n";
        s << "<text x=\"" << left - 6 << "\" y=\"" << py(d) + 4
          << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">1e" << d << "</text>\n";
    }
    for (int i = 0; i <= 5; ++i) {
        const double x = xmin + (xmax - xmin) * i / 5.0;
        const double label = spec.log_time ? std::pow(10.0, x) : x;
        s << "<text x=\"" << px(x) << "\" y=\"" << H - bottom + 18
          << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" << format_double(std::round(label * 100) / 100)
          << "</text>\n";
    }
    s << "<text x=\"" << W / 2 << "\" y=\"" << H - 16 << "\" text-anchor=\"middle\" font-family=\"sans-serif\">"
      << (spec.log_time ? "t (log scale)" : "t") << "</text>\n";

    s << "<polyline fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"1.5\" points=\"";
    const std::size_t stride = std::max<std::size_t>(1, pts.size() / 2000);
    for (std::size_t i = 0; i < pts.size(); i += stride) {
        s << px(tx(pts[i].t)) << "," << py(std::log10(pts[i].value)) << " ";
    }
    s << "\"/>\n";

    if (spec.reference_rate) {
        const double rate = *spec.reference_rate;
        auto ref = [&](double t) {
            return spec.log_time ? spec.reference_anchor_value * std::pow(t / spec.reference_anchor_t, -rate)
                                 : spec.reference_anchor_value * std::exp(-rate * (t - spec.reference_anchor_t));
        };
        s << "<polyline fill=\"none\" stroke=\"#d62728\" stroke-dasharray=\"6,4\" points=\"";
        for (std::size_t i = 0; i < pts.size(); i += stride) {
            const double v = ref(pts[i].t);
            if (!(v > 0.0)) continue;
            const double y = std::clamp(std::log10(v), ymin, ymax);
            s << px(tx(pts[i].t)) << "," << py(y) << " ";
        }
        s << "\"/>\n";
        s << "<text x=\"" << W - right - 6 << "\" y=\"" << top + 16
          << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\" fill=\"#d62728\">"
          << spec.reference_label << "</text>\n";
    }
    s << "</svg>\n";
    return s.str();
}

}  // namespace riser
