#include "pairlim/io.hpp"

#include "pairlim/error.hpp"

#include <fmt/format.h>
#include <json.hpp>
#include <openssl/sha.h>

#include <fstream>
#include <set>
#include <sstream>

namespace pairlim {

using nlohmann::json;
using ojson = nlohmann::ordered_json;

namespace {

[[noreturn]] void bad(const std::string& what) { throw Error(ErrorCode::ConfigError, what); }

void require_object(const json& j, const std::string& where, const std::set<std::string>& allowed) {
    if (!j.is_object()) bad(where + " must be an object");
    for (const auto& [key, value] : j.items()) {
        if (!allowed.count(key)) bad("unknown key '" + key + "' in " + where);
    }
}

template <class T>
T get(const json& j, const std::string& key, const std::string& where) {
    try {
        return j.at(key).get<T>();
    } catch (const json::exception& e) {
        bad("bad value for " + where + "." + key + ": " + e.what());
    }
}

template <class T>
void get_if(const json& j, const std::string& key, const std::string& where, T& out) {
    if (j.contains(key)) out = get<T>(j, key, where);
}

RegimeKind regime_from(const std::string& s) {
    if (s == "dynamic") return RegimeKind::Dynamic;
    if (s == "overloaded") return RegimeKind::FixedOverloaded;
    if (s == "critical") return RegimeKind::FixedCritical;
    bad("unknown regime kind '" + s + "'");
}

Timescale timescale_from(const std::string& s) {
    if (s == "raw") return Timescale::Raw;
    if (s == "scaled") return Timescale::Scaled;
    if (s == "critical") return Timescale::Critical;
    bad("unknown timescale '" + s + "'");
}

InitKind init_from(const std::string& s) {
    if (s == "explicit") return InitKind::Explicit;
    if (s == "fraction") return InitKind::Fraction;
    if (s == "equilibrium") return InitKind::Equilibrium;
    bad("unknown initial kind '" + s + "'");
}

json to_json(const ExperimentConfig& c) {
    json j;
    j["model"] = {{"c", c.model.c},
                  {"lambda", c.model.lambda},
                  {"eta", c.model.eta},
                  {"beta", c.model.beta},
                  {"delta", c.model.delta}};
    j["regime"] = {{"kind", to_string(c.regime.kind)}};
    if (c.regime.kind == RegimeKind::FixedOverloaded) j["regime"]["r"] = c.regime.r;
    if (c.N_list.size() == 1) {
        j["N"] = c.N_list.front();
    } else {
        j["N_list"] = c.N_list;
    }
    json init = {{"kind", to_string(c.initial.kind)}};
    if (c.initial.kind == InitKind::Explicit) init["f0"] = c.initial.f0;
    if (c.initial.kind == InitKind::Fraction) init["value"] = c.initial.fraction;
    if (c.initial.z0 != 0) init["z0"] = c.initial.z0;
    j["initial"] = init;
    j["horizon"] = c.horizon;
    j["grid_points"] = c.grid_points;
    if (c.timescale) j["timescale"] = to_string(*c.timescale);
    j["replications"] = c.replications;
    j["seed"] = c.seed;
    j["output_dir"] = c.output_dir;
    const auto& o = c.options;
    json opt = {{"burn_in", o.burn_in},     {"windows", o.windows}, {"tolerance", o.tolerance},
                {"pass_fraction", o.pass_fraction}, {"t_star", o.t_star}, {"K", o.K},
                {"load", o.load},           {"a", o.a},             {"limit_shift", o.limit_shift},
                {"max_states", o.max_states}};
    if (o.z_cap) opt["z_cap"] = *o.z_cap;
    j["options"] = opt;
    return j;
}

ExperimentConfig from_json(const json& j) {
    require_object(j, "config",
                   {"model", "regime", "N", "N_list", "initial", "horizon", "grid_points", "timescale", "replications",
                    "seed", "output_dir", "options"});
    ExperimentConfig c;
    if (!j.contains("model")) bad("config.model is required");
    const auto& m = j.at("model");
    require_object(m, "model", {"c", "lambda", "eta", "beta", "delta"});
    c.model.c = get<std::vector<double>>(m, "c", "model");
    c.model.lambda = get<std::vector<double>>(m, "lambda", "model");
    c.model.eta = get<std::vector<double>>(m, "eta", "model");
    get_if(m, "beta", "model", c.model.beta);
    get_if(m, "delta", "model", c.model.delta);

    if (!j.contains("regime")) bad("config.regime is required");
    const auto& r = j.at("regime");
    require_object(r, "regime", {"kind", "r"});
    c.regime.kind = regime_from(get<std::string>(r, "kind", "regime"));
    get_if(r, "r", "regime", c.regime.r);
    if (c.regime.kind != RegimeKind::FixedOverloaded && c.regime.r != 0.0) {
        bad("regime.r applies to the overloaded regime only");
    }

    if (j.contains("N") == j.contains("N_list")) bad("exactly one of N and N_list is required");
    if (j.contains("N")) {
        c.N_list = {get<Count>(j, "N", "config")};
    } else {
        c.N_list = get<std::vector<Count>>(j, "N_list", "config");
        if (c.N_list.empty()) bad("N_list must not be empty");
        for (std::size_t k = 1; k < c.N_list.size(); ++k) {
            if (c.N_list[k] <= c.N_list[k - 1]) bad("N_list must be strictly increasing");
        }
    }

    if (j.contains("initial")) {
        const auto& in = j.at("initial");
        require_object(in, "initial", {"kind", "f0", "value", "z0"});
        c.initial.kind = init_from(get<std::string>(in, "kind", "initial"));
        if (in.contains("f0") && c.initial.kind != InitKind::Explicit) bad("initial.f0 needs kind explicit");
        if (in.contains("value") && c.initial.kind != InitKind::Fraction) bad("initial.value needs kind fraction");
        if (c.initial.kind == InitKind::Explicit) c.initial.f0 = get<std::vector<double>>(in, "f0", "initial");
        if (c.initial.kind == InitKind::Fraction) c.initial.fraction = get<double>(in, "value", "initial");
        get_if(in, "z0", "initial", c.initial.z0);
    }
    get_if(j, "horizon", "config", c.horizon);
    get_if(j, "grid_points", "config", c.grid_points);
    if (j.contains("timescale")) c.timescale = timescale_from(get<std::string>(j, "timescale", "config"));
    get_if(j, "replications", "config", c.replications);
    get_if(j, "seed", "config", c.seed);
    get_if(j, "output_dir", "config", c.output_dir);

    if (j.contains("options")) {
        const auto& o = j.at("options");
        require_object(o, "options",
                       {"burn_in", "windows", "tolerance", "pass_fraction", "t_star", "K", "load", "a", "z_cap",
                        "limit_shift", "max_states"});
        auto& opt = c.options;
        get_if(o, "burn_in", "options", opt.burn_in);
        get_if(o, "windows", "options", opt.windows);
        get_if(o, "tolerance", "options", opt.tolerance);
        get_if(o, "pass_fraction", "options", opt.pass_fraction);
        get_if(o, "t_star", "options", opt.t_star);
        get_if(o, "K", "options", opt.K);
        get_if(o, "load", "options", opt.load);
        get_if(o, "a", "options", opt.a);
        if (o.contains("z_cap")) opt.z_cap = get<Count>(o, "z_cap", "options");
        get_if(o, "limit_shift", "options", opt.limit_shift);
        get_if(o, "max_states", "options", opt.max_states);
    }
    return c;
}

std::string sha1_hex(const std::string& data) {
    unsigned char digest[SHA_DIGEST_LENGTH];
    SHA1(reinterpret_cast<const unsigned char*>(data.data()), data.size(), digest);
    std::string out;
    for (unsigned char b : digest) out += fmt::format("{:02x}", b);
    return out;
}

ojson report_to_json(const VerdictReport& r, const std::string& header) {
    ojson j;
    j["header"] = header;
    j["claim"] = r.claim;
    j["statistic"] = r.statistic;
    j["observed"] = r.observed;
    j["threshold"] = r.threshold;
    j["pass"] = r.pass;
    j["N_values"] = r.N_values;
    j["replications"] = r.replications;
    j["seeds"] = r.seeds;
    ojson details = ojson::object();
    for (const auto& [k, v] : r.details) details[k] = v;
    j["details"] = details;
    if (!r.columns.empty()) {
        j["columns"] = r.columns;
        j["rows"] = r.rows;
    }
    return j;
}

}  // namespace

ExperimentConfig parse_config(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        bad(std::string("config is not valid JSON: ") + e.what());
    }
    auto c = from_json(j);
    validate(c);
    return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::IoError, "cannot read " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::string dump_config(const ExperimentConfig& config) { return to_json(config).dump(2) + "\n"; }

std::string config_hash(const ExperimentConfig& config) {
    ExperimentConfig keyed = config;
    keyed.output_dir.clear();
    const std::string text = dump_config(keyed);
    std::string framed = "blob " + std::to_string(text.size());
    framed.push_back('\0');
    framed += text;
    return sha1_hex(framed);
}

std::string header_line(const std::string& hash, std::uint64_t seed) {
    return fmt::format("# {} {} config_hash={} seed={}", kToolName, kToolVersion, hash, seed);
}

std::string format_real(double x) { return fmt::format("{:.17g}", x); }

std::string trajectory_csv(const Trajectory& traj, const std::string& header) {
    std::string out = header + "\ntime";
    const std::size_t J = traj.model.types();
    for (std::size_t j = 0; j < J; ++j) out += fmt::format(",f_{}", j + 1);
    out += ",z\n";
    for (std::size_t k = 0; k < traj.times.size(); ++k) {
        out += format_real(traj.times[k]);
        for (Count f : traj.states[k].f) out += fmt::format(",{}", f);
        out += fmt::format(",{}\n", traj.states[k].z);
    }
    return out;
}

std::string curve_csv(const LimitCurve& curve, const std::vector<std::string>& names, const std::string& header) {
    if (names.size() != curve.dim()) throw Error(ErrorCode::DimensionMismatch, "one column name per curve coordinate");
    std::string out = header + "\ntime";
    for (const auto& n : names) out += "," + n;
    out += "\n";
    for (std::size_t k = 0; k < curve.size(); ++k) {
        out += format_real(curve.grid[k]);
        for (double v : curve.values[k]) out += "," + format_real(v);
        out += "\n";
    }
    return out;
}

std::string table_csv(const VerdictReport& report, const std::string& header) {
    std::string out = header + "\n";
    for (std::size_t c = 0; c < report.columns.size(); ++c) out += (c ? "," : "") + report.columns[c];
    out += "\n";
    for (const auto& row : report.rows) {
        for (std::size_t c = 0; c < row.size(); ++c) out += (c ? "," : "") + format_real(row[c]);
        out += "\n";
    }
    return out;
}

std::string report_json(const VerdictReport& report, const std::string& header) {
    return report_to_json(report, header).dump(2) + "\n";
}

std::string error_json(const std::string& code, const std::string& message, const std::string& header) {
    ojson j;
    j["header"] = header;
    j["error"] = code;
    j["message"] = message;
    return j.dump() + "\n";
}

std::string manifest_json(const std::string& command, const ExperimentConfig& config,
                          const std::vector<ManifestEntry>& files) {
    const std::string hash = config_hash(config);
    ojson j;
    j["header"] = header_line(hash, config.seed);
    j["tool"] = kToolName;
    j["version"] = kToolVersion;
    j["command"] = command;
    j["config_hash"] = hash;
    j["seed"] = config.seed;
    j["replications"] = config.replications;
    j["N_list"] = config.N_list;
    ojson list = ojson::array();
    for (const auto& f : files) list.push_back({{"path", f.path}, {"kind", f.kind}});
    j["files"] = list;
    j["config"] = ojson::parse(dump_config(config));
    return j.dump(2) + "\n";
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::error_code ec;
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
    out << text;
    if (!out) throw Error(ErrorCode::IoError, "write failed for " + path.string());
}

}  // namespace pairlim
