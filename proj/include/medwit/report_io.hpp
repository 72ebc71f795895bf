#pragma once

/// Result serialization. CSV columns are fixed (mode, seed, t, p, dim_A, T,
/// dim_B, comm_norm, rhs_bound, sup_bound, measure, delta_q, lhs, slack,
/// wall_ms); numbers carry 17 significant digits so every row survives a
/// CSV -> JSON -> CSV round trip byte-exactly. Files are written to a temp
/// path and renamed into place.

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "medwit/version.hpp"
#include "medwit/witness.hpp"

namespace medwit {

using njson = nlohmann::json;

inline std::string format_sig17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline std::string csv_header() {
    return "mode,seed,t,p,dim_A,T,dim_B,comm_norm,rhs_bound,sup_bound,measure,delta_q,lhs,slack,wall_ms";
}

inline std::string csv_row(const WitnessReport& r) {
    std::string out;
    out += r.mode;
    out += ',' + std::to_string(r.seed);
    out += ',' + format_sig17(r.t);
    out += ',' + format_sig17(r.uniform_p());
    out += ',' + std::to_string(r.dim_a);
    out += ',' + std::to_string(r.t_qubits);
    out += ',' + std::to_string(r.dim_b);
    out += ',' + format_sig17(r.comm_norm);
    out += ',' + format_sig17(r.rhs_bound);
    out += ',' + format_sig17(r.sup_bound);
    out += ',' + measure_kind_name(r.measure);
    out += ',' + format_sig17(r.delta_q);
    out += ',' + format_sig17(r.lhs);
    out += ',' + format_sig17(r.slack);
    out += ',' + format_sig17(r.wall_ms);
    return out;
}

inline njson report_to_json(const WitnessReport& r) {
    njson j;
    j["mode"] = r.mode;
    j["seed"] = r.seed;
    j["t"] = r.t;
    j["p"] = r.uniform_p();
    j["dim_A"] = r.dim_a;
    j["T"] = r.t_qubits;
    j["dim_B"] = r.dim_b;
    j["comm_norm"] = r.comm_norm;
    j["rhs_bound"] = r.rhs_bound;
    j["sup_bound"] = r.sup_bound;
    j["measure"] = measure_kind_name(r.measure);
    j["delta_q"] = r.delta_q;
    j["lhs"] = r.lhs;
    j["slack"] = r.slack;
    j["wall_ms"] = r.wall_ms;
    return j;
}

inline WitnessReport report_from_json(const njson& j) {
    WitnessReport r;
    r.mode = j.at("mode").get<std::string>();
    r.seed = j.at("seed").get<std::uint64_t>();
    r.t = j.at("t").get<double>();
    r.p.assign(static_cast<std::size_t>(j.at("T").get<int>()), j.at("p").get<double>());
    r.dim_a = j.at("dim_A").get<int>();
    r.t_qubits = j.at("T").get<int>();
    r.dim_b = j.at("dim_B").get<int>();
    r.comm_norm = j.at("comm_norm").get<double>();
    r.rhs_bound = j.at("rhs_bound").get<double>();
    r.sup_bound = j.at("sup_bound").get<double>();
    std::string m = j.at("measure").get<std::string>();
    r.measure = m == "log_negativity"        ? MeasureKind::log_negativity
                : m == "negativity"          ? MeasureKind::negativity
                                             : MeasureKind::relative_entropy_of_entanglement;
    r.delta_q = j.at("delta_q").get<double>();
    r.lhs = j.at("lhs").get<double>();
    r.slack = j.at("slack").get<double>();
    r.wall_ms = j.at("wall_ms").get<double>();
    return r;
}

inline std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw io_error("cannot read '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

inline void write_file_atomic(const std::string& path, const std::string& content) {
    namespace fs = std::filesystem;
    fs::path target(path);
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw io_error("cannot open '" + tmp.string() + "' for writing");
        out << content;
        if (!out.flush()) throw io_error("short write to '" + tmp.string() + "'");
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) throw io_error("cannot rename '" + tmp.string() + "' to '" + path + "': " + ec.message());
}

inline std::string make_manifest(const std::string& mode, const std::string& config_path,
                                 const std::string& config_bytes, std::uint64_t seed,
                                 double wall_ms, const std::vector<std::string>& outputs) {
    njson j;
    j["tool"] = "medwit";
    j["version"] = kVersion;
    j["mode"] = mode;
    j["config_path"] = config_path;
    char hash[32];
    std::snprintf(hash, sizeof(hash), "0x%016llx",
                  static_cast<unsigned long long>(fnv1a64(config_bytes)));
    j["config_fnv1a64"] = hash;
    j["seed"] = seed;
    j["eigen"] = std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) +
                 "." + std::to_string(EIGEN_MINOR_VERSION);
    j["wall_ms"] = wall_ms;
    j["outputs"] = outputs;
    return j.dump(2) + "\n";
}

}  // namespace medwit
