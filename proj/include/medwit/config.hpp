#pragma once

/// Experiment config: a flat dotted-key text file, one `section.key = value`
/// per line, `#` comments. Repeatable keys (hamiltonians.am_term/mb_term)
/// accumulate. The parser validates types, ranges and key names and reports
/// the offending line on error. The full schema is documented in README.md
/// and mirrored by the sample files under configs/.

#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "medwit/correlations.hpp"
#include "medwit/hamiltonians.hpp"
#include "medwit/witness.hpp"

namespace medwit {

enum class RunMode { bound, evolve, sweep_t, sweep_p, verify, randcheck };

inline std::string run_mode_name(RunMode m) {
    switch (m) {
        case RunMode::bound: return "bound";
        case RunMode::evolve: return "evolve";
        case RunMode::sweep_t: return "sweep_t";
        case RunMode::sweep_p: return "sweep_p";
        case RunMode::verify: return "verify";
        default: return "randcheck";
    }
}

inline RunMode run_mode_from_string(const std::string& s) {
    if (s == "bound") return RunMode::bound;
    if (s == "evolve") return RunMode::evolve;
    if (s == "sweep_t") return RunMode::sweep_t;
    if (s == "sweep_p") return RunMode::sweep_p;
    if (s == "verify") return RunMode::verify;
    if (s == "randcheck") return RunMode::randcheck;
    throw config_error("unknown mode '" + s + "'");
}

enum class StateKind { product_plus_zero_plus, explicit_amplitudes };

struct VerifySizes {
    int commutator_instances = 60;
    int dephasing_instances = 40;
    int zassenhaus_instances = 8;
    int null_instances = 40;
    double tol_oracle = 1e-10;
    double tol_dephasing = 1e-12;
    double tol_null = 1e-10;
    double slope_band = 0.2;
};

struct OutputConfig {
    std::string csv = "results.csv";
    std::optional<std::string> json;
    std::string manifest = "manifest.json";
    std::string verify_report = "verify_report.txt";
    // When true (default) the wall_ms CSV column is written as 0 so that
    // identical config+seed gives byte-identical CSV; measured totals always
    // go to the manifest.
    bool deterministic_timing = true;
};

struct ExperimentConfig {
    int dim_a = 2;
    int t_qubits = 1;
    int dim_b = 2;

    bool uses_ensemble = false;
    HamiltonianSpec explicit_terms;
    EnsembleSpec ensemble;
    bool seed_set = false;

    StateKind state_kind = StateKind::product_plus_zero_plus;
    std::vector<complexd> amplitudes;

    CorrelationMeasure measure;
    BoundConfig bound;

    RunMode mode = RunMode::bound;
    double t = 0.5;
    std::vector<double> t_grid;
    std::vector<double> p_grid;
    int instances = 20;

    VerifySizes verify;
    OutputConfig output;
};

namespace detail {

struct ConfigEntry {
    std::string value;
    int line;
};

class RawConfig {
public:
    explicit RawConfig(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw config_error("cannot open config file '" + path + "'");
        std::string line;
        int lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            auto hash = line.find('#');
            if (hash != std::string::npos) line = line.substr(0, hash);
            std::string trimmed = trim(line);
            if (trimmed.empty()) continue;
            auto eq = trimmed.find('=');
            if (eq == std::string::npos)
                throw config_error(where(lineno) + "expected 'key = value'");
            std::string key = trim(trimmed.substr(0, eq));
            std::string value = trim(trimmed.substr(eq + 1));
            if (key.empty()) throw config_error(where(lineno) + "empty key");
            if (value.empty()) throw config_error(where(lineno) + "empty value for '" + key + "'");
            if (!repeatable(key) && entries_.count(key))
                throw config_error(where(lineno) + "duplicate key '" + key + "' (first at line " +
                                   std::to_string(entries_[key].front().line) + ")");
            entries_[key].push_back({value, lineno});
        }
    }

    bool has(const std::string& key) const { return entries_.count(key) > 0; }

    const ConfigEntry& single(const std::string& key) const {
        return entries_.at(key).front();
    }

    std::optional<std::string> get_string(const std::string& key) {
        consumed_.insert(key);
        auto it = entries_.find(key);
        if (it == entries_.end()) return std::nullopt;
        return it->second.front().value;
    }

    std::vector<ConfigEntry> get_all(const std::string& key) {
        consumed_.insert(key);
        auto it = entries_.find(key);
        if (it == entries_.end()) return {};
        return it->second;
    }

    std::optional<double> get_double(const std::string& key) {
        auto s = get_string(key);
        if (!s) return std::nullopt;
        return parse_double(*s, single(key).line, key);
    }

    std::optional<int> get_int(const std::string& key) {
        auto s = get_string(key);
        if (!s) return std::nullopt;
        try {
            std::size_t pos = 0;
            int v = std::stoi(*s, &pos);
            if (pos != s->size()) throw std::invalid_argument("");
            return v;
        } catch (const std::exception&) {
            throw config_error(where(single(key).line) + "expected an integer for '" + key + "'");
        }
    }

    std::optional<std::uint64_t> get_u64(const std::string& key) {
        auto s = get_string(key);
        if (!s) return std::nullopt;
        try {
            std::size_t pos = 0;
            std::uint64_t v = std::stoull(*s, &pos);
            if (pos != s->size()) throw std::invalid_argument("");
            return v;
        } catch (const std::exception&) {
            throw config_error(where(single(key).line) + "expected an unsigned integer for '" + key + "'");
        }
    }

    std::optional<bool> get_bool(const std::string& key) {
        auto s = get_string(key);
        if (!s) return std::nullopt;
        if (*s == "true") return true;
        if (*s == "false") return false;
        throw config_error(where(single(key).line) + "expected true/false for '" + key + "'");
    }

    std::optional<std::vector<double>> get_grid(const std::string& key) {
        auto s = get_string(key);
        if (!s) return std::nullopt;
        std::vector<double> grid;
        for (const std::string& tok : tokens(*s))
            grid.push_back(parse_double(tok, single(key).line, key));
        if (grid.empty())
            throw config_error(where(single(key).line) + "grid '" + key + "' is empty");
        for (std::size_t i = 1; i < grid.size(); ++i)
            if (grid[i] <= grid[i - 1])
                throw config_error(where(single(key).line) + "grid '" + key +
                                   "' must be strictly increasing");
        return grid;
    }

    // Every present key must have been consumed by a typed getter.
    void check_all_consumed() const {
        for (const auto& [key, entries] : entries_)
            if (!consumed_.count(key))
                throw config_error(where(entries.front().line) + "unknown key '" + key + "'");
    }

    static std::string trim(const std::string& s) {
        auto begin = s.find_first_not_of(" \t\r");
        if (begin == std::string::npos) return "";
        auto end = s.find_last_not_of(" \t\r");
        return s.substr(begin, end - begin + 1);
    }

    static std::vector<std::string> tokens(const std::string& s) {
        std::vector<std::string> out;
        std::istringstream in(s);
        std::string tok;
        while (in >> tok) out.push_back(tok);
        return out;
    }

    static std::string where(int line) { return "config line " + std::to_string(line) + ": "; }

    static double parse_double(const std::string& s, int line, const std::string& key) {
        try {
            std::size_t pos = 0;
            double v = std::stod(s, &pos);
            if (pos != s.size()) throw std::invalid_argument("");
            return v;
        } catch (const std::exception&) {
            throw config_error(where(line) + "expected a number for '" + key + "', got '" + s + "'");
        }
    }

private:
    static bool repeatable(const std::string& key) {
        return key == "hamiltonians.am_term" || key == "hamiltonians.mb_term";
    }

    std::map<std::string, std::vector<ConfigEntry>> entries_;
    std::set<std::string> consumed_;
};

inline CouplingTerm parse_term(const ConfigEntry& entry, int t_qubits, const std::string& key) {
    auto toks = RawConfig::tokens(entry.value);
    if (toks.size() != 3)
        throw config_error(RawConfig::where(entry.line) + key +
                           " must be 'coeff probe_op mediator_labels'");
    CouplingTerm term;
    term.coeff = RawConfig::parse_double(toks[0], entry.line, key);
    term.probe_op = toks[1];
    if (static_cast<int>(toks[2].size()) != t_qubits)
        throw config_error(RawConfig::where(entry.line) + "expected " + std::to_string(t_qubits) +
                           " mediator labels, got '" + toks[2] + "'");
    for (char c : toks[2]) {
        try {
            term.med.push_back(pauli_from_char(c));
        } catch (const validation_error&) {
            throw config_error(RawConfig::where(entry.line) + "mediator labels must be I/X/Y/Z");
        }
    }
    return term;
}

}  // namespace detail

inline ExperimentConfig load_config(const std::string& path) {
    detail::RawConfig raw(path);
    ExperimentConfig cfg;

    if (auto v = raw.get_int("layout.dim_a")) cfg.dim_a = *v;
    if (auto v = raw.get_int("layout.mediator_qubits")) cfg.t_qubits = *v;
    if (auto v = raw.get_int("layout.dim_b")) cfg.dim_b = *v;
    if (cfg.dim_a < 1 || cfg.dim_b < 1 || cfg.t_qubits < 1)
        throw config_error("layout dimensions must be >= 1 (and mediator_qubits >= 1)");

    std::string source = raw.get_string("hamiltonians.source").value_or("explicit");
    if (source == "ensemble") {
        cfg.uses_ensemble = true;
        if (auto v = raw.get_string("hamiltonians.kind"))
            cfg.ensemble.kind = ensemble_kind_from_string(*v);
        if (auto v = raw.get_u64("hamiltonians.seed")) {
            cfg.ensemble.seed = *v;
            cfg.seed_set = true;
        }
        if (auto v = raw.get_int("hamiltonians.term_count")) cfg.ensemble.term_count = *v;
        if (auto v = raw.get_double("hamiltonians.coeff_scale")) cfg.ensemble.coeff_scale = *v;
    } else if (source == "explicit") {
        for (const auto& e : raw.get_all("hamiltonians.am_term"))
            cfg.explicit_terms.terms_am.push_back(detail::parse_term(e, cfg.t_qubits, "am_term"));
        for (const auto& e : raw.get_all("hamiltonians.mb_term"))
            cfg.explicit_terms.terms_mb.push_back(detail::parse_term(e, cfg.t_qubits, "mb_term"));
        if (auto v = raw.get_u64("hamiltonians.seed")) {
            cfg.ensemble.seed = *v;
            cfg.seed_set = true;
        }
    } else {
        throw config_error("hamiltonians.source must be 'explicit' or 'ensemble'");
    }

    std::string state = raw.get_string("initial_state.kind").value_or("product_plus_zero_plus");
    if (state == "product_plus_zero_plus") {
        cfg.state_kind = StateKind::product_plus_zero_plus;
    } else if (state == "explicit") {
        cfg.state_kind = StateKind::explicit_amplitudes;
        auto spec = raw.get_string("initial_state.amplitudes");
        if (!spec) throw config_error("initial_state.kind = explicit requires initial_state.amplitudes");
        for (const std::string& tok : detail::RawConfig::tokens(*spec)) {
            auto comma = tok.find(',');
            double re = 0, im = 0;
            try {
                if (comma == std::string::npos) {
                    re = std::stod(tok);
                } else {
                    re = std::stod(tok.substr(0, comma));
                    im = std::stod(tok.substr(comma + 1));
                }
            } catch (const std::exception&) {
                throw config_error("bad amplitude token '" + tok + "'");
            }
            cfg.amplitudes.push_back({re, im});
        }
    } else {
        throw config_error("initial_state.kind must be 'product_plus_zero_plus' or 'explicit'");
    }

    if (auto v = raw.get_string("measure.kind")) {
        if (*v == "log_negativity")
            cfg.measure.kind = MeasureKind::log_negativity;
        else if (*v == "negativity")
            cfg.measure.kind = MeasureKind::negativity;
        else if (*v == "relative_entropy_of_entanglement")
            cfg.measure.kind = MeasureKind::relative_entropy_of_entanglement;
        else
            throw config_error("unknown measure.kind '" + *v + "'");
    }
    if (auto v = raw.get_string("measure.g_function")) {
        if (*v == "identity")
            cfg.measure.g = GFunction::identity;
        else if (*v == "log")
            cfg.measure.g = GFunction::log;
        else
            throw config_error("unknown measure.g_function '" + *v + "'");
    }

    if (auto v = raw.get_string("bound.c_function")) {
        if (*v == "constant")
            cfg.bound.c_function = CFunction::constant;
        else if (*v == "dim")
            cfg.bound.c_function = CFunction::dim;
        else if (*v == "sqrt_dim")
            cfg.bound.c_function = CFunction::sqrt_dim;
        else
            throw config_error("unknown bound.c_function '" + *v + "'");
    }
    if (auto v = raw.get_double("bound.c_constant")) {
        cfg.bound.c_constant = *v;
        if (*v < 1.0) throw config_error("bound.c_constant must be >= 1");
    }

    if (auto v = raw.get_string("experiment.mode")) cfg.mode = run_mode_from_string(*v);
    if (auto v = raw.get_double("experiment.t")) {
        cfg.t = *v;
        if (*v < 0) throw config_error("experiment.t must be >= 0");
    }
    if (auto v = raw.get_grid("experiment.t_grid")) cfg.t_grid = *v;
    if (auto v = raw.get_grid("experiment.p_grid")) {
        cfg.p_grid = *v;
        for (double p : cfg.p_grid)
            if (p < 0.0 || p > 1.0) throw config_error("experiment.p_grid entries must be in [0, 1]");
    }
    if (auto v = raw.get_int("experiment.instances")) {
        cfg.instances = *v;
        if (*v < 1) throw config_error("experiment.instances must be >= 1");
    }

    if (auto v = raw.get_int("verify.instances")) cfg.verify.commutator_instances = *v;
    if (auto v = raw.get_int("verify.dephasing_instances")) cfg.verify.dephasing_instances = *v;
    if (auto v = raw.get_int("verify.zassenhaus_instances")) cfg.verify.zassenhaus_instances = *v;
    if (auto v = raw.get_int("verify.null_instances")) cfg.verify.null_instances = *v;
    if (auto v = raw.get_double("verify.tolerance_oracle")) cfg.verify.tol_oracle = *v;
    if (auto v = raw.get_double("verify.tolerance_dephasing")) cfg.verify.tol_dephasing = *v;
    if (auto v = raw.get_double("verify.tolerance_null")) cfg.verify.tol_null = *v;
    if (auto v = raw.get_double("verify.slope_band")) cfg.verify.slope_band = *v;

    if (auto v = raw.get_string("output.csv")) cfg.output.csv = *v;
    if (auto v = raw.get_string("output.json")) cfg.output.json = *v;
    if (auto v = raw.get_string("output.manifest")) cfg.output.manifest = *v;
    if (auto v = raw.get_string("output.results")) cfg.output.verify_report = *v;
    if (auto v = raw.get_bool("output.deterministic_timing")) cfg.output.deterministic_timing = *v;

    raw.check_all_consumed();

    // Cross-field requirements.
    if (cfg.uses_ensemble && !cfg.seed_set)
        throw config_error("hamiltonians.seed is required when hamiltonians.source = ensemble");
    if (cfg.mode == RunMode::sweep_t && cfg.t_grid.empty())
        throw config_error("mode sweep_t requires experiment.t_grid");
    if (cfg.mode == RunMode::sweep_p && cfg.p_grid.empty())
        throw config_error("mode sweep_p requires experiment.p_grid");
    if (cfg.mode == RunMode::randcheck && !cfg.uses_ensemble)
        throw config_error("mode randcheck requires hamiltonians.source = ensemble");
    return cfg;
}

}  // namespace medwit
