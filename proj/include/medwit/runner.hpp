#pragma once

/// Top-level batch entry points shared by the CLI binary: load + override
/// config, compute, write CSV/JSON/report and the run manifest atomically,
/// and map failures to exit codes (0 ok, 2 config, 3 numerical validation,
/// 4 I/O).

#include <chrono>
#include <iostream>
#include <optional>
#include <string>

#include "medwit/report_io.hpp"
#include "medwit/verify.hpp"

namespace medwit {

struct CliOverrides {
    std::optional<RunMode> mode;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out;
    bool quiet = false;
};

inline int run_cli(const std::string& config_path, const CliOverrides& overrides) {
    try {
        auto start = std::chrono::steady_clock::now();
        ExperimentConfig cfg = load_config(config_path);
        if (overrides.mode) cfg.mode = *overrides.mode;
        if (overrides.seed) {
            cfg.ensemble.seed = *overrides.seed;
            cfg.seed_set = true;
        }
        std::string config_bytes = read_file(config_path);

        if (cfg.mode == RunMode::verify) {
            if (overrides.out) cfg.output.verify_report = *overrides.out;
            VerifyOutcome outcome = run_verify(cfg);
            std::string report = render_verify_report(cfg, outcome);
            write_file_atomic(cfg.output.verify_report, report);
            if (!overrides.quiet) std::cout << report;
            return outcome.all_pass ? 0 : 3;
        }

        if (overrides.out) cfg.output.csv = *overrides.out;
        std::vector<WitnessReport> rows = compute_rows(cfg);

        std::string csv = csv_header() + "\n";
        for (const auto& r : rows) csv += csv_row(r) + "\n";
        write_file_atomic(cfg.output.csv, csv);
        std::vector<std::string> outputs = {cfg.output.csv};

        if (cfg.output.json) {
            njson j;
            j["rows"] = njson::array();
            for (const auto& r : rows) j["rows"].push_back(report_to_json(r));
            write_file_atomic(*cfg.output.json, j.dump(2) + "\n");
            outputs.push_back(*cfg.output.json);
        }

        double wall_ms =
            std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
        write_file_atomic(cfg.output.manifest,
                          make_manifest(run_mode_name(cfg.mode), config_path, config_bytes,
                                        cfg.ensemble.seed, wall_ms, outputs));
        if (!overrides.quiet) {
            std::cout << "wrote " << rows.size() << (rows.size() == 1 ? " row to " : " rows to ")
                      << cfg.output.csv << "\n";
        }
        return 0;
    } catch (const config_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const validation_error& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return 3;
    } catch (const io_error& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace medwit
