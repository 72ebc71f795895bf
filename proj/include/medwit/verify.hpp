#pragma once

/// Invariant suite behind `medwit verify`: dual-path commutator agreement,
/// symbolic-vs-Kraus dephasing equivalence (with the p = 1/2 null), the
/// third-order Zassenhaus truncation law, the classical-mediator null result
/// and the bound ceiling. Failures carry the instance seeds for replay. The
/// rendered report contains no timing, so identical configs give
/// byte-identical output.

#include <cstdio>
#include <string>
#include <vector>

#include "medwit/experiment.hpp"

namespace medwit {

struct PropertyResult {
    std::string name;
    bool pass = true;
    std::string detail;
    std::vector<std::uint64_t> failing_seeds;
};

struct VerifyOutcome {
    std::vector<PropertyResult> properties;
    bool all_pass = true;
};

namespace detail {

inline std::string fmt(const char* pattern, double a, double b = 0.0) {
    char buf[160];
    std::snprintf(buf, sizeof(buf), pattern, a, b);
    return buf;
}

inline double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace detail

inline VerifyOutcome run_verify(const ExperimentConfig& cfg) {
    const SystemLayout layout = SystemLayout::with_default_ops(cfg.dim_a, cfg.t_qubits, cfg.dim_b);
    const std::uint64_t base_seed = cfg.ensemble.seed;
    const VerifySizes& sizes = cfg.verify;
    const int term_count = cfg.uses_ensemble ? cfg.ensemble.term_count : 4;
    VerifyOutcome outcome;

    // -- commutator dual path -------------------------------------------
    {
        PropertyResult prop;
        prop.name = "commutator_dual_path";
        const int n = sizes.commutator_instances;
        std::vector<double> devs(static_cast<std::size_t>(n), 0.0);
        std::vector<char> structural_ok(static_cast<std::size_t>(n), 1);
        parallel_for(n, [&](int i) {
            std::uint64_t seed = subseed(base_seed, static_cast<std::uint64_t>(i));
            auto [h_am, h_mb] = random_ensemble(EnsembleKind::general, seed, layout, term_count, 1.0);
            OperatorSum direct = commutator(h_am, h_mb);
            OperatorSum structural = structural_commutator(h_am, h_mb);
            structural_ok[static_cast<std::size_t>(i)] = structurally_equal(direct, structural) ? 1 : 0;
            Mat a = to_dense(h_am, layout).mat, b = to_dense(h_mb, layout).mat;
            devs[static_cast<std::size_t>(i)] = max_abs(Mat(to_dense(direct, layout).mat - (a * b - b * a)));
        });
        double max_dev = 0.0;
        for (int i = 0; i < n; ++i) {
            max_dev = std::max(max_dev, devs[static_cast<std::size_t>(i)]);
            if (!structural_ok[static_cast<std::size_t>(i)] || devs[static_cast<std::size_t>(i)] > sizes.tol_oracle)
                prop.failing_seeds.push_back(subseed(base_seed, static_cast<std::uint64_t>(i)));
        }
        prop.pass = prop.failing_seeds.empty();
        prop.detail = "instances=" + std::to_string(n) + detail::fmt(" max_dev=%.6e", max_dev);
        outcome.properties.push_back(std::move(prop));
    }

    // -- dephasing dual path --------------------------------------------
    {
        PropertyResult prop;
        prop.name = "dephasing_dual_path";
        const int n = sizes.dephasing_instances;
        const std::vector<double> p_values = {0.0, 0.25, 0.5, 0.75, 1.0};
        std::vector<double> devs(static_cast<std::size_t>(n), 0.0);
        std::vector<double> half_norms(static_cast<std::size_t>(n), 0.0);
        parallel_for(n, [&](int i) {
            std::uint64_t seed = subseed(base_seed ^ 0xdeb4a5e5ULL, static_cast<std::uint64_t>(i));
            auto [h_am, h_mb] = random_ensemble(EnsembleKind::general, seed, layout, term_count, 1.0);
            Mat dense_am = to_dense(h_am, layout).mat;
            Mat dense_mb = to_dense(h_mb, layout).mat;
            double worst = 0.0;
            for (double p : p_values) {
                DephasingConfig dc = DephasingConfig::uniform(p, layout.t_qubits);
                DephasedPair sym = dephase_hamiltonians(h_am, h_mb, dc);
                Mat kraus_am = dense_am, kraus_mb = dense_mb;
                for (int q = 0; q < layout.t_qubits; ++q) {
                    kraus_am = kraus_apply_heisenberg(kraus_am, layout, q, p);
                    kraus_mb = kraus_apply_heisenberg(kraus_mb, layout, q, p);
                }
                worst = std::max(worst, max_abs(Mat(to_dense(sym.h_am, layout).mat - kraus_am)));
                worst = std::max(worst, max_abs(Mat(to_dense(sym.h_mb, layout).mat - kraus_mb)));
                if (p == 0.5) {
                    OperatorSum k = commutator(sym.h_am, sym.h_mb);
                    half_norms[static_cast<std::size_t>(i)] = spectral_norm(to_dense(k, layout).mat);
                }
            }
            devs[static_cast<std::size_t>(i)] = worst;
        });
        double max_dev = 0.0, max_half = 0.0;
        for (int i = 0; i < n; ++i) {
            max_dev = std::max(max_dev, devs[static_cast<std::size_t>(i)]);
            max_half = std::max(max_half, half_norms[static_cast<std::size_t>(i)]);
            if (devs[static_cast<std::size_t>(i)] > sizes.tol_dephasing ||
                half_norms[static_cast<std::size_t>(i)] > sizes.tol_dephasing)
                prop.failing_seeds.push_back(subseed(base_seed ^ 0xdeb4a5e5ULL, static_cast<std::uint64_t>(i)));
        }
        prop.pass = prop.failing_seeds.empty();
        prop.detail = "instances=" + std::to_string(n) +
                      detail::fmt(" max_dev=%.6e p_half_max_comm_norm=%.6e", max_dev, max_half);
        outcome.properties.push_back(std::move(prop));
    }

    // -- Zassenhaus truncation order --------------------------------------
    {
        PropertyResult prop;
        prop.name = "zassenhaus_slope";
        const int n = sizes.zassenhaus_instances;
        // Pre-draw seeds whose commutator is away from zero so the t^3 law
        // is the leading behaviour.
        std::vector<std::uint64_t> seeds;
        for (std::uint64_t k = 0; static_cast<int>(seeds.size()) < n && k < 40ULL * static_cast<std::uint64_t>(n); ++k) {
            std::uint64_t seed = subseed(base_seed ^ 0x2a55e4a5ULL, k);
            auto [h_am, h_mb] = random_ensemble(EnsembleKind::general, seed, layout, term_count, 1.0);
            Mat a = to_dense(h_am, layout).mat, b = to_dense(h_mb, layout).mat;
            if (spectral_norm(Mat(a * b - b * a)) >= 0.05) seeds.push_back(seed);
        }
        std::vector<double> slopes(seeds.size(), 0.0);
        parallel_for(static_cast<int>(seeds.size()), [&](int i) {
            auto [h_am, h_mb] =
                random_ensemble(EnsembleKind::general, seeds[static_cast<std::size_t>(i)], layout, term_count, 1.0);
            Mat a = to_dense(h_am, layout).mat, b = to_dense(h_mb, layout).mat;
            std::vector<double> xs, ys;
            for (int j = 0; j < 10; ++j) {
                double t = std::pow(10.0, -3.0 + 2.0 * j / 9.0);
                xs.push_back(std::log(t));
                ys.push_back(std::log(std::max(truncation_error(a, b, t), 1e-300)));
            }
            slopes[static_cast<std::size_t>(i)] = detail::fit_slope(xs, ys);
        });
        double lo = 1e300, hi = -1e300;
        for (std::size_t i = 0; i < seeds.size(); ++i) {
            lo = std::min(lo, slopes[i]);
            hi = std::max(hi, slopes[i]);
            if (std::abs(slopes[i] - 3.0) > sizes.slope_band) prop.failing_seeds.push_back(seeds[i]);
        }
        prop.pass = prop.failing_seeds.empty() && static_cast<int>(seeds.size()) == n;
        prop.detail = "instances=" + std::to_string(seeds.size()) +
                      detail::fmt(" slope_range=[%.6f,%.6f]", lo, hi);
        outcome.properties.push_back(std::move(prop));
    }

    // -- classical mediator null result -----------------------------------
    {
        PropertyResult prop;
        prop.name = "classical_null";
        const int n = sizes.null_instances;
        const std::vector<double> t_grid = {0.1, 0.25, 0.5, 0.75, 1.0};
        DensityMatrix rho0 = named_initial_state(StateKind::product_plus_zero_plus, layout, {});
        std::vector<double> worst(static_cast<std::size_t>(n), 0.0);
        parallel_for(n, [&](int i) {
            std::uint64_t seed = subseed(base_seed ^ 0xc1a55ULL, static_cast<std::uint64_t>(i));
            auto [h_am, h_mb] = random_ensemble(EnsembleKind::commuting, seed, layout, term_count, 1.0);
            DenseOperator h{Mat(to_dense(h_am, layout).mat + to_dense(h_mb, layout).mat),
                            layout.site_dims()};
            double w = 0.0;
            for (double t : t_grid) {
                DensityMatrix rho_t = evolve(rho0, h, t);
                DensityMatrix rho_ab = partial_trace(rho_t, {0, static_cast<int>(rho_t.dims.size()) - 1});
                w = std::max(w, log_negativity(rho_ab));
            }
            worst[static_cast<std::size_t>(i)] = w;
        });
        double max_gain = 0.0;
        for (int i = 0; i < n; ++i) {
            max_gain = std::max(max_gain, worst[static_cast<std::size_t>(i)]);
            if (worst[static_cast<std::size_t>(i)] > sizes.tol_null)
                prop.failing_seeds.push_back(subseed(base_seed ^ 0xc1a55ULL, static_cast<std::uint64_t>(i)));
        }
        prop.pass = prop.failing_seeds.empty();
        prop.detail = "instances=" + std::to_string(n) + " times=" + std::to_string(t_grid.size()) +
                      detail::fmt(" max_delta_q=%.6e", max_gain);
        outcome.properties.push_back(std::move(prop));
    }

    // -- bound ceiling -----------------------------------------------------
    {
        PropertyResult prop;
        prop.name = "bound_ceiling";
        const int n = sizes.commutator_instances;
        const std::vector<double> t_grid = {0.1, 0.5, 1.0};
        BoundConfig bc = cfg.bound;
        std::vector<double> excess(static_cast<std::size_t>(n), -1e300);
        parallel_for(n, [&](int i) {
            std::uint64_t seed = subseed(base_seed, static_cast<std::uint64_t>(i));
            auto [h_am, h_mb] = random_ensemble(EnsembleKind::general, seed, layout, term_count, 1.0);
            Mat k = to_dense(commutator(h_am, h_mb), layout).mat;
            double sup = bound_sup(bc, layout.dim_m());
            double e = -1e300;
            for (double t : t_grid) e = std::max(e, bound_rhs(k, t, bc, layout.dim_m()) - sup);
            excess[static_cast<std::size_t>(i)] = e;
        });
        double max_excess = -1e300;
        for (int i = 0; i < n; ++i) {
            max_excess = std::max(max_excess, excess[static_cast<std::size_t>(i)]);
            if (excess[static_cast<std::size_t>(i)] > 1e-12)
                prop.failing_seeds.push_back(subseed(base_seed, static_cast<std::uint64_t>(i)));
        }
        prop.pass = prop.failing_seeds.empty();
        prop.detail = "instances=" + std::to_string(n) + detail::fmt(" max_excess=%.6e", max_excess);
        outcome.properties.push_back(std::move(prop));
    }

    for (const auto& p : outcome.properties) outcome.all_pass = outcome.all_pass && p.pass;
    return outcome;
}

inline std::string render_verify_report(const ExperimentConfig& cfg, const VerifyOutcome& outcome) {
    std::string out = "medwit verify\n";
    out += "layout: dim_A=" + std::to_string(cfg.dim_a) + " T=" + std::to_string(cfg.t_qubits) +
           " dim_B=" + std::to_string(cfg.dim_b) + "\n";
    out += "seed: " + std::to_string(cfg.ensemble.seed) + "\n";
    char tol[160];
    std::snprintf(tol, sizeof(tol), "tolerances: oracle=%.3g dephasing=%.3g null=%.3g slope_band=%.3g\n",
                  cfg.verify.tol_oracle, cfg.verify.tol_dephasing, cfg.verify.tol_null,
                  cfg.verify.slope_band);
    out += tol;
    int passed = 0;
    for (const auto& p : outcome.properties) {
        out += (p.pass ? "PASS " : "FAIL ") + p.name + " " + p.detail;
        if (!p.failing_seeds.empty()) {
            out += " failing_seeds=[";
            for (std::size_t i = 0; i < p.failing_seeds.size(); ++i) {
                if (i) out += ",";
                out += std::to_string(p.failing_seeds[i]);
            }
            out += "]";
        }
        out += "\n";
        if (p.pass) ++passed;
    }
    out += "result: " + std::string(outcome.all_pass ? "PASS" : "FAIL") + " " +
           std::to_string(passed) + "/" + std::to_string(outcome.properties.size()) + "\n";
    return out;
}

}  // namespace medwit
