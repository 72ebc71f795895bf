#pragma once

/// Wires a parsed config into layouts, Hamiltonians, initial states and the
/// per-mode row computations. `bound` evaluates only the commutator side
/// (gain columns stay zero); `evolve`, `sweep_t` and `sweep_p` run the full
/// pipeline; `randcheck` draws seeded ensemble instances, cross-checks the
/// symbolic commutator against the dense oracle on each, and fails with the
/// offending seed when a check breaks.

#include <vector>

#include "medwit/config.hpp"
#include "medwit/decoherence.hpp"
#include "medwit/parallel.hpp"

namespace medwit {

struct PreparedExperiment {
    SystemLayout layout;
    OperatorSum h_am;
    OperatorSum h_mb;
    DensityMatrix rho0;
};

inline Vec uniform_superposition(int dim) {
    Vec v = Vec::Constant(dim, complexd{1.0, 0.0});
    return v / v.norm();
}

inline DensityMatrix named_initial_state(StateKind kind, const SystemLayout& layout,
                                         const std::vector<complexd>& amplitudes) {
    if (kind == StateKind::product_plus_zero_plus) {
        Vec psi = uniform_superposition(layout.dim_a);
        Vec zero = Vec::Zero(layout.dim_m());
        zero(0) = 1.0;
        psi = kron(Mat(psi), Mat(zero)).col(0);
        psi = kron(Mat(psi), Mat(uniform_superposition(layout.dim_b))).col(0);
        return pure_state(psi, layout.site_dims());
    }
    if (static_cast<int>(amplitudes.size()) != layout.total_dim())
        throw config_error("initial_state.amplitudes must list exactly " +
                           std::to_string(layout.total_dim()) + " entries");
    Vec psi(layout.total_dim());
    for (Eigen::Index i = 0; i < psi.size(); ++i) psi(i) = amplitudes[static_cast<std::size_t>(i)];
    if (psi.norm() < 1e-12) throw config_error("initial_state.amplitudes is the zero vector");
    return pure_state(psi, layout.site_dims());
}

inline PreparedExperiment prepare(const ExperimentConfig& cfg) {
    PreparedExperiment prep{SystemLayout::with_default_ops(cfg.dim_a, cfg.t_qubits, cfg.dim_b),
                            {}, {}, {}};
    HamiltonianPair pair =
        cfg.uses_ensemble
            ? random_ensemble(cfg.ensemble.kind, cfg.ensemble.seed, prep.layout,
                              cfg.ensemble.term_count, cfg.ensemble.coeff_scale)
            : build(cfg.explicit_terms, prep.layout);
    prep.h_am = std::move(pair.h_am);
    prep.h_mb = std::move(pair.h_mb);
    prep.rho0 = named_initial_state(cfg.state_kind, prep.layout, cfg.amplitudes);
    return prep;
}

// Bound side only: commutator norm and the two bound values, no evolution.
inline WitnessReport bound_only_report(const OperatorSum& h_am, const OperatorSum& h_mb,
                                       const SystemLayout& layout, double t,
                                       const BoundConfig& bound_config,
                                       const CorrelationMeasure& measure) {
    auto start = std::chrono::steady_clock::now();
    Mat k = to_dense(commutator(h_am, h_mb), layout).mat;
    WitnessReport r;
    r.t = t;
    r.p.assign(static_cast<std::size_t>(layout.t_qubits), 1.0);
    r.dim_a = layout.dim_a;
    r.t_qubits = layout.t_qubits;
    r.dim_b = layout.dim_b;
    r.comm_norm = spectral_norm(k);
    r.rhs_bound = bound_rhs(k, t, bound_config, layout.dim_m());
    r.sup_bound = bound_sup(bound_config, layout.dim_m());
    r.measure = measure.kind;
    r.g = measure.g;
    r.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    return r;
}

inline std::vector<WitnessReport> compute_rows(const ExperimentConfig& cfg) {
    PreparedExperiment prep = prepare(cfg);
    std::vector<WitnessReport> rows;
    auto bound0 = [&] {
        return initial_bound(prep.rho0, InitialBoundMode::product_state_zero, cfg.measure);
    };

    switch (cfg.mode) {
        case RunMode::bound: {
            rows.push_back(bound_only_report(prep.h_am, prep.h_mb, prep.layout, cfg.t, cfg.bound,
                                             cfg.measure));
            break;
        }
        case RunMode::evolve: {
            rows.push_back(evaluate(prep.h_am, prep.h_mb, prep.layout, prep.rho0, cfg.t, cfg.bound,
                                    cfg.measure, bound0()));
            break;
        }
        case RunMode::sweep_t: {
            InitialBound b0 = bound0();
            rows.resize(cfg.t_grid.size());
            parallel_for(static_cast<int>(cfg.t_grid.size()), [&](int i) {
                rows[static_cast<std::size_t>(i)] =
                    evaluate(prep.h_am, prep.h_mb, prep.layout, prep.rho0,
                             cfg.t_grid[static_cast<std::size_t>(i)], cfg.bound, cfg.measure, b0);
            });
            break;
        }
        case RunMode::sweep_p: {
            rows = sweep_p(prep.h_am, prep.h_mb, prep.layout, prep.rho0, cfg.t, cfg.p_grid,
                           cfg.bound, cfg.measure, bound0());
            break;
        }
        case RunMode::randcheck: {
            InitialBound b0 = bound0();
            rows.resize(static_cast<std::size_t>(cfg.instances));
            std::vector<std::string> failures(static_cast<std::size_t>(cfg.instances));
            parallel_for(cfg.instances, [&](int i) {
                std::uint64_t seed_i = subseed(cfg.ensemble.seed, static_cast<std::uint64_t>(i));
                HamiltonianPair pair = random_ensemble(cfg.ensemble.kind, seed_i, prep.layout,
                                                       cfg.ensemble.term_count,
                                                       cfg.ensemble.coeff_scale);
                OperatorSum k_direct = commutator(pair.h_am, pair.h_mb);
                OperatorSum k_struct = structural_commutator(pair.h_am, pair.h_mb);
                Mat dense_am = to_dense(pair.h_am, prep.layout).mat;
                Mat dense_mb = to_dense(pair.h_mb, prep.layout).mat;
                Mat oracle = dense_am * dense_mb - dense_mb * dense_am;
                double dev = max_abs(Mat(to_dense(k_direct, prep.layout).mat - oracle));
                WitnessReport r = evaluate(pair.h_am, pair.h_mb, prep.layout, prep.rho0, cfg.t,
                                           cfg.bound, cfg.measure, b0);
                r.seed = seed_i;
                char buf[160];
                if (!structurally_equal(k_direct, k_struct))
                    std::snprintf(buf, sizeof(buf),
                                  "seed %llu: structural and direct commutators disagree",
                                  static_cast<unsigned long long>(seed_i));
                else if (dev > cfg.verify.tol_oracle)
                    std::snprintf(buf, sizeof(buf),
                                  "seed %llu: symbolic vs dense commutator deviation %.3e",
                                  static_cast<unsigned long long>(seed_i), dev);
                else if (r.rhs_bound > r.sup_bound + 1e-12)
                    std::snprintf(buf, sizeof(buf), "seed %llu: rhs_bound %.17g exceeds sup %.17g",
                                  static_cast<unsigned long long>(seed_i), r.rhs_bound, r.sup_bound);
                else
                    buf[0] = '\0';
                failures[static_cast<std::size_t>(i)] = buf;
                rows[static_cast<std::size_t>(i)] = std::move(r);
            });
            for (const std::string& msg : failures)
                if (!msg.empty()) throw validation_error("randcheck failed: " + msg);
            break;
        }
        case RunMode::verify:
            throw config_error("verify mode has no row output; use the verify entry point");
    }

    std::uint64_t base_seed = cfg.seed_set ? cfg.ensemble.seed : 0;
    for (auto& r : rows) {
        r.mode = run_mode_name(cfg.mode);
        if (cfg.mode != RunMode::randcheck) r.seed = base_seed;
        if (cfg.output.deterministic_timing) r.wall_ms = 0.0;
    }
    return rows;
}

}  // namespace medwit
