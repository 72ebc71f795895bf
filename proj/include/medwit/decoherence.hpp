#pragma once

/// Phase-flip channel on mediator qubits, in two interchangeable forms: the
/// Kraus conjugation p H + (1-p) Z_k H Z_k acting on dense operators, and the
/// symbolic (2p-1) coefficient rule acting on operator sums. Dephasing is
/// applied to the input Hamiltonians; commutation and evolution come after.

#include <vector>

#include "medwit/parallel.hpp"
#include "medwit/witness.hpp"

namespace medwit {

struct DephasingConfig {
    std::vector<double> p;  // one entry per mediator qubit

    static DephasingConfig uniform(double p, int t_qubits) {
        DephasingConfig c;
        c.p.assign(static_cast<std::size_t>(t_qubits), p);
        return c;
    }

    void validate(int t_qubits) const {
        if (static_cast<int>(p.size()) != t_qubits)
            throw validation_error("dephasing config needs one probability per mediator qubit");
        for (double x : p)
            if (x < 0.0 || x > 1.0)
                throw validation_error("phase-flip probability outside [0, 1]");
    }
};

// Z embedded on mediator qubit `qubit` (0-based) of the full A|M|B space.
inline Mat embedded_mediator_z(const SystemLayout& layout, int qubit) {
    if (qubit < 0 || qubit >= layout.t_qubits)
        throw validation_error("mediator qubit index out of range");
    Mat m = Mat::Identity(layout.dim_a, layout.dim_a);
    for (int q = 0; q < layout.t_qubits; ++q)
        m = kron(m, pauli_matrix(q == qubit ? Pauli::Z : Pauli::I));
    return kron(m, Mat::Identity(layout.dim_b, layout.dim_b));
}

// Heisenberg-picture phase flip on one qubit of a dense observable.
inline Mat kraus_apply_heisenberg(const Mat& h, const SystemLayout& layout, int qubit, double p) {
    if (p < 0.0 || p > 1.0) throw validation_error("phase-flip probability outside [0, 1]");
    Mat z = embedded_mediator_z(layout, qubit);
    return Mat(p * h + (1.0 - p) * (z * h * z));
}

struct DephasedPair {
    OperatorSum h_am;
    OperatorSum h_mb;
};

inline DephasedPair dephase_hamiltonians(const OperatorSum& h_am, const OperatorSum& h_mb,
                                         const DephasingConfig& config) {
    check_same_layout(h_am, h_mb);
    config.validate(h_am.t_qubits);
    return {dephase_sum(h_am, config.p), dephase_sum(h_mb, config.p)};
}

// One report per p in the grid at fixed t, evolving under the dephased
// Hamiltonians as effective generators. Output order follows the grid.
inline std::vector<WitnessReport> sweep_p(const OperatorSum& h_am, const OperatorSum& h_mb,
                                          const SystemLayout& layout, const DensityMatrix& rho0,
                                          double t, const std::vector<double>& p_grid,
                                          const BoundConfig& bound_config,
                                          const CorrelationMeasure& measure,
                                          std::optional<InitialBound> bound0 = std::nullopt) {
    std::vector<WitnessReport> reports(p_grid.size());
    parallel_for(static_cast<int>(p_grid.size()), [&](int i) {
        double p = p_grid[static_cast<std::size_t>(i)];
        DephasingConfig cfg = DephasingConfig::uniform(p, layout.t_qubits);
        DephasedPair dephased = dephase_hamiltonians(h_am, h_mb, cfg);
        WitnessReport r = evaluate(dephased.h_am, dephased.h_mb, layout, rho0, t, bound_config,
                                   measure, bound0);
        r.p = cfg.p;
        reports[static_cast<std::size_t>(i)] = std::move(r);
    });
    return reports;
}

}  // namespace medwit
