#pragma once

/// Builders for the two local coupling Hamiltonians. Every H_AM term carries
/// identity on B and every H_MB term identity on A, so locality holds by
/// construction; coefficients must be real so each sum is Hermitian given
/// Hermitian site operators.

#include <string>
#include <vector>

#include "medwit/pauli_algebra.hpp"
#include "medwit/rng.hpp"
#include "medwit/system_layout.hpp"

namespace medwit {

// One coupling term: real coefficient, probe operator key, mediator labels.
struct CouplingTerm {
    double coeff = 0.0;
    std::string probe_op = kIdentityKey;  // A key in H_AM terms, B key in H_MB terms
    std::vector<Pauli> med;
};

enum class EnsembleKind { general, commuting, one_quantum_qubit };

inline EnsembleKind ensemble_kind_from_string(const std::string& s) {
    if (s == "general") return EnsembleKind::general;
    if (s == "commuting") return EnsembleKind::commuting;
    if (s == "one_quantum_qubit") return EnsembleKind::one_quantum_qubit;
    throw config_error("unknown ensemble kind '" + s + "'");
}

struct EnsembleSpec {
    EnsembleKind kind = EnsembleKind::general;
    std::uint64_t seed = 0;
    int term_count = 4;
    double coeff_scale = 1.0;
};

struct HamiltonianSpec {
    std::vector<CouplingTerm> terms_am;
    std::vector<CouplingTerm> terms_mb;
};

struct HamiltonianPair {
    OperatorSum h_am;
    OperatorSum h_mb;
};

namespace detail {

inline OperatorSum build_side(const std::vector<CouplingTerm>& terms, const SystemLayout& layout,
                              bool is_am) {
    OperatorSum h;
    h.t_qubits = layout.t_qubits;
    for (const auto& term : terms) {
        if (static_cast<int>(term.med.size()) != layout.t_qubits)
            throw validation_error("coupling term has wrong number of mediator labels");
        bool known = is_am ? layout.has_a(term.probe_op) : layout.has_b(term.probe_op);
        if (!known)
            throw validation_error("unknown " + std::string(is_am ? "A" : "B") +
                                   "-site operator key '" + term.probe_op + "'");
        OperatorString s;
        s.coeff = complexd{term.coeff, 0.0};
        s.med = term.med;
        if (is_am)
            s.a_op = term.probe_op;
        else
            s.b_op = term.probe_op;
        h.terms.push_back(std::move(s));
    }
    return flag_hermitian(canonicalize(std::move(h)));
}

}  // namespace detail

inline HamiltonianPair build(const HamiltonianSpec& spec, const SystemLayout& layout) {
    return {detail::build_side(spec.terms_am, layout, true),
            detail::build_side(spec.terms_mb, layout, false)};
}

// Seeded random instances.
//   general:            any mediator labels;
//   commuting:          labels restricted to {I, Z} on every qubit of both
//                       Hamiltonians, which forces [H_AM, H_MB] = 0;
//   one_quantum_qubit:  qubit 1 arbitrary, qubits 2..T restricted to {I, Z}.
inline HamiltonianPair random_ensemble(EnsembleKind kind, std::uint64_t seed,
                                       const SystemLayout& layout, int term_count,
                                       double coeff_scale) {
    if (term_count < 1) throw validation_error("random_ensemble: term_count must be >= 1");
    Rng rng(seed);
    const std::vector<Pauli> all_labels = {Pauli::I, Pauli::X, Pauli::Y, Pauli::Z};
    const std::vector<Pauli> diag_labels = {Pauli::I, Pauli::Z};

    auto draw_labels = [&](std::vector<Pauli>& med) {
        med.resize(static_cast<std::size_t>(layout.t_qubits));
        for (int q = 0; q < layout.t_qubits; ++q) {
            bool diagonal_only = (kind == EnsembleKind::commuting) ||
                                 (kind == EnsembleKind::one_quantum_qubit && q > 0);
            const auto& pool = diagonal_only ? diag_labels : all_labels;
            med[static_cast<std::size_t>(q)] = pool[rng.index(pool.size())];
        }
    };

    HamiltonianSpec spec;
    const auto a_keys = layout.a_keys();
    const auto b_keys = layout.b_keys();
    for (int i = 0; i < term_count; ++i) {
        CouplingTerm t;
        t.coeff = rng.uniform(-coeff_scale, coeff_scale);
        t.probe_op = a_keys[rng.index(a_keys.size())];
        draw_labels(t.med);
        spec.terms_am.push_back(std::move(t));
    }
    for (int i = 0; i < term_count; ++i) {
        CouplingTerm t;
        t.coeff = rng.uniform(-coeff_scale, coeff_scale);
        t.probe_op = b_keys[rng.index(b_keys.size())];
        draw_labels(t.med);
        spec.terms_mb.push_back(std::move(t));
    }
    return build(spec, layout);
}

}  // namespace medwit
