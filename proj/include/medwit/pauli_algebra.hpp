#pragma once

/// Exact symbolic algebra of tensor-product operator strings.
///
/// An operator string is one complex coefficient times a product of site
/// factors: a probe-A operator key, one Pauli label per mediator qubit, and a
/// probe-B operator key. Mediator factors multiply through the exact
/// single-qubit Pauli table (phases in {+1, -1, +i, -i}); probe factors
/// multiply symbolically into composite keys ("X*Z") that are resolved to
/// matrices only at densification.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "medwit/errors.hpp"

namespace medwit {

using complexd = std::complex<double>;

// Coefficients smaller than this are dropped during canonicalization.
inline constexpr double kCoeffPruneTol = 1e-12;

enum class Pauli : std::uint8_t { I = 0, X = 1, Y = 2, Z = 3 };

inline char pauli_char(Pauli p) { return "IXYZ"[static_cast<int>(p)]; }

inline Pauli pauli_from_char(char c) {
    switch (c) {
        case 'I': return Pauli::I;
        case 'X': return Pauli::X;
        case 'Y': return Pauli::Y;
        case 'Z': return Pauli::Z;
        default: throw validation_error(std::string("unknown Pauli label '") + c + "'");
    }
}

// Product of two single-qubit Paulis, a*b = (i^phase_pow) * label.
struct PauliProduct {
    int phase_pow;  // exponent of i, in {0,1,2,3}
    Pauli label;
};

inline complexd phase_value(int phase_pow) {
    switch (phase_pow & 3) {
        case 0: return {1.0, 0.0};
        case 1: return {0.0, 1.0};
        case 2: return {-1.0, 0.0};
        default: return {0.0, -1.0};
    }
}

inline PauliProduct mul_pauli(Pauli a, Pauli b) {
    if (a == Pauli::I) return {0, b};
    if (b == Pauli::I) return {0, a};
    if (a == b) return {0, Pauli::I};
    // Remaining six cases: XY = iZ, YZ = iX, ZX = iY and the reversals pick
    // up the conjugate phase.
    int ia = static_cast<int>(a), ib = static_cast<int>(b);
    int ic = 6 - ia - ib;  // the third non-identity label
    bool cyclic = (ib - ia + 3) % 3 == 1;  // X->Y->Z->X
    return {cyclic ? 1 : 3, static_cast<Pauli>(ic)};
}

//=========================================================================
// Probe-operator keys
//=========================================================================

// "I" is the identity key. Composite keys join base keys with '*' and are
// resolved as left-to-right matrix products.
inline const std::string kIdentityKey = "I";

inline bool is_identity_key(const std::string& k) { return k == kIdentityKey; }

inline std::string compose_keys(const std::string& k1, const std::string& k2) {
    if (is_identity_key(k1)) return k2;
    if (is_identity_key(k2)) return k1;
    return k1 + "*" + k2;
}

inline std::vector<std::string> split_key(const std::string& key) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    for (;;) {
        std::size_t pos = key.find('*', start);
        if (pos == std::string::npos) {
            parts.push_back(key.substr(start));
            return parts;
        }
        parts.push_back(key.substr(start, pos - start));
        start = pos + 1;
    }
}

// Adjoint of a composite of Hermitian base operators: reverse the factors.
inline std::string adjoint_key(const std::string& key) {
    auto parts = split_key(key);
    std::reverse(parts.begin(), parts.end());
    std::string out = parts.front();
    for (std::size_t i = 1; i < parts.size(); ++i) out += "*" + parts[i];
    return out;
}

//=========================================================================
// OperatorString / OperatorSum
//=========================================================================

struct OperatorString {
    complexd coeff{1.0, 0.0};
    std::string a_op = kIdentityKey;
    std::vector<Pauli> med;  // one label per mediator qubit
    std::string b_op = kIdentityKey;

    bool same_factors(const OperatorString& o) const {
        return a_op == o.a_op && med == o.med && b_op == o.b_op;
    }
};

inline OperatorString identity_string(int t_qubits) {
    OperatorString s;
    s.med.assign(static_cast<std::size_t>(t_qubits), Pauli::I);
    return s;
}

inline std::uint64_t mediator_code(const std::vector<Pauli>& med) {
    // Base-4 integer, first mediator qubit most significant.
    std::uint64_t code = 0;
    for (Pauli p : med) code = code * 4 + static_cast<std::uint64_t>(p);
    return code;
}

// Canonical term order: A-op key, mediator code, B-op key.
inline bool term_less(const OperatorString& a, const OperatorString& b) {
    if (a.a_op != b.a_op) return a.a_op < b.a_op;
    std::uint64_t ca = mediator_code(a.med), cb = mediator_code(b.med);
    if (ca != cb) return ca < cb;
    return a.b_op < b.b_op;
}

struct OperatorSum {
    std::vector<OperatorString> terms;  // canonical: sorted, unique factor tuples
    int t_qubits = 0;
    bool hermitian = false;

    bool empty() const { return terms.empty(); }
};

inline void check_same_layout(const OperatorSum& a, const OperatorSum& b) {
    if (a.t_qubits != b.t_qubits)
        throw validation_error("operator sums live on different mediator layouts");
}

inline OperatorSum canonicalize(OperatorSum h) {
    std::sort(h.terms.begin(), h.terms.end(), term_less);
    std::vector<OperatorString> merged;
    merged.reserve(h.terms.size());
    for (auto& t : h.terms) {
        if (!merged.empty() && merged.back().same_factors(t))
            merged.back().coeff += t.coeff;
        else
            merged.push_back(std::move(t));
    }
    merged.erase(std::remove_if(merged.begin(), merged.end(),
                                [](const OperatorString& t) {
                                    return std::abs(t.coeff) < kCoeffPruneTol;
                                }),
                 merged.end());
    h.terms = std::move(merged);
    return h;
}

inline OperatorSum make_sum(std::vector<OperatorString> terms, int t_qubits) {
    OperatorSum h;
    h.terms = std::move(terms);
    h.t_qubits = t_qubits;
    return canonicalize(std::move(h));
}

inline OperatorString string_mul(const OperatorString& s1, const OperatorString& s2) {
    if (s1.med.size() != s2.med.size())
        throw validation_error("string_mul: mediator length mismatch");
    OperatorString out;
    out.coeff = s1.coeff * s2.coeff;
    out.a_op = compose_keys(s1.a_op, s2.a_op);
    out.b_op = compose_keys(s1.b_op, s2.b_op);
    out.med.resize(s1.med.size());
    for (std::size_t k = 0; k < s1.med.size(); ++k) {
        PauliProduct p = mul_pauli(s1.med[k], s2.med[k]);
        out.med[k] = p.label;
        out.coeff *= phase_value(p.phase_pow);
    }
    return out;
}

inline OperatorSum sum_mul(const OperatorSum& h1, const OperatorSum& h2) {
    check_same_layout(h1, h2);
    OperatorSum out;
    out.t_qubits = h1.t_qubits;
    out.terms.reserve(h1.terms.size() * h2.terms.size());
    for (const auto& s1 : h1.terms)
        for (const auto& s2 : h2.terms) out.terms.push_back(string_mul(s1, s2));
    return canonicalize(std::move(out));
}

inline OperatorSum scale(OperatorSum h, complexd factor) {
    for (auto& t : h.terms) t.coeff *= factor;
    return canonicalize(std::move(h));
}

inline OperatorSum add(const OperatorSum& h1, const OperatorSum& h2) {
    check_same_layout(h1, h2);
    OperatorSum out;
    out.t_qubits = h1.t_qubits;
    out.terms = h1.terms;
    out.terms.insert(out.terms.end(), h2.terms.begin(), h2.terms.end());
    return canonicalize(std::move(out));
}

inline OperatorSum adjoint(const OperatorSum& h) {
    OperatorSum out;
    out.t_qubits = h.t_qubits;
    out.terms.reserve(h.terms.size());
    for (const auto& t : h.terms) {
        OperatorString a = t;
        a.coeff = std::conj(t.coeff);
        a.a_op = adjoint_key(t.a_op);
        a.b_op = adjoint_key(t.b_op);
        out.terms.push_back(std::move(a));
    }
    return canonicalize(std::move(out));
}

inline bool is_hermitian_sum(const OperatorSum& h, double tol = kCoeffPruneTol) {
    OperatorSum diff = add(h, scale(adjoint(h), {-1.0, 0.0}));
    for (const auto& t : diff.terms)
        if (std::abs(t.coeff) > tol) return false;
    return true;
}

// Marks the sum Hermitian after verifying it equals its adjoint.
inline OperatorSum flag_hermitian(OperatorSum h) {
    if (!is_hermitian_sum(h)) throw validation_error("sum is not Hermitian");
    h.hermitian = true;
    return h;
}

inline bool structurally_equal(const OperatorSum& a, const OperatorSum& b,
                               double tol = kCoeffPruneTol) {
    if (a.t_qubits != b.t_qubits) return false;
    // Canonical forms are sorted, so compare pairwise.
    if (a.terms.size() != b.terms.size()) return false;
    for (std::size_t i = 0; i < a.terms.size(); ++i) {
        if (!a.terms[i].same_factors(b.terms[i])) return false;
        if (std::abs(a.terms[i].coeff - b.terms[i].coeff) > tol) return false;
    }
    return true;
}

//=========================================================================
// Commutators
//=========================================================================

inline void require_hermitian_inputs(const OperatorSum& h1, const OperatorSum& h2) {
    if (!h1.hermitian || !h2.hermitian)
        throw validation_error("commutator inputs must be Hermitian-flagged");
}

// [h1, h2] = h1*h2 - h2*h1 by direct expansion of string products.
inline OperatorSum commutator(const OperatorSum& h1, const OperatorSum& h2) {
    check_same_layout(h1, h2);
    require_hermitian_inputs(h1, h2);
    OperatorSum out;
    out.t_qubits = h1.t_qubits;
    out.terms.reserve(2 * h1.terms.size() * h2.terms.size());
    for (const auto& s1 : h1.terms)
        for (const auto& s2 : h2.terms) {
            out.terms.push_back(string_mul(s1, s2));
            OperatorString rev = string_mul(s2, s1);
            rev.coeff = -rev.coeff;
            out.terms.push_back(std::move(rev));
        }
    return canonicalize(std::move(out));
}

namespace detail {

// Per-site factors of a string laid out as A, M_1..M_T, B. Pauli sites carry
// a label; probe sites carry a key.
struct SiteFactor {
    bool is_pauli;
    Pauli label;
    std::string key;
};

inline std::vector<SiteFactor> site_factors(const OperatorString& s) {
    std::vector<SiteFactor> f;
    f.reserve(s.med.size() + 2);
    f.push_back({false, Pauli::I, s.a_op});
    for (Pauli p : s.med) f.push_back({true, p, ""});
    f.push_back({false, Pauli::I, s.b_op});
    return f;
}

// One branch of a sitewise expansion under construction.
struct Branch {
    complexd coeff;
    std::vector<SiteFactor> sites;
};

inline OperatorString branch_to_string(const Branch& b, int t_qubits) {
    OperatorString s;
    s.coeff = b.coeff;
    s.a_op = b.sites.front().key;
    s.b_op = b.sites.back().key;
    s.med.resize(static_cast<std::size_t>(t_qubits));
    for (int k = 0; k < t_qubits; ++k) s.med[static_cast<std::size_t>(k)] = b.sites[static_cast<std::size_t>(k) + 1].label;
    return s;
}

}  // namespace detail

// [h1, h2] by the recursive sitewise expansion
//   [A (x) B, C (x) D] = CA (x) [B, D] + [A, C] (x) BD
// applied down the site chain A, M_1..M_T, B: the term that takes the
// commutator at site k carries reversed products on the sites before it and
// plain products after it. Pauli site commutators are exact (zero or twice
// the product); probe-site commutators expand into two composite-key terms.
inline OperatorSum structural_commutator(const OperatorSum& h1, const OperatorSum& h2) {
    check_same_layout(h1, h2);
    require_hermitian_inputs(h1, h2);
    const int T = h1.t_qubits;
    const int n_sites = T + 2;
    OperatorSum out;
    out.t_qubits = T;

    for (const auto& s1 : h1.terms) {
        for (const auto& s2 : h2.terms) {
            auto f1 = detail::site_factors(s1);
            auto f2 = detail::site_factors(s2);
            for (int k = 0; k < n_sites; ++k) {
                // Site-k commutator branches: list of (coeff, factor).
                std::vector<std::pair<complexd, detail::SiteFactor>> comm_branches;
                if (f1[static_cast<std::size_t>(k)].is_pauli) {
                    Pauli a = f1[static_cast<std::size_t>(k)].label, b = f2[static_cast<std::size_t>(k)].label;
                    PauliProduct ab = mul_pauli(a, b);
                    PauliProduct ba = mul_pauli(b, a);
                    // Labels of the two products always agree; the phases
                    // either match (commuting, zero) or differ by sign.
                    complexd diff = phase_value(ab.phase_pow) - phase_value(ba.phase_pow);
                    if (std::abs(diff) > 0.0)
                        comm_branches.push_back({diff, {true, ab.label, ""}});
                } else {
                    const std::string& a = f1[static_cast<std::size_t>(k)].key;
                    const std::string& b = f2[static_cast<std::size_t>(k)].key;
                    if (!is_identity_key(a) && !is_identity_key(b) && a != b) {
                        comm_branches.push_back({{1.0, 0.0}, {false, Pauli::I, compose_keys(a, b)}});
                        comm_branches.push_back({{-1.0, 0.0}, {false, Pauli::I, compose_keys(b, a)}});
                    }
                }
                if (comm_branches.empty()) continue;

                for (auto& [br_coeff, br_factor] : comm_branches) {
                    detail::Branch br;
                    br.coeff = s1.coeff * s2.coeff * br_coeff;
                    br.sites.resize(static_cast<std::size_t>(n_sites));
                    for (int j = 0; j < n_sites; ++j) {
                        if (j == k) {
                            br.sites[static_cast<std::size_t>(j)] = br_factor;
                            continue;
                        }
                        // Before the commutator site the factors multiply in
                        // reversed order (f2*f1); after it in plain order.
                        const detail::SiteFactor& lhs = (j < k) ? f2[static_cast<std::size_t>(j)] : f1[static_cast<std::size_t>(j)];
                        const detail::SiteFactor& rhs = (j < k) ? f1[static_cast<std::size_t>(j)] : f2[static_cast<std::size_t>(j)];
                        if (lhs.is_pauli) {
                            PauliProduct p = mul_pauli(lhs.label, rhs.label);
                            br.coeff *= phase_value(p.phase_pow);
                            br.sites[static_cast<std::size_t>(j)] = {true, p.label, ""};
                        } else {
                            br.sites[static_cast<std::size_t>(j)] = {false, Pauli::I, compose_keys(lhs.key, rhs.key)};
                        }
                    }
                    out.terms.push_back(detail::branch_to_string(br, T));
                }
            }
        }
    }
    return canonicalize(std::move(out));
}

//=========================================================================
// Phase-flip dephasing (symbolic rule)
//=========================================================================

// Heisenberg-picture phase flip on one mediator qubit: X and Y factors pick
// up a (2p-1) coefficient, I and Z are untouched.
inline OperatorString dephase_string(const OperatorString& s, int qubit, double p) {
    if (qubit < 0 || static_cast<std::size_t>(qubit) >= s.med.size())
        throw validation_error("dephase_string: mediator qubit index out of range");
    if (p < 0.0 || p > 1.0)
        throw validation_error("dephase_string: probability outside [0, 1]");
    OperatorString out = s;
    Pauli label = s.med[static_cast<std::size_t>(qubit)];
    if (label == Pauli::X || label == Pauli::Y) out.coeff *= (2.0 * p - 1.0);
    return out;
}

// Applies the per-qubit channels in sequence; they commute termwise, so the
// result is the (2p-1)-primed coefficient sum.
inline OperatorSum dephase_sum(const OperatorSum& h, const std::vector<double>& p_per_qubit) {
    if (static_cast<int>(p_per_qubit.size()) != h.t_qubits)
        throw validation_error("dephase_sum: need exactly one probability per mediator qubit");
    OperatorSum out;
    out.t_qubits = h.t_qubits;
    out.terms.reserve(h.terms.size());
    for (const auto& t : h.terms) {
        OperatorString s = t;
        for (int q = 0; q < h.t_qubits; ++q) s = dephase_string(s, q, p_per_qubit[static_cast<std::size_t>(q)]);
        out.terms.push_back(std::move(s));
    }
    out = canonicalize(std::move(out));
    out.hermitian = h.hermitian;  // real scaling of Hermitian terms
    return out;
}

}  // namespace medwit
