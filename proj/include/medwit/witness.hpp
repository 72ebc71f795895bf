#pragma once

/// The core inequality: from the commutator K = [H_AM, H_MB] (skew-Hermitian
/// for Hermitian inputs) form the Hermitian generator H_K = -iK and evaluate
///
///   rhs(t) = 2 C(dim_M) sqrt( sigma_max( 2 (I - cos(H_K t^2/2)) ) )
///
/// together with its model-independent ceiling 4 C(dim_M). The Zassenhaus
/// approximant exp(-i H_AM t) exp(-i H_MB t) exp(K t^2/2) exists to measure
/// the truncation error of that derivation; state evolution always uses the
/// exact unitary of H_AM + H_MB.

#include <chrono>
#include <cmath>
#include <optional>
#include <string>

#include "medwit/correlations.hpp"
#include "medwit/dense.hpp"
#include "medwit/hamiltonians.hpp"

namespace medwit {

enum class CFunction { constant, dim, sqrt_dim };

inline std::string c_function_name(CFunction c) {
    switch (c) {
        case CFunction::constant: return "constant";
        case CFunction::dim: return "dim";
        default: return "sqrt_dim";
    }
}

struct BoundConfig {
    CFunction c_function = CFunction::dim;
    double c_constant = 1.0;  // used when c_function == constant

    double c_of(int dim_m) const {
        double c = 1.0;
        switch (c_function) {
            case CFunction::constant: c = c_constant; break;
            case CFunction::dim: c = static_cast<double>(dim_m); break;
            case CFunction::sqrt_dim: c = std::sqrt(static_cast<double>(dim_m)); break;
        }
        if (c < 1.0) throw validation_error("C(dim_M) must be >= 1");
        return c;
    }
};

struct WitnessReport {
    std::string mode;
    std::uint64_t seed = 0;
    double t = 0.0;
    std::vector<double> p;  // per mediator qubit; 1.0 = no dephasing
    int dim_a = 0;
    int t_qubits = 0;
    int dim_b = 0;
    double comm_norm = 0.0;
    double rhs_bound = 0.0;
    double sup_bound = 0.0;
    MeasureKind measure = MeasureKind::log_negativity;
    GFunction g = GFunction::identity;
    double delta_q = 0.0;
    double lhs = 0.0;    // g^{-1}(delta_q)
    double slack = 0.0;  // rhs_bound - lhs
    double wall_ms = 0.0;

    double uniform_p() const {
        if (p.empty()) return 1.0;
        return p.front();
    }
};

// H_K = -i K for skew-Hermitian K; the commutator's "imaginary component".
inline Mat hermitian_generator(const Mat& k) {
    if (!is_skew_hermitian(k))
        throw validation_error("hermitian_generator: input is not skew-Hermitian");
    const complexd minus_i{0.0, -1.0};
    Mat h = minus_i * k;
    // Symmetrize away the tolerated skew residual.
    return Mat((h + Mat(h.adjoint())) / 2.0);
}

inline double bound_rhs(const Mat& k, double t, const BoundConfig& config, int dim_m) {
    if (t < 0.0) throw validation_error("bound_rhs: t must be >= 0");
    Mat h_k = hermitian_generator(k);
    Mat cos_m = matrix_func_herm(h_k, [&](double lambda) {
        return complexd{std::cos(lambda * t * t / 2.0), 0.0};
    });
    Mat inner = 2.0 * (Mat::Identity(h_k.rows(), h_k.cols()) - cos_m);
    return 2.0 * config.c_of(dim_m) * std::sqrt(std::max(0.0, spectral_norm(inner)));
}

inline double bound_sup(const BoundConfig& config, int dim_m) {
    return 4.0 * config.c_of(dim_m);
}

inline Mat zassenhaus_unitary(const Mat& h_am, const Mat& h_mb, double t) {
    if (!is_hermitian(h_am) || !is_hermitian(h_mb))
        throw validation_error("zassenhaus_unitary: Hamiltonians must be Hermitian");
    const complexd i{0.0, 1.0};
    Mat k = h_am * h_mb - h_mb * h_am;
    Mat u_am = matrix_func_herm(h_am, [&](double l) { return std::exp(-i * l * t); });
    Mat u_mb = matrix_func_herm(h_mb, [&](double l) { return std::exp(-i * l * t); });
    // exp(K t^2/2) through the Hermitian generator: K = i H_K.
    Mat h_k = hermitian_generator(k);
    Mat u_k = matrix_func_herm(h_k, [&](double l) { return std::exp(i * l * t * t / 2.0); });
    return Mat(u_am * u_mb * u_k);
}

inline double truncation_error(const Mat& h_am, const Mat& h_mb, double t) {
    const complexd i{0.0, 1.0};
    Mat u_exact = matrix_func_herm(Mat(h_am + h_mb), [&](double l) { return std::exp(-i * l * t); });
    return spectral_norm(Mat(u_exact - zassenhaus_unitary(h_am, h_mb, t)));
}

inline double apply_g_inverse(double dq, GFunction g) {
    switch (g) {
        case GFunction::identity: return dq;
        case GFunction::log: return std::exp(dq);
    }
    return dq;
}

// Full pipeline for one (instance, t) point: evolve rho_0 under the exact
// unitary of H_AM + H_MB, trace out the mediator, measure the A:B gain, and
// evaluate the bound from the symbolic commutator densified.
inline WitnessReport evaluate(const OperatorSum& h_am, const OperatorSum& h_mb,
                              const SystemLayout& layout, const DensityMatrix& rho0, double t,
                              const BoundConfig& bound_config, const CorrelationMeasure& measure,
                              std::optional<InitialBound> bound0 = std::nullopt) {
    auto start = std::chrono::steady_clock::now();
    if (rho0.dims != layout.site_dims())
        throw validation_error("evaluate: initial state does not match the layout");
    if (!is_valid_density(rho0.mat))
        throw validation_error("evaluate: initial state is not a valid density matrix");

    DenseOperator dense_am = to_dense(h_am, layout);
    DenseOperator dense_mb = to_dense(h_mb, layout);
    DenseOperator h_total{Mat(dense_am.mat + dense_mb.mat), dense_am.dims};

    OperatorSum k_sym = commutator(h_am, h_mb);
    Mat k = to_dense(k_sym, layout).mat;

    InitialBound b0 = bound0 ? *bound0
                             : initial_bound(rho0, InitialBoundMode::product_state_zero, measure);

    DensityMatrix rho_t = evolve(rho0, h_total, t);
    std::vector<int> ab_sites = {0, static_cast<int>(rho0.dims.size()) - 1};
    DensityMatrix rho_ab = partial_trace(rho_t, ab_sites);

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
    r.delta_q = delta_q(rho_ab, b0, measure);
    r.lhs = apply_g_inverse(r.delta_q, measure.g);
    r.slack = r.rhs_bound - r.lhs;
    r.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    return r;
}

}  // namespace medwit
