#pragma once

#include <Eigen/Dense>
#include <complex>
#include <map>
#include <string>
#include <vector>

#include "medwit/errors.hpp"
#include "medwit/pauli_algebra.hpp"

namespace medwit {

using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

inline constexpr double kHermTol = 1e-10;

inline double max_abs(const Mat& m) { return m.cwiseAbs().maxCoeff(); }

inline bool is_hermitian(const Mat& m, double tol = kHermTol) {
    if (m.rows() != m.cols()) return false;
    double scale = std::max(1.0, max_abs(m));
    return max_abs(Mat(m - m.adjoint())) <= tol * scale;
}

inline bool is_skew_hermitian(const Mat& m, double tol = kHermTol) {
    if (m.rows() != m.cols()) return false;
    double scale = std::max(1.0, max_abs(m));
    return max_abs(Mat(m + m.adjoint())) <= tol * scale;
}

inline Mat pauli_matrix(Pauli p) {
    Mat m(2, 2);
    const complexd i{0.0, 1.0};
    switch (p) {
        case Pauli::I: m << 1, 0, 0, 1; break;
        case Pauli::X: m << 0, 1, 1, 0; break;
        case Pauli::Y: m << 0, -i, i, 0; break;
        case Pauli::Z: m << 1, 0, 0, -1; break;
    }
    return m;
}

// Generalized Gell-Mann basis for dimension d (without identity):
// symmetric S{j}{k}, antisymmetric A{j}{k} for j<k, diagonal D{l}.
inline std::map<std::string, Mat> gell_mann_ops(int d) {
    std::map<std::string, Mat> ops;
    const complexd i{0.0, 1.0};
    for (int j = 0; j < d; ++j) {
        for (int k = j + 1; k < d; ++k) {
            Mat s = Mat::Zero(d, d), a = Mat::Zero(d, d);
            s(j, k) = 1.0;
            s(k, j) = 1.0;
            a(j, k) = -i;
            a(k, j) = i;
            ops["S" + std::to_string(j) + std::to_string(k)] = s;
            ops["A" + std::to_string(j) + std::to_string(k)] = a;
        }
    }
    for (int l = 1; l < d; ++l) {
        Mat m = Mat::Zero(d, d);
        double norm = std::sqrt(2.0 / (l * (l + 1.0)));
        for (int j = 0; j < l; ++j) m(j, j) = norm;
        m(l, l) = -l * norm;
        ops["D" + std::to_string(l)] = m;
    }
    return ops;
}

// Dimensions and site-operator dictionaries for one A | M_1..M_T | B system.
struct SystemLayout {
    int dim_a = 2;
    int t_qubits = 1;
    int dim_b = 2;
    std::map<std::string, Mat> a_ops;
    std::map<std::string, Mat> b_ops;

    int dim_m() const { return 1 << t_qubits; }
    int total_dim() const { return dim_a * dim_m() * dim_b; }

    // Per-site dimensions: A, then T mediator qubits, then B.
    std::vector<int> site_dims() const {
        std::vector<int> d;
        d.push_back(dim_a);
        for (int k = 0; k < t_qubits; ++k) d.push_back(2);
        d.push_back(dim_b);
        return d;
    }

    void register_a(const std::string& key, const Mat& m) { register_op(a_ops, key, m, dim_a); }
    void register_b(const std::string& key, const Mat& m) { register_op(b_ops, key, m, dim_b); }

    // Resolves a (possibly composite) key against one dictionary.
    Mat resolve(const std::map<std::string, Mat>& ops, const std::string& key, int dim) const {
        Mat out = Mat::Identity(dim, dim);
        for (const std::string& part : split_key(key)) {
            if (is_identity_key(part)) continue;
            auto it = ops.find(part);
            if (it == ops.end())
                throw validation_error("unresolved site-operator key '" + part + "'");
            out = out * it->second;
        }
        return out;
    }

    Mat resolve_a(const std::string& key) const { return resolve(a_ops, key, dim_a); }
    Mat resolve_b(const std::string& key) const { return resolve(b_ops, key, dim_b); }

    bool has_a(const std::string& key) const { return check_key(a_ops, key); }
    bool has_b(const std::string& key) const { return check_key(b_ops, key); }

    // Registered base keys in deterministic order (identity first).
    std::vector<std::string> a_keys() const { return keys_of(a_ops); }
    std::vector<std::string> b_keys() const { return keys_of(b_ops); }

    // Pauli dictionary for qubit probes, generalized Gell-Mann for dim 3+.
    static SystemLayout with_default_ops(int dim_a, int t_qubits, int dim_b) {
        if (dim_a < 1 || dim_b < 1 || t_qubits < 1)
            throw validation_error("layout dimensions must be positive and T >= 1");
        SystemLayout l;
        l.dim_a = dim_a;
        l.t_qubits = t_qubits;
        l.dim_b = dim_b;
        l.a_ops = default_dict(dim_a);
        l.b_ops = default_dict(dim_b);
        return l;
    }

private:
    static std::map<std::string, Mat> default_dict(int dim) {
        std::map<std::string, Mat> ops;
        ops[kIdentityKey] = Mat::Identity(dim, dim);
        if (dim == 1) return ops;
        if (dim == 2) {
            ops["X"] = pauli_matrix(Pauli::X);
            ops["Y"] = pauli_matrix(Pauli::Y);
            ops["Z"] = pauli_matrix(Pauli::Z);
        } else {
            for (auto& [k, m] : gell_mann_ops(dim)) ops[k] = m;
        }
        return ops;
    }

    static void register_op(std::map<std::string, Mat>& ops, const std::string& key, const Mat& m,
                            int dim) {
        if (key.find('*') != std::string::npos)
            throw validation_error("site-operator key may not contain '*'");
        if (m.rows() != dim || m.cols() != dim)
            throw validation_error("site operator '" + key + "' has the wrong dimension");
        if (!is_hermitian(m))
            throw validation_error("site operator '" + key + "' is not Hermitian");
        ops[key] = m;
    }

    bool check_key(const std::map<std::string, Mat>& ops, const std::string& key) const {
        for (const std::string& part : split_key(key))
            if (!is_identity_key(part) && ops.find(part) == ops.end()) return false;
        return true;
    }

    static std::vector<std::string> keys_of(const std::map<std::string, Mat>& ops) {
        std::vector<std::string> ks;
        ks.reserve(ops.size());
        ks.push_back(kIdentityKey);
        for (const auto& [k, m] : ops)
            if (!is_identity_key(k)) ks.push_back(k);
        return ks;
    }
};

}  // namespace medwit
