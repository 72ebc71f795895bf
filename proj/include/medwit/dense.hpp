#pragma once

/// Dense complex linear algebra over the A | M_1..M_T | B layout:
/// densification of operator sums, Hermitian spectral calculus, norms,
/// partial trace/transpose and unitary evolution. All matrix functions go
/// through the eigendecomposition; no series expansions.

#include <Eigen/Dense>
#include <functional>
#include <numeric>

#include "medwit/pauli_algebra.hpp"
#include "medwit/system_layout.hpp"

namespace medwit {

struct DenseOperator {
    Mat mat;
    std::vector<int> dims;  // per-site dimensions, product equals mat size

    int total_dim() const {
        return std::accumulate(dims.begin(), dims.end(), 1, std::multiplies<int>());
    }
};

struct DensityMatrix {
    Mat mat;
    std::vector<int> dims;
};

inline constexpr double kDensityTol = 1e-10;

inline void check_square_dims(const Mat& m, const std::vector<int>& dims) {
    int d = std::accumulate(dims.begin(), dims.end(), 1, std::multiplies<int>());
    if (m.rows() != d || m.cols() != d)
        throw validation_error("matrix size does not match subsystem dimensions");
}

inline Mat kron(const Mat& a, const Mat& b) {
    Mat out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

//=========================================================================
// Densification
//=========================================================================

inline DenseOperator to_dense(const OperatorSum& h, const SystemLayout& layout) {
    if (h.t_qubits != layout.t_qubits)
        throw validation_error("to_dense: operator sum and layout disagree on mediator size");
    const int D = layout.total_dim();
    Mat acc = Mat::Zero(D, D);
    for (const auto& t : h.terms) {
        Mat m = layout.resolve_a(t.a_op);
        for (Pauli p : t.med) m = kron(m, pauli_matrix(p));
        m = kron(m, layout.resolve_b(t.b_op));
        acc += t.coeff * m;
    }
    return {std::move(acc), layout.site_dims()};
}

//=========================================================================
// Spectral calculus
//=========================================================================

struct HermEig {
    Eigen::VectorXd eigenvalues;  // ascending
    Mat eigenvectors;
};

inline HermEig herm_eig(const Mat& m) {
    if (!is_hermitian(m)) throw validation_error("herm_eig: input is not Hermitian");
    Eigen::SelfAdjointEigenSolver<Mat> solver(m);
    if (solver.info() != Eigen::Success)
        throw validation_error("herm_eig: eigendecomposition failed");
    return {solver.eigenvalues(), solver.eigenvectors()};
}

// f applied to a Hermitian matrix through its spectrum: V diag(f(lambda)) V^dag.
inline Mat matrix_func_herm(const Mat& m, const std::function<complexd(double)>& f) {
    HermEig e = herm_eig(m);
    Vec fl(e.eigenvalues.size());
    for (Eigen::Index i = 0; i < e.eigenvalues.size(); ++i) fl(i) = f(e.eigenvalues(i));
    return e.eigenvectors * fl.asDiagonal() * e.eigenvectors.adjoint();
}

// Largest singular value via the Hermitian eigenproblem of m^dag m.
inline double spectral_norm(const Mat& m) {
    if (m.size() == 0) return 0.0;
    Eigen::SelfAdjointEigenSolver<Mat> solver(Mat(m.adjoint() * m));
    double top = solver.eigenvalues().maxCoeff();
    return std::sqrt(std::max(0.0, top));
}

// Trace norm of a Hermitian matrix: sum of |eigenvalues|.
inline double trace_norm_herm(const Mat& m) {
    HermEig e = herm_eig(m);
    return e.eigenvalues.cwiseAbs().sum();
}

//=========================================================================
// Density matrices
//=========================================================================

inline bool is_valid_density(const Mat& m, double tol = kDensityTol) {
    if (!is_hermitian(m, tol)) return false;
    if (std::abs(m.trace() - complexd{1.0, 0.0}) > tol) return false;
    Eigen::SelfAdjointEigenSolver<Mat> solver(Mat((m + m.adjoint()) / 2.0));
    return solver.eigenvalues().minCoeff() >= -tol;
}

inline DensityMatrix make_density(Mat m, std::vector<int> dims, double tol = kDensityTol) {
    check_square_dims(m, dims);
    if (!is_valid_density(m, tol))
        throw validation_error("matrix is not a density matrix (PSD, unit trace)");
    return {std::move(m), std::move(dims)};
}

inline DensityMatrix pure_state(const Vec& psi, std::vector<int> dims) {
    Vec n = psi / psi.norm();
    return {Mat(n * n.adjoint()), std::move(dims)};
}

//=========================================================================
// Partial trace / partial transpose
//=========================================================================

namespace detail {

// Multi-index helpers over row-major site ordering.
inline std::vector<int> strides_of(const std::vector<int>& dims) {
    std::vector<int> s(dims.size());
    int acc = 1;
    for (int i = static_cast<int>(dims.size()) - 1; i >= 0; --i) {
        s[static_cast<std::size_t>(i)] = acc;
        acc *= dims[static_cast<std::size_t>(i)];
    }
    return s;
}

}  // namespace detail

// Traces out every subsystem not listed in keep (site indices, ascending).
inline DensityMatrix partial_trace(const DensityMatrix& rho, const std::vector<int>& keep) {
    const auto& dims = rho.dims;
    const int n = static_cast<int>(dims.size());
    std::vector<bool> kept(static_cast<std::size_t>(n), false);
    for (int s : keep) {
        if (s < 0 || s >= n) throw validation_error("partial_trace: subsystem index out of range");
        if (kept[static_cast<std::size_t>(s)]) throw validation_error("partial_trace: duplicate subsystem index");
        kept[static_cast<std::size_t>(s)] = true;
    }
    for (std::size_t i = 1; i < keep.size(); ++i)
        if (keep[i] <= keep[i - 1]) throw validation_error("partial_trace: keep set must be ascending");

    std::vector<int> keep_dims, trace_dims, keep_sites, trace_sites;
    for (int s = 0; s < n; ++s) {
        if (kept[static_cast<std::size_t>(s)]) {
            keep_dims.push_back(dims[static_cast<std::size_t>(s)]);
            keep_sites.push_back(s);
        } else {
            trace_dims.push_back(dims[static_cast<std::size_t>(s)]);
            trace_sites.push_back(s);
        }
    }
    const int dk = std::accumulate(keep_dims.begin(), keep_dims.end(), 1, std::multiplies<int>());
    const int dt = std::accumulate(trace_dims.begin(), trace_dims.end(), 1, std::multiplies<int>());
    const auto full_strides = detail::strides_of(dims);

    // Full-space index of (kept multi-index k, traced multi-index t).
    auto full_index = [&](int k, int t) {
        int idx = 0;
        for (int s = static_cast<int>(keep_sites.size()) - 1; s >= 0; --s) {
            int d = keep_dims[static_cast<std::size_t>(s)];
            idx += (k % d) * full_strides[static_cast<std::size_t>(keep_sites[static_cast<std::size_t>(s)])];
            k /= d;
        }
        for (int s = static_cast<int>(trace_sites.size()) - 1; s >= 0; --s) {
            int d = trace_dims[static_cast<std::size_t>(s)];
            idx += (t % d) * full_strides[static_cast<std::size_t>(trace_sites[static_cast<std::size_t>(s)])];
            t /= d;
        }
        return idx;
    };

    Mat out = Mat::Zero(dk, dk);
    for (int r = 0; r < dk; ++r)
        for (int c = 0; c < dk; ++c) {
            complexd acc{0.0, 0.0};
            for (int t = 0; t < dt; ++t) acc += rho.mat(full_index(r, t), full_index(c, t));
            out(r, c) = acc;
        }
    return {std::move(out), std::move(keep_dims)};
}

// Transpose of one subsystem. For the A:B bipartite states used by the
// entanglement measures this is the standard partial transpose.
inline DenseOperator partial_transpose(const DensityMatrix& rho, int site) {
    const auto& dims = rho.dims;
    if (site < 0 || site >= static_cast<int>(dims.size()))
        throw validation_error("partial_transpose: subsystem index out of range");
    const auto strides = detail::strides_of(dims);
    const int ds = dims[static_cast<std::size_t>(site)];
    const int stride = strides[static_cast<std::size_t>(site)];
    const int D = static_cast<int>(rho.mat.rows());

    auto site_digit = [&](int idx) { return (idx / stride) % ds; };
    Mat out(D, D);
    for (int r = 0; r < D; ++r)
        for (int c = 0; c < D; ++c) {
            int ri = site_digit(r), ci = site_digit(c);
            int r2 = r + (ci - ri) * stride;
            int c2 = c + (ri - ci) * stride;
            out(r, c) = rho.mat(r2, c2);
        }
    return {std::move(out), dims};
}

//=========================================================================
// Unitary evolution
//=========================================================================

inline DensityMatrix evolve(const DensityMatrix& rho0, const DenseOperator& h, double t) {
    if (h.mat.rows() != rho0.mat.rows())
        throw validation_error("evolve: Hamiltonian and state dimensions differ");
    const complexd i{0.0, 1.0};
    Mat u = matrix_func_herm(h.mat, [&](double lambda) { return std::exp(-i * lambda * t); });
    return {Mat(u * rho0.mat * u.adjoint()), rho0.dims};
}

}  // namespace medwit
