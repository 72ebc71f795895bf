#include <catch2/catch_amalgamated.hpp>

#include "medwit/dense.hpp"
#include "medwit/hamiltonians.hpp"
#include "medwit/rng.hpp"

using namespace medwit;

namespace {

Mat random_hermitian(int dim, Rng& rng) {
    Mat m(dim, dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) m(i, j) = complexd{rng.normal(), rng.normal()};
    return Mat((m + Mat(m.adjoint())) / 2.0);
}

DensityMatrix random_density(const std::vector<int>& dims, Rng& rng) {
    int d = 1;
    for (int x : dims) d *= x;
    Mat m(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) m(i, j) = complexd{rng.normal(), rng.normal()};
    Mat rho = m * m.adjoint();
    rho /= rho.trace();
    return {std::move(rho), dims};
}

Vec basis_vec(int dim, int k) {
    Vec v = Vec::Zero(dim);
    v(k) = 1.0;
    return v;
}

}  // namespace

TEST_CASE("to_dense basics") {
    SystemLayout layout = SystemLayout::with_default_ops(2, 1, 2);

    OperatorSum empty;
    empty.t_qubits = 1;
    CHECK(max_abs(to_dense(empty, layout).mat) == 0.0);

    OperatorSum id = make_sum({identity_string(1)}, 1);
    Mat dense_id = to_dense(id, layout).mat;
    CHECK(max_abs(Mat(dense_id - Mat::Identity(8, 8))) == 0.0);

    OperatorSum unknown = make_sum({[] {
                                       OperatorString s;
                                       s.a_op = "nope";
                                       s.med = {Pauli::I};
                                       return s;
                                   }()},
                                   1);
    CHECK_THROWS_AS(to_dense(unknown, layout), validation_error);

    OperatorSum wrong_t = make_sum({identity_string(2)}, 2);
    CHECK_THROWS_AS(to_dense(wrong_t, layout), validation_error);
}

TEST_CASE("to_dense is an algebra homomorphism") {
    SystemLayout layout = SystemLayout::with_default_ops(2, 2, 3);
    Rng rng(7);
    auto random_string = [&](std::uint64_t seed) {
        Rng local(seed);
        OperatorString s;
        const std::vector<std::string> a_keys = layout.a_keys();
        const std::vector<std::string> b_keys = layout.b_keys();
        s.coeff = complexd{local.uniform(-1, 1), local.uniform(-1, 1)};
        s.a_op = a_keys[local.index(a_keys.size())];
        s.b_op = b_keys[local.index(b_keys.size())];
        s.med = {static_cast<Pauli>(local.index(4)), static_cast<Pauli>(local.index(4))};
        return s;
    };
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        OperatorString s1 = random_string(seed);
        OperatorString s2 = random_string(seed + 1000);
        Mat lhs = to_dense(make_sum({string_mul(s1, s2)}, 2), layout).mat;
        Mat rhs = to_dense(make_sum({s1}, 2), layout).mat * to_dense(make_sum({s2}, 2), layout).mat;
        CHECK(max_abs(Mat(lhs - rhs)) < 1e-12);
    }
}

TEST_CASE("densified symbolic commutator equals the dense matrix commutator") {
    // This is the oracle pairing for the symbolic algebra.
    for (int t_qubits : {1, 2}) {
        SystemLayout layout = SystemLayout::with_default_ops(2, t_qubits, 2);
        for (std::uint64_t seed = 0; seed < 25; ++seed) {
            auto [h_am, h_mb] = random_ensemble(EnsembleKind::general, seed, layout, 5, 1.0);
            Mat a = to_dense(h_am, layout).mat;
            Mat b = to_dense(h_mb, layout).mat;
            Mat oracle = a * b - b * a;
            Mat symbolic = to_dense(commutator(h_am, h_mb), layout).mat;
            CHECK(max_abs(Mat(symbolic - oracle)) < 1e-12);
        }
    }
}

TEST_CASE("herm_eig reconstructs and orders") {
    Mat z = pauli_matrix(Pauli::Z);
    HermEig e = herm_eig(z);
    CHECK(e.eigenvalues(0) == Catch::Approx(-1.0));
    CHECK(e.eigenvalues(1) == Catch::Approx(1.0));

    HermEig id = herm_eig(Mat::Identity(4, 4));
    for (int i = 0; i < 4; ++i) CHECK(id.eigenvalues(i) == Catch::Approx(1.0));

    Rng rng(3);
    Mat m = random_hermitian(12, rng);
    HermEig em = herm_eig(m);
    Mat rebuilt = em.eigenvectors *
                  em.eigenvalues.cast<complexd>().asDiagonal() * em.eigenvectors.adjoint();
    CHECK(max_abs(Mat(m - rebuilt)) <= 1e-10 * std::max(1.0, max_abs(m)));

    Mat skew(2, 2);
    skew << complexd{0, 1}, 0, 0, 0;
    CHECK_THROWS_AS(herm_eig(skew), validation_error);
}

TEST_CASE("matrix_func_herm evaluates through the spectrum") {
    Mat zero = Mat::Zero(3, 3);
    Mat cos_zero = matrix_func_herm(zero, [](double x) { return complexd{std::cos(x), 0.0}; });
    CHECK(max_abs(Mat(cos_zero - Mat::Identity(3, 3))) < 1e-14);

    const complexd i{0.0, 1.0};
    Mat exp_z = matrix_func_herm(pauli_matrix(Pauli::Z),
                                 [&](double x) { return std::exp(-i * 3.141592653589793 * x); });
    CHECK(max_abs(Mat(exp_z + Mat::Identity(2, 2))) < 1e-12);

    // cos applied to diag(2, -2) * t^2/2 at t = 0.5: entries cos(0.25)
    Mat d = Mat::Zero(2, 2);
    d(0, 0) = 2.0;
    d(1, 1) = -2.0;
    double t = 0.5;
    Mat c = matrix_func_herm(d, [&](double x) { return complexd{std::cos(x * t * t / 2.0), 0.0}; });
    CHECK(std::real(c(0, 0)) == Catch::Approx(0.96891242171064478).epsilon(1e-14));
    CHECK(std::real(c(1, 1)) == Catch::Approx(0.96891242171064478).epsilon(1e-14));
}

TEST_CASE("spectral_norm") {
    CHECK(spectral_norm(Mat::Zero(4, 4)) == 0.0);
    CHECK(spectral_norm(pauli_matrix(Pauli::X)) == Catch::Approx(1.0));

    Mat string_op = complexd{0.0, -2.0} *
                    kron(kron(pauli_matrix(Pauli::X), pauli_matrix(Pauli::Y)), pauli_matrix(Pauli::Z));
    CHECK(spectral_norm(string_op) == Catch::Approx(2.0).epsilon(1e-12));

    // submultiplicative and unitarily invariant on a small ensemble
    Rng rng(11);
    for (int k = 0; k < 10; ++k) {
        Mat a = random_hermitian(6, rng);
        Mat b = random_hermitian(6, rng);
        CHECK(spectral_norm(Mat(a * b)) <= spectral_norm(a) * spectral_norm(b) + 1e-10);
        Mat u = matrix_func_herm(random_hermitian(6, rng), [](double x) {
            return std::exp(complexd{0.0, 1.0} * x);
        });
        CHECK(spectral_norm(Mat(u * a * u.adjoint())) == Catch::Approx(spectral_norm(a)).margin(1e-10));
    }
}

TEST_CASE("partial_trace on product and mixed states") {
    Rng rng(5);
    DensityMatrix rho_a = random_density({2}, rng);
    DensityMatrix rho_m = random_density({2}, rng);
    DensityMatrix rho_b = random_density({3}, rng);
    Mat product = kron(kron(rho_a.mat, rho_m.mat), rho_b.mat);
    DensityMatrix rho{product, {2, 2, 3}};

    DensityMatrix kept = partial_trace(rho, {0, 2});
    CHECK(kept.dims == std::vector<int>{2, 3});
    CHECK(max_abs(Mat(kept.mat - kron(rho_a.mat, rho_b.mat))) < 1e-12);

    DensityMatrix maximally_mixed{Mat::Identity(12, 12) / 12.0, {2, 2, 3}};
    DensityMatrix just_a = partial_trace(maximally_mixed, {0});
    CHECK(max_abs(Mat(just_a.mat - Mat::Identity(2, 2) / 2.0)) < 1e-14);

    // trace and positivity are preserved
    DensityMatrix mixed = random_density({2, 2, 3}, rng);
    DensityMatrix reduced = partial_trace(mixed, {0, 2});
    CHECK(std::abs(reduced.mat.trace() - complexd{1.0, 0.0}) < 1e-12);
    CHECK(is_valid_density(reduced.mat));

    CHECK_THROWS_AS(partial_trace(mixed, {0, 7}), validation_error);
}

TEST_CASE("tracing the mediator out of a purified Bell pair leaves mixed marginals") {
    // |phi> = (|0>_A |0>_M |0>_B + |1>_A |1>_M |1>_B)/sqrt(2): the A:B
    // marginal is a classically correlated state with maximally mixed parts.
    Vec psi = Vec::Zero(8);
    psi(0) = 1.0 / std::sqrt(2.0);
    psi(7) = 1.0 / std::sqrt(2.0);
    DensityMatrix rho = pure_state(psi, {2, 2, 2});
    DensityMatrix ab = partial_trace(rho, {0, 2});
    DensityMatrix a = partial_trace(ab, {0});
    DensityMatrix b = partial_trace(ab, {1});
    CHECK(max_abs(Mat(a.mat - Mat::Identity(2, 2) / 2.0)) < 1e-14);
    CHECK(max_abs(Mat(b.mat - Mat::Identity(2, 2) / 2.0)) < 1e-14);
}

TEST_CASE("partial_transpose involution, spectra and the Bell value") {
    Rng rng(9);
    DensityMatrix rho = random_density({2, 3}, rng);
    DenseOperator once = partial_transpose(rho, 1);
    DenseOperator twice = partial_transpose({once.mat, once.dims}, 1);
    CHECK(max_abs(Mat(twice.mat - rho.mat)) == 0.0);
    CHECK(is_hermitian(once.mat));

    // product state: eigenvalues unchanged
    DensityMatrix pa = random_density({2}, rng);
    DensityMatrix pb = random_density({3}, rng);
    DensityMatrix prod{kron(pa.mat, pb.mat), {2, 3}};
    HermEig before = herm_eig(prod.mat);
    HermEig after = herm_eig(partial_transpose(prod, 1).mat);
    CHECK(max_abs(Mat(before.eigenvalues - after.eigenvalues)) < 1e-12);

    // Bell state: minimum eigenvalue -1/2
    Vec bell = Vec::Zero(4);
    bell(0) = bell(3) = 1.0 / std::sqrt(2.0);
    DensityMatrix rho_bell = pure_state(bell, {2, 2});
    HermEig e = herm_eig(partial_transpose(rho_bell, 0).mat);
    CHECK(e.eigenvalues(0) == Catch::Approx(-0.5).margin(1e-12));

    // separable mixtures stay PPT
    Mat sep = Mat::Zero(4, 4);
    for (int k = 0; k < 6; ++k) {
        DensityMatrix qa = random_density({2}, rng);
        DensityMatrix qb = random_density({2}, rng);
        sep += kron(qa.mat, qb.mat) / 6.0;
    }
    HermEig esep = herm_eig(partial_transpose({sep, {2, 2}}, 1).mat);
    CHECK(esep.eigenvalues(0) >= -1e-10);
}

TEST_CASE("evolve preserves trace, spectrum and eigenstates") {
    SystemLayout layout = SystemLayout::with_default_ops(2, 1, 2);
    Rng rng(21);
    DensityMatrix rho0 = random_density(layout.site_dims(), rng);
    DenseOperator h = to_dense(
        random_ensemble(EnsembleKind::general, 4, layout, 4, 1.0).h_am, layout);

    CHECK(max_abs(Mat(evolve(rho0, h, 0.0).mat - rho0.mat)) < 1e-13);

    // Z eigenstate stays put
    DensityMatrix zero_state = pure_state(basis_vec(2, 0), {2});
    DenseOperator hz{pauli_matrix(Pauli::Z), {2}};
    for (double t : {0.3, 1.7}) {
        DensityMatrix evolved = evolve(zero_state, hz, t);
        CHECK(max_abs(Mat(evolved.mat - zero_state.mat)) < 1e-13);
    }

    // purity is conserved along a t grid
    double purity0 = std::real((rho0.mat * rho0.mat).trace());
    for (double t : {0.1, 0.5, 1.0, 2.0}) {
        DensityMatrix rt = evolve(rho0, h, t);
        CHECK(std::real((rt.mat * rt.mat).trace()) == Catch::Approx(purity0).epsilon(1e-10));
        CHECK(std::abs(rt.mat.trace() - complexd{1.0, 0.0}) < 1e-10);
    }

    Mat not_herm = Mat::Zero(8, 8);
    not_herm(0, 1) = 1.0;
    CHECK_THROWS_AS(evolve(rho0, {not_herm, layout.site_dims()}, 0.5), validation_error);
}

TEST_CASE("skew-Hermitian densification has Hermitian -iK") {
    SystemLayout layout = SystemLayout::with_default_ops(2, 2, 2);
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        auto [h_am, h_mb] = random_ensemble(EnsembleKind::general, seed, layout, 4, 1.0);
        Mat k = to_dense(commutator(h_am, h_mb), layout).mat;
        CHECK(max_abs(Mat(k + Mat(k.adjoint()))) < 1e-12);
        Mat h_k = complexd{0.0, -1.0} * k;
        CHECK(is_hermitian(h_k, 1e-12));
    }
}
