#include <catch2/catch_amalgamated.hpp>

#include "medwit/experiment.hpp"
#include "medwit/witness.hpp"

using namespace medwit;

namespace {

SystemLayout qubit_layout() { return SystemLayout::with_default_ops(2, 1, 2); }

HamiltonianPair canonical_pair(const SystemLayout& layout) {
    HamiltonianSpec spec;
    spec.terms_am.push_back({1.0, "X", {Pauli::X}});
    spec.terms_mb.push_back({1.0, "Z", {Pauli::Z}});
    return build(spec, layout);
}

// Two terms per side; generates strictly positive A:B gain from |+>|0>|+>.
HamiltonianPair multiterm_pair(const SystemLayout& layout) {
    HamiltonianSpec spec;
    spec.terms_am.push_back({1.0, "X", {Pauli::X}});
    spec.terms_am.push_back({0.9, "Z", {Pauli::Z}});
    spec.terms_mb.push_back({1.0, "Z", {Pauli::Z}});
    spec.terms_mb.push_back({0.8, "X", {Pauli::X}});
    return build(spec, layout);
}

HamiltonianPair classical_pair(const SystemLayout& layout) {
    HamiltonianSpec spec;
    spec.terms_am.push_back({1.0, "X", {Pauli::Z}});
    spec.terms_mb.push_back({1.0, "Z", {Pauli::Z}});
    return build(spec, layout);
}

}  // namespace

TEST_CASE("hermitian_generator") {
    CHECK(max_abs(hermitian_generator(Mat::Zero(4, 4))) == 0.0);

    Mat string_op = complexd{0.0, -2.0} *
                    kron(kron(pauli_matrix(Pauli::X), pauli_matrix(Pauli::Y)), pauli_matrix(Pauli::Z));
    Mat h_k = hermitian_generator(string_op);
    HermEig e = herm_eig(h_k);
    CHECK(e.eigenvalues(0) == Catch::Approx(-2.0).epsilon(1e-12));
    CHECK(e.eigenvalues(e.eigenvalues.size() - 1) == Catch::Approx(2.0).epsilon(1e-12));

    SystemLayout layout = SystemLayout::with_default_ops(2, 2, 2);
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        auto [h_am, h_mb] = random_ensemble(EnsembleKind::general, seed, layout, 4, 1.0);
        Mat k = to_dense(commutator(h_am, h_mb), layout).mat;
        CHECK(is_hermitian(hermitian_generator(k), 1e-12));
    }

    CHECK_THROWS_AS(hermitian_generator(pauli_matrix(Pauli::X)), validation_error);
}

TEST_CASE("bound_rhs: zero commutator, canonical closed form, ceiling") {
    SystemLayout layout = qubit_layout();
    BoundConfig config;  // C(d) = d, dim_M = 2

    CHECK(bound_rhs(Mat::Zero(8, 8), 0.7, config, layout.dim_m()) == 0.0);

    auto [h_am, h_mb] = canonical_pair(layout);
    Mat k = to_dense(commutator(h_am, h_mb), layout).mat;
    // H_K has eigenvalues +-2, so rhs = 4 C |sin(t^2/2)| = 8 sin(0.125) at t = 0.5.
    CHECK(bound_rhs(k, 0.5, config, layout.dim_m()) ==
          Catch::Approx(0.99739786708182152).epsilon(1e-12));

    for (double t : {0.0, 0.3, 1.0, 2.0, 5.0})
        CHECK(bound_rhs(k, t, config, layout.dim_m()) <= bound_sup(config, layout.dim_m()) + 1e-12);
}

TEST_CASE("bound_rhs is even in K and unitary-conjugation invariant") {
    SystemLayout layout = qubit_layout();
    BoundConfig config;
    auto [h_am, h_mb] = multiterm_pair(layout);
    Mat k = to_dense(commutator(h_am, h_mb), layout).mat;
    double base = bound_rhs(k, 0.7, config, layout.dim_m());
    CHECK(bound_rhs(Mat(-k), 0.7, config, layout.dim_m()) == Catch::Approx(base).epsilon(1e-12));

    Rng rng(3);
    Mat g(8, 8);
    for (int i = 0; i < 8; ++i)
        for (int j = 0; j < 8; ++j) g(i, j) = complexd{rng.normal(), rng.normal()};
    Mat u = matrix_func_herm(Mat((g + Mat(g.adjoint())) / 2.0),
                             [](double x) { return std::exp(complexd{0.0, 1.0} * x); });
    CHECK(bound_rhs(Mat(u * k * u.adjoint()), 0.7, config, layout.dim_m()) ==
          Catch::Approx(base).margin(1e-10));
}

TEST_CASE("bound_rhs scales quadratically at small t") {
    SystemLayout layout = qubit_layout();
    BoundConfig config;
    auto [h_am, h_mb] = multiterm_pair(layout);
    Mat k = to_dense(commutator(h_am, h_mb), layout).mat;
    std::vector<double> xs, ys;
    for (int j = 0; j < 8; ++j) {
        double t = std::pow(10.0, -3.0 + j / 7.0);
        xs.push_back(std::log(t));
        ys.push_back(std::log(bound_rhs(k, t, config, layout.dim_m())));
    }
    double n = static_cast<double>(xs.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i)
        sx += xs[i], sy += ys[i], sxx += xs[i] * xs[i], sxy += xs[i] * ys[i];
    double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    CHECK(slope == Catch::Approx(2.0).margin(0.1));
}

TEST_CASE("bound_sup arithmetic") {
    BoundConfig by_dim;
    CHECK(bound_sup(by_dim, 2) == 8.0);

    BoundConfig constant;
    constant.c_function = CFunction::constant;
    constant.c_constant = 1.0;
    CHECK(bound_sup(constant, 2) == 4.0);

    BoundConfig sqrt_dim;
    sqrt_dim.c_function = CFunction::sqrt_dim;
    CHECK(bound_sup(sqrt_dim, 4) == 8.0);

    BoundConfig bad;
    bad.c_function = CFunction::constant;
    bad.c_constant = 0.5;
    CHECK_THROWS_AS(bound_sup(bad, 2), validation_error);
}

TEST_CASE("zassenhaus_unitary: exactness for commuting pairs, identity at t=0") {
    SystemLayout layout = qubit_layout();
    auto [c_am, c_mb] = classical_pair(layout);
    Mat a = to_dense(c_am, layout).mat;
    Mat b = to_dense(c_mb, layout).mat;
    const complexd i{0.0, 1.0};
    for (double t : {0.3, 1.0, 2.5}) {
        Mat exact = matrix_func_herm(Mat(a + b), [&](double l) { return std::exp(-i * l * t); });
        CHECK(max_abs(Mat(exact - zassenhaus_unitary(a, b, t))) < 1e-12);
    }

    auto [h_am, h_mb] = multiterm_pair(layout);
    Mat ha = to_dense(h_am, layout).mat;
    Mat hb = to_dense(h_mb, layout).mat;
    CHECK(max_abs(Mat(zassenhaus_unitary(ha, hb, 0.0) - Mat::Identity(8, 8))) < 1e-13);

    // unitarity of the approximant
    Mat u = zassenhaus_unitary(ha, hb, 0.8);
    CHECK(max_abs(Mat(u * u.adjoint() - Mat::Identity(8, 8))) < 1e-10);

    CHECK_THROWS_AS(zassenhaus_unitary(Mat(i * ha), hb, 0.1), validation_error);
}

TEST_CASE("truncation_error: canonical magnitude and third-order scaling") {
    SystemLayout layout = qubit_layout();
    auto [h_am, h_mb] = canonical_pair(layout);
    Mat a = to_dense(h_am, layout).mat;
    Mat b = to_dense(h_mb, layout).mat;

    CHECK(truncation_error(a, b, 0.01) <= 1e-5);

    auto [c_am, c_mb] = classical_pair(layout);
    Mat ca = to_dense(c_am, layout).mat;
    Mat cb = to_dense(c_mb, layout).mat;
    for (double t : {0.2, 1.0, 3.0}) CHECK(truncation_error(ca, cb, t) <= 1e-12);

    std::vector<double> xs, ys;
    for (int j = 0; j < 10; ++j) {
        double t = std::pow(10.0, -3.0 + 2.0 * j / 9.0);
        xs.push_back(std::log(t));
        ys.push_back(std::log(truncation_error(a, b, t)));
    }
    double n = static_cast<double>(xs.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i)
        sx += xs[i], sy += ys[i], sxx += xs[i] * xs[i], sxy += xs[i] * ys[i];
    double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    CHECK(slope == Catch::Approx(3.0).margin(0.2));

    // doubling t multiplies the error by ~8 in the small-t regime
    double e1 = truncation_error(a, b, 0.004);
    double e2 = truncation_error(a, b, 0.008);
    CHECK(e2 / e1 == Catch::Approx(8.0).margin(0.5));
}

TEST_CASE("apply_g_inverse") {
    CHECK(apply_g_inverse(0.0, GFunction::identity) == 0.0);
    CHECK(apply_g_inverse(0.0, GFunction::log) == 1.0);
    CHECK(apply_g_inverse(std::log(2.0), GFunction::log) == Catch::Approx(2.0).epsilon(1e-14));
    CHECK(apply_g_inverse(0.37, GFunction::identity) == 0.37);
}

TEST_CASE("evaluate: classical pair gives a doubly-null report") {
    SystemLayout layout = qubit_layout();
    auto [h_am, h_mb] = classical_pair(layout);
    DensityMatrix rho0 = named_initial_state(StateKind::product_plus_zero_plus, layout, {});
    BoundConfig bc;
    CorrelationMeasure measure;
    WitnessReport r = evaluate(h_am, h_mb, layout, rho0, 0.8, bc, measure);
    CHECK(r.delta_q <= 1e-10);
    CHECK(r.rhs_bound <= 1e-10);
    CHECK(r.comm_norm <= 1e-12);
}

TEST_CASE("evaluate: positive gain on the multiterm witness instance") {
    SystemLayout layout = qubit_layout();
    auto [h_am, h_mb] = multiterm_pair(layout);
    DensityMatrix rho0 = named_initial_state(StateKind::product_plus_zero_plus, layout, {});
    BoundConfig bc;
    CorrelationMeasure measure;
    WitnessReport r = evaluate(h_am, h_mb, layout, rho0, 0.5, bc, measure);
    // Frozen from two independent dense-simulation routes.
    CHECK(r.delta_q == Catch::Approx(0.07005820871617018).margin(1e-9));
    CHECK(r.comm_norm == Catch::Approx(3.44).epsilon(1e-12));
    CHECK(r.delta_q > 0.01);
    CHECK(r.lhs == r.delta_q);  // identity g
    CHECK(r.slack == r.rhs_bound - r.lhs);
    CHECK(r.rhs_bound <= r.sup_bound);
    CHECK(r.dim_a == 2);
    CHECK(r.t_qubits == 1);
    CHECK(r.dim_b == 2);
}

TEST_CASE("evaluate at t=0 is all zeros under the identity g") {
    SystemLayout layout = qubit_layout();
    auto [h_am, h_mb] = multiterm_pair(layout);
    DensityMatrix rho0 = named_initial_state(StateKind::product_plus_zero_plus, layout, {});
    WitnessReport r = evaluate(h_am, h_mb, layout, rho0, 0.0, BoundConfig{}, CorrelationMeasure{});
    CHECK(r.delta_q == Catch::Approx(0.0).margin(1e-12));
    CHECK(r.rhs_bound == Catch::Approx(0.0).margin(1e-12));
    CHECK(r.slack == Catch::Approx(0.0).margin(1e-12));
}

TEST_CASE("evaluate rejects a non-product initial state in the default bound mode") {
    SystemLayout layout = qubit_layout();
    auto [h_am, h_mb] = multiterm_pair(layout);
    Vec ghz = Vec::Zero(8);
    ghz(0) = ghz(7) = 1.0 / std::sqrt(2.0);
    DensityMatrix rho0 = pure_state(ghz, layout.site_dims());
    CHECK_THROWS_AS(evaluate(h_am, h_mb, layout, rho0, 0.5, BoundConfig{}, CorrelationMeasure{}),
                    validation_error);
}

TEST_CASE("bound_rhs vanishes only with the commutator") {
    SystemLayout layout = qubit_layout();
    BoundConfig bc;
    auto [h_am, h_mb] = canonical_pair(layout);
    Mat k = to_dense(commutator(h_am, h_mb), layout).mat;
    CHECK(bound_rhs(k, 0.0, bc, layout.dim_m()) == 0.0);
    CHECK(bound_rhs(k, 0.2, bc, layout.dim_m()) > 1e-3);
    CHECK(bound_rhs(Mat::Zero(8, 8), 0.2, bc, layout.dim_m()) == 0.0);
}
