#pragma once

/// Quantum-correlation measures on A:B states and the initial-correlation
/// budget. Log-negativity is exact; the relative entropy of entanglement is
/// reported as a certified upper bound: the optimizer searches over explicit
/// convex mixtures of product pure states, so the returned closest-separable
/// certificate is separable by construction and reproduces the value.

#include <optional>
#include <vector>

#include "medwit/dense.hpp"
#include "medwit/rng.hpp"

namespace medwit {

inline constexpr double kLn2 = 0.6931471805599453;

enum class MeasureKind { log_negativity, negativity, relative_entropy_of_entanglement };
enum class GFunction { identity, log };

inline std::string measure_kind_name(MeasureKind k) {
    switch (k) {
        case MeasureKind::log_negativity: return "log_negativity";
        case MeasureKind::negativity: return "negativity";
        default: return "relative_entropy_of_entanglement";
    }
}

inline std::string g_function_name(GFunction g) {
    return g == GFunction::identity ? "identity" : "log";
}

struct CorrelationMeasure {
    MeasureKind kind = MeasureKind::log_negativity;
    GFunction g = GFunction::identity;
};

inline void require_bipartite(const DensityMatrix& rho) {
    if (rho.dims.size() != 2)
        throw validation_error("state must live on an A:B bipartition (trace the mediator first)");
}

//=========================================================================
// Entropies and simple measures (log base 2, values in bits)
//=========================================================================

inline double entropy_bits(const Mat& rho) {
    HermEig e = herm_eig(rho);
    double s = 0.0;
    for (Eigen::Index i = 0; i < e.eigenvalues.size(); ++i) {
        double l = e.eigenvalues(i);
        if (l > 1e-15) s -= l * std::log2(l);
    }
    return s;
}

// tr rho log2 rho - tr rho log2 sigma; eigenvalues of sigma floored to keep
// the value finite when sigma is close to singular.
inline double relative_entropy_bits(const Mat& rho, const Mat& sigma) {
    HermEig er = herm_eig(rho);
    double s1 = 0.0;
    for (Eigen::Index i = 0; i < er.eigenvalues.size(); ++i) {
        double l = er.eigenvalues(i);
        if (l > 1e-15) s1 += l * std::log2(l);
    }
    HermEig es = herm_eig(sigma);
    Mat log_sigma = Mat::Zero(sigma.rows(), sigma.cols());
    for (Eigen::Index i = 0; i < es.eigenvalues.size(); ++i) {
        double l = std::max(es.eigenvalues(i), 1e-300);
        log_sigma += std::log2(l) * (es.eigenvectors.col(i) * es.eigenvectors.col(i).adjoint());
    }
    return s1 - std::real((rho * log_sigma).trace());
}

inline double log_negativity(const DensityMatrix& rho_ab) {
    require_bipartite(rho_ab);
    double tn = trace_norm_herm(partial_transpose(rho_ab, 1).mat);
    return std::max(0.0, std::log2(tn));
}

inline double negativity(const DensityMatrix& rho_ab) {
    require_bipartite(rho_ab);
    double tn = trace_norm_herm(partial_transpose(rho_ab, 1).mat);
    return std::max(0.0, (tn - 1.0) / 2.0);
}

inline double mutual_information(const DensityMatrix& rho_ab) {
    require_bipartite(rho_ab);
    Mat rho_a = partial_trace(rho_ab, {0}).mat;
    Mat rho_b = partial_trace(rho_ab, {1}).mat;
    return std::max(0.0, entropy_bits(rho_a) + entropy_bits(rho_b) - entropy_bits(rho_ab.mat));
}

//=========================================================================
// Relative entropy of entanglement (certified upper bound)
//=========================================================================

struct ProductAtom {
    Vec a;  // unit vector on A
    Vec b;  // unit vector on B
};

struct ReeResult {
    double value = 0.0;
    Mat certificate;  // the separable sigma realizing the value
    std::vector<ProductAtom> atoms;
    std::vector<double> weights;
    bool converged = false;
    double fw_gap = 0.0;  // duality gap at exit; value - gap lower-bounds true REE
    int iterations = 0;
};

namespace detail {

// Gradient of f(sigma) = -tr(rho log2 sigma) through the Daleckii-Krein
// divided-difference formula; df = tr(G D) for Hermitian directions D.
inline Mat ree_gradient(const Mat& sigma, const Mat& rho) {
    HermEig e = herm_eig(sigma);
    const Eigen::Index n = e.eigenvalues.size();
    Mat rho_t = e.eigenvectors.adjoint() * rho * e.eigenvectors;
    Mat phi(n, n);
    for (Eigen::Index k = 0; k < n; ++k) {
        for (Eigen::Index l = 0; l < n; ++l) {
            double lk = std::max(e.eigenvalues(k), 1e-16);
            double ll = std::max(e.eigenvalues(l), 1e-16);
            if (std::abs(lk - ll) < 1e-12 * std::max(lk, ll))
                phi(k, l) = 1.0 / lk;
            else
                phi(k, l) = (std::log(lk) - std::log(ll)) / (lk - ll);
        }
    }
    Mat g = e.eigenvectors * phi.cwiseProduct(rho_t) * e.eigenvectors.adjoint();
    g = (g + Mat(g.adjoint())) / 2.0;
    return Mat(-g / kLn2);
}

// Maximizes <a b| G |a b> over product unit vectors by alternating
// top-eigenvector updates, seeded from the rank-1 rounding of G's leading
// eigenvector plus random restarts.
inline ProductAtom best_product_state(const Mat& g, int da, int db, int restarts, Rng& rng) {
    auto contract_b = [&](const Vec& a) {
        Mat mb = Mat::Zero(db, db);
        for (int beta = 0; beta < db; ++beta)
            for (int delta = 0; delta < db; ++delta) {
                complexd acc{0.0, 0.0};
                for (int alpha = 0; alpha < da; ++alpha)
                    for (int gamma = 0; gamma < da; ++gamma)
                        acc += std::conj(a(alpha)) * g(alpha * db + beta, gamma * db + delta) * a(gamma);
                mb(beta, delta) = acc;
            }
        return mb;
    };
    auto contract_a = [&](const Vec& b) {
        Mat ma = Mat::Zero(da, da);
        for (int alpha = 0; alpha < da; ++alpha)
            for (int gamma = 0; gamma < da; ++gamma) {
                complexd acc{0.0, 0.0};
                for (int beta = 0; beta < db; ++beta)
                    for (int delta = 0; delta < db; ++delta)
                        acc += std::conj(b(beta)) * g(alpha * db + beta, gamma * db + delta) * b(delta);
                ma(alpha, gamma) = acc;
            }
        return ma;
    };
    auto top_vec = [](const Mat& m) {
        Eigen::SelfAdjointEigenSolver<Mat> s(Mat((m + m.adjoint()) / 2.0));
        return Vec(s.eigenvectors().col(m.rows() - 1));
    };
    auto atom_value = [&](const Vec& a, const Vec& b) {
        Vec joint(da * db);
        for (int alpha = 0; alpha < da; ++alpha)
            for (int beta = 0; beta < db; ++beta) joint(alpha * db + beta) = a(alpha) * b(beta);
        return std::real(joint.dot(g * joint));
    };

    std::vector<Vec> seeds;
    {
        // Rank-1 rounding of the leading eigenvector of G.
        Eigen::SelfAdjointEigenSolver<Mat> s(g);
        Vec top = s.eigenvectors().col(g.rows() - 1);
        Mat reshaped(da, db);
        for (int alpha = 0; alpha < da; ++alpha)
            for (int beta = 0; beta < db; ++beta) reshaped(alpha, beta) = top(alpha * db + beta);
        Eigen::JacobiSVD<Mat> svd(reshaped, Eigen::ComputeThinU | Eigen::ComputeThinV);
        seeds.push_back(svd.matrixU().col(0));
    }
    for (int r = 0; r < restarts; ++r) {
        Vec a(da);
        for (int i = 0; i < da; ++i) a(i) = complexd{rng.normal(), rng.normal()};
        a /= a.norm();
        seeds.push_back(a);
    }

    double best = -1e300;
    ProductAtom out;
    for (const Vec& seed : seeds) {
        Vec a = seed, b;
        for (int it = 0; it < 80; ++it) {
            b = top_vec(contract_b(a));
            Vec a_next = top_vec(contract_a(b));
            bool settled = std::abs(std::abs(a.dot(a_next)) - 1.0) < 1e-14;
            a = a_next;
            if (settled) break;
        }
        double v = atom_value(a, b);
        if (v > best) {
            best = v;
            out = {a, b};
        }
    }
    return out;
}

inline Vec atom_joint(const ProductAtom& atom, int db) {
    Vec joint(atom.a.size() * db);
    for (Eigen::Index alpha = 0; alpha < atom.a.size(); ++alpha)
        for (int beta = 0; beta < db; ++beta)
            joint(alpha * db + beta) = atom.a(alpha) * atom.b(beta);
    return joint;
}

}  // namespace detail

// Frank-Wolfe over mixtures of at most (dim_A*dim_B)^2 product pure states,
// with periodic multiplicative weight refits. A small fixed weight stays on
// the computational product basis so sigma never becomes singular; those
// basis atoms are part of the reported mixture.
inline ReeResult relative_entropy_of_entanglement(const DensityMatrix& rho_ab, int restarts = 6) {
    require_bipartite(rho_ab);
    const int da = rho_ab.dims[0], db = rho_ab.dims[1];
    const int d = da * db;
    if (d > 16)
        throw validation_error("relative_entropy_of_entanglement: dim_A*dim_B must be <= 16");
    const std::size_t max_atoms = static_cast<std::size_t>(d) * static_cast<std::size_t>(d);
    const double floor_eps = 1e-10;
    const double gap_tol = 1e-9;
    const Mat& rho = rho_ab.mat;
    Rng rng(0x9ec4aULL);

    std::vector<ProductAtom> atoms;
    std::vector<double> weights;
    const std::size_t n_basis = static_cast<std::size_t>(d);
    for (int i = 0; i < da; ++i)
        for (int j = 0; j < db; ++j) {
            ProductAtom atom;
            atom.a = Vec::Zero(da);
            atom.b = Vec::Zero(db);
            atom.a(i) = 1.0;
            atom.b(j) = 1.0;
            atoms.push_back(std::move(atom));
            weights.push_back(0.0);  // floor carriers only
        }
    {
        // Warm start: products of the marginal eigenvectors. For product
        // inputs this already is the optimum.
        HermEig ea = herm_eig(partial_trace(rho_ab, {0}).mat);
        HermEig eb = herm_eig(partial_trace(rho_ab, {1}).mat);
        for (int i = 0; i < da; ++i)
            for (int j = 0; j < db; ++j) {
                atoms.push_back({ea.eigenvectors.col(i), eb.eigenvectors.col(j)});
                weights.push_back(std::max(0.0, ea.eigenvalues(i) * eb.eigenvalues(j)));
            }
    }

    auto refloor = [&](std::vector<double>& w) {
        double total = 0.0;
        for (double& x : w) {
            if (x < 0.0) x = 0.0;
            total += x;
        }
        if (total <= 0.0) {
            for (std::size_t i = 0; i < n_basis; ++i) w[i] = 1.0 / d;
            total = 1.0;
        }
        for (double& x : w) x *= (1.0 - floor_eps) / total;
        for (std::size_t i = 0; i < n_basis; ++i) w[i] += floor_eps / d;
    };
    auto sigma_of = [&](const std::vector<double>& w) {
        Mat s = Mat::Zero(d, d);
        for (std::size_t i = 0; i < atoms.size(); ++i) {
            Vec joint = detail::atom_joint(atoms[i], db);
            s += w[i] * (joint * joint.adjoint());
        }
        return s;
    };
    refloor(weights);

    auto weight_refit = [&](int iters) {
        for (int it = 0; it < iters; ++it) {
            Mat sigma = sigma_of(weights);
            double f = relative_entropy_bits(rho, sigma);
            Mat grad = detail::ree_gradient(sigma, rho);
            std::vector<double> slopes(atoms.size());
            double lo = 1e300, hi = -1e300;
            for (std::size_t i = 0; i < atoms.size(); ++i) {
                Vec joint = detail::atom_joint(atoms[i], db);
                slopes[i] = std::real(joint.dot(grad * joint));
                lo = std::min(lo, slopes[i]);
                hi = std::max(hi, slopes[i]);
            }
            if (hi - lo < 1e-14) return;
            double eta = 4.0 / (hi - lo);
            bool improved = false;
            for (int bt = 0; bt < 6 && !improved; ++bt) {
                std::vector<double> next = weights;
                for (std::size_t i = 0; i < atoms.size(); ++i)
                    next[i] = weights[i] * std::exp(-eta * (slopes[i] - lo));
                refloor(next);
                if (relative_entropy_bits(rho, sigma_of(next)) <= f) {
                    weights = std::move(next);
                    improved = true;
                }
                eta /= 2.0;
            }
            if (!improved) return;
        }
    };

    ReeResult result;
    std::vector<ProductAtom> best_atoms = atoms;
    std::vector<double> best_weights = weights;
    double best_f = relative_entropy_bits(rho, sigma_of(weights));
    int stall = 0;
    int it = 0;
    const int max_iters = 250;
    for (; it < max_iters; ++it) {
        Mat sigma = sigma_of(weights);
        Mat grad = detail::ree_gradient(sigma, rho);
        ProductAtom cand = detail::best_product_state(Mat(-grad), da, db, restarts, rng);
        Vec joint = detail::atom_joint(cand, db);
        double slope_atom = std::real(joint.dot(grad * joint));
        double slope_sigma = std::real((grad * sigma).trace());
        double gap = slope_sigma - slope_atom;  // >= f(sigma) - f*
        result.fw_gap = gap;
        if (gap < gap_tol || best_f < 1e-12) {
            result.converged = true;
            break;
        }
        if (stall > 25) break;  // no measurable progress; keep the best iterate

        // Exact line search on the segment toward the new atom.
        Mat p = joint * joint.adjoint();
        double a = 0.0, b = 1.0;
        for (int gs = 0; gs < 60; ++gs) {
            double m1 = a + 0.381966 * (b - a);
            double m2 = a + 0.618034 * (b - a);
            double f1 = relative_entropy_bits(rho, Mat((1 - m1) * sigma + m1 * p));
            double f2 = relative_entropy_bits(rho, Mat((1 - m2) * sigma + m2 * p));
            if (f1 < f2)
                b = m2;
            else
                a = m1;
        }
        double gamma = (a + b) / 2.0;
        if (gamma > 1e-18) {
            for (double& w : weights) w *= (1.0 - gamma);
            // Merge with an existing atom when essentially identical.
            bool merged = false;
            for (std::size_t i = 0; i < atoms.size() && !merged; ++i) {
                Vec existing = detail::atom_joint(atoms[i], db);
                if (std::abs(existing.dot(joint)) > 1.0 - 1e-12) {
                    weights[i] += gamma;
                    merged = true;
                }
            }
            if (!merged) {
                if (atoms.size() >= max_atoms) {
                    // Evict the lightest non-basis atom.
                    std::size_t victim = n_basis;
                    for (std::size_t i = n_basis; i < atoms.size(); ++i)
                        if (weights[i] < weights[victim]) victim = i;
                    atoms.erase(atoms.begin() + static_cast<std::ptrdiff_t>(victim));
                    weights.erase(weights.begin() + static_cast<std::ptrdiff_t>(victim));
                }
                atoms.push_back(cand);
                weights.push_back(gamma);
            }
            refloor(weights);
        }
        if (it % 5 == 4) weight_refit(20);
        double f_now = relative_entropy_bits(rho, sigma_of(weights));
        if (f_now < best_f - 1e-13) {
            best_f = f_now;
            best_atoms = atoms;
            best_weights = weights;
            stall = 0;
        } else {
            ++stall;
        }
    }
    atoms = std::move(best_atoms);
    weights = std::move(best_weights);
    weight_refit(200);  // accepts only improvements, so this cannot regress

    result.iterations = it;
    result.certificate = sigma_of(weights);
    result.value = relative_entropy_bits(rho, result.certificate);
    result.atoms = std::move(atoms);
    result.weights = std::move(weights);
    return result;
}

inline double eval_measure(const CorrelationMeasure& m, const DensityMatrix& rho_ab) {
    switch (m.kind) {
        case MeasureKind::log_negativity: return log_negativity(rho_ab);
        case MeasureKind::negativity: return negativity(rho_ab);
        default: return relative_entropy_of_entanglement(rho_ab).value;
    }
}

//=========================================================================
// Initial-correlation budget
//=========================================================================

enum class InitialBoundMode { product_state_zero, optimized };

struct InitialBound {
    InitialBoundMode mode = InitialBoundMode::product_state_zero;
    MeasureKind measure = MeasureKind::log_negativity;
    double value = 0.0;
    int restarts = 0;
    double best_residual = 0.0;   // distance value achieved by the certificate
    Mat certificate_a, certificate_b;
};

namespace detail {

inline double trace_distance(const Mat& x, const Mat& y) {
    return 0.5 * trace_norm_herm(Mat(x - y));
}

// Compact Nelder-Mead over real parameter vectors.
template <class F>
std::pair<std::vector<double>, double> nelder_mead(F&& f, std::vector<double> x0, double step,
                                                   int max_iters) {
    const std::size_t n = x0.size();
    std::vector<std::vector<double>> simplex(n + 1, x0);
    for (std::size_t i = 0; i < n; ++i) simplex[i + 1][i] += step;
    std::vector<double> fv(n + 1);
    for (std::size_t i = 0; i <= n; ++i) fv[i] = f(simplex[i]);

    auto order = [&] {
        std::vector<std::size_t> idx(n + 1);
        for (std::size_t i = 0; i <= n; ++i) idx[i] = i;
        std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return fv[a] < fv[b]; });
        std::vector<std::vector<double>> s2;
        std::vector<double> f2;
        for (std::size_t i : idx) {
            s2.push_back(simplex[i]);
            f2.push_back(fv[i]);
        }
        simplex = std::move(s2);
        fv = std::move(f2);
    };

    for (int it = 0; it < max_iters; ++it) {
        order();
        if (std::abs(fv[n] - fv[0]) < 1e-14) break;
        std::vector<double> centroid(n, 0.0);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) centroid[j] += simplex[i][j] / static_cast<double>(n);
        auto blend = [&](double alpha) {
            std::vector<double> p(n);
            for (std::size_t j = 0; j < n; ++j)
                p[j] = centroid[j] + alpha * (simplex[n][j] - centroid[j]);
            return p;
        };
        auto refl = blend(-1.0);
        double fr = f(refl);
        if (fr < fv[0]) {
            auto exp_pt = blend(-2.0);
            double fe = f(exp_pt);
            if (fe < fr) {
                simplex[n] = exp_pt;
                fv[n] = fe;
            } else {
                simplex[n] = refl;
                fv[n] = fr;
            }
        } else if (fr < fv[n - 1]) {
            simplex[n] = refl;
            fv[n] = fr;
        } else {
            auto con = blend(0.5);
            double fc = f(con);
            if (fc < fv[n]) {
                simplex[n] = con;
                fv[n] = fc;
            } else {
                for (std::size_t i = 1; i <= n; ++i) {
                    for (std::size_t j = 0; j < n; ++j)
                        simplex[i][j] = simplex[0][j] + 0.5 * (simplex[i][j] - simplex[0][j]);
                    fv[i] = f(simplex[i]);
                }
            }
        }
    }
    order();
    return {simplex[0], fv[0]};
}

inline Mat density_from_params(const std::vector<double>& p, std::size_t offset, int dim) {
    Mat m(dim, dim);
    std::size_t k = offset;
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) m(i, j) = complexd{p[k], p[k + 1]}, k += 2;
    Mat rho = m * m.adjoint();
    double tr = std::real(rho.trace());
    if (tr < 1e-30) return Mat::Identity(dim, dim) / dim;
    return Mat(rho / tr);
}

}  // namespace detail

// Budget of initial correlations. product_state_zero certifies the input is
// a three-fold product and returns exactly zero; optimized minimizes the
// distance from the A:B marginal to product states with restarts. The
// admissible-family supremum terms vanish for product initial states, the
// only family built in; callers with a wider family can add its suprema on
// top of the returned value.
inline InitialBound initial_bound(const DensityMatrix& rho0, InitialBoundMode mode,
                                  const CorrelationMeasure& measure, int restarts = 6,
                                  GFunction g_of_distance = GFunction::identity) {
    if (rho0.dims.size() < 3)
        throw validation_error("initial_bound expects the full A:M:B state");
    InitialBound out;
    out.mode = mode;
    out.measure = measure.kind;

    const int n_sites = static_cast<int>(rho0.dims.size());
    std::vector<int> mediator_sites;
    for (int s = 1; s < n_sites - 1; ++s) mediator_sites.push_back(s);

    if (mode == InitialBoundMode::product_state_zero) {
        Mat rho_a = partial_trace(rho0, {0}).mat;
        Mat rho_b = partial_trace(rho0, {n_sites - 1}).mat;
        DensityMatrix rho_m = partial_trace(rho0, mediator_sites);
        Mat product = kron(kron(rho_a, rho_m.mat), rho_b);
        if (max_abs(Mat(rho0.mat - product)) > kDensityTol)
            throw validation_error("initial state is not a product state; use optimized mode");
        out.value = 0.0;
        return out;
    }

    // Optimized mode: I_{A:B} term over product states sigma_A (x) sigma_B.
    std::vector<int> ab_sites = {0, n_sites - 1};
    DensityMatrix rho_ab = partial_trace(rho0, ab_sites);
    const int da = rho_ab.dims[0], db = rho_ab.dims[1];
    const std::size_t n_params = 2 * static_cast<std::size_t>(da * da + db * db);

    Rng rng(0x1b07edULL);
    double best = 1e300;
    std::vector<double> best_params;
    for (int r = 0; r < std::max(1, restarts); ++r) {
        std::vector<double> x0(n_params);
        for (double& v : x0) v = rng.normal() * 0.5;
        auto objective = [&](const std::vector<double>& p) {
            Mat sa = detail::density_from_params(p, 0, da);
            Mat sb = detail::density_from_params(p, 2 * static_cast<std::size_t>(da * da), db);
            return detail::trace_distance(rho_ab.mat, kron(sa, sb));
        };
        auto [params, value] = detail::nelder_mead(objective, std::move(x0), 0.4, 600);
        if (value < best) {
            best = value;
            best_params = std::move(params);
        }
    }
    out.restarts = std::max(1, restarts);
    out.best_residual = best;
    out.certificate_a = detail::density_from_params(best_params, 0, da);
    out.certificate_b = detail::density_from_params(best_params, 2 * static_cast<std::size_t>(da * da), db);
    out.value = (g_of_distance == GFunction::identity) ? best : std::log(best);
    return out;
}

// Q(rho_t) - B(Q(rho_0)); may be negative.
inline double delta_q(const DensityMatrix& rho_ab, const InitialBound& bound,
                      const CorrelationMeasure& measure) {
    if (bound.measure != measure.kind)
        throw validation_error("delta_q: initial bound was computed for a different measure");
    return eval_measure(measure, rho_ab) - bound.value;
}

}  // namespace medwit
