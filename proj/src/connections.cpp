#include "connforge/connections.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <array>
#include <cmath>
#include <random>

namespace connforge {

std::string provenance_name(Provenance p) {
    switch (p) {
    case Provenance::levi_civita: return "levi-civita";
    case Provenance::first_canonical: return "first-canonical";
    case Provenance::chern: return "chern";
    case Provenance::skew_plus: return "skew-plus";
    case Provenance::skew_minus: return "skew-minus";
    case Provenance::bismut: return "bismut";
    case Provenance::line: return "line";
    case Provenance::projected: return "projected";
    case Provenance::jstar: return "jstar";
    case Provenance::synthetic: return "synthetic";
    case Provenance::combo: return "combo";
    }
    return "unknown";
}

std::string solve_status_name(SolveStatus s) {
    switch (s) {
    case SolveStatus::unique: return "unique";
    case SolveStatus::none: return "none";
    case SolveStatus::underdetermined: return "underdetermined";
    }
    return "unknown";
}

ConnectionCoeffs levi_civita(const PointFrame& f) {
    int n = static_cast<int>(f.p.size());
    ConnectionCoeffs c{f.p, Tensor3(n), Provenance::levi_civita};
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                double s = 0.0;
                for (int l = 0; l < n; ++l)
                    s += f.g_inv(k, l) *
                         (f.dg(i, j, l) + f.dg(j, i, l) - f.dg(l, i, j));
                c.gamma(k, i, j) = 0.5 * s;
            }
    return c;
}

Tensor3 nabla_g(const Tensor3& gamma, const PointFrame& f) {
    int n = gamma.dim();
    Tensor3 r(n);
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                double s = f.dg(k, i, j);
                for (int l = 0; l < n; ++l)
                    s -= gamma(l, k, i) * f.g(l, j) + gamma(l, k, j) * f.g(i, l);
                r(k, i, j) = s;
            }
    return r;
}

double nabla_g_defect(const Tensor3& gamma, const PointFrame& f) {
    return max_abs(nabla_g(gamma, f));
}

Tensor3 nabla_j(const Tensor3& gamma, const PointFrame& f) {
    int n = gamma.dim();
    Tensor3 r(n);
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                double s = f.dJ(i, k, j);
                for (int l = 0; l < n; ++l)
                    s += gamma(k, i, l) * f.J(l, j) - gamma(l, i, j) * f.J(k, l);
                r(k, i, j) = s;
            }
    return r;
}

Tensor3 torsion(const Tensor3& gamma) {
    int n = gamma.dim();
    Tensor3 t(n);
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                t(k, i, j) = gamma(k, i, j) - gamma(k, j, i);
    return t;
}

ConnectionCoeffs j_star(const ConnectionCoeffs& c, const PointFrame& f) {
    int n = c.gamma.dim();
    ConnectionCoeffs r{c.p, Tensor3(n), Provenance::jstar};
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                double s = 0.0;
                for (int l = 0; l < n; ++l) {
                    double inner = f.dJ(i, l, j);
                    for (int m = 0; m < n; ++m) inner += c.gamma(l, i, m) * f.J(m, j);
                    s += f.J(k, l) * inner;
                }
                r.gamma(k, i, j) = f.alpha * s;
            }
    return r;
}

ConnectionCoeffs project(const ConnectionCoeffs& c, const PointFrame& f) {
    ConnectionCoeffs js = j_star(c, f);
    ConnectionCoeffs r{c.p, 0.5 * c.gamma + 0.5 * js.gamma, Provenance::projected};
    return r;
}

Tensor3 s_tensor(const Tensor3& gamma, const PointFrame& f) {
    int n = gamma.dim();
    Tensor3 nj = nabla_j(gamma, f);
    Tensor3 s(n);
    double c = -0.5 * f.alpha;
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                double v = 0.0;
                for (int m = 0; m < n; ++m) v += nj(k, i, m) * f.J(m, j);
                s(k, i, j) = c * v;
            }
    return s;
}

ConnectionCoeffs first_canonical(const PointFrame& f) {
    ConnectionCoeffs lc = levi_civita(f);
    ConnectionCoeffs r{f.p, lc.gamma + s_tensor(lc.gamma, f),
                       Provenance::first_canonical};
    return r;
}

namespace {

struct LsqResult {
    Eigen::VectorXd x;
    double residual = 0.0;  // max-abs of A x - b
    int rank = 0;
    int kernel_dim = 0;
    bool ambiguous = false;
    std::string diagnostic;
};

// SVD least squares with rank decided by the 1e-10 * sigma_max cutoff.
// Singular values inside the (cutoff, 1e-7 * sigma_max] band make the rank
// decision numerically ambiguous; the caller reports that instead of guessing.
LsqResult least_squares(const Eigen::MatrixXd& A, const Eigen::VectorXd& b) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Eigen::VectorXd& sv = svd.singularValues();
    double smax = sv.size() > 0 ? sv(0) : 0.0;
    double cutoff = 1e-10 * smax;
    double band = 1e-7 * smax;

    LsqResult r;
    r.x = Eigen::VectorXd::Zero(A.cols());
    Eigen::VectorXd utb = svd.matrixU().transpose() * b;
    for (int i = 0; i < sv.size(); ++i) {
        if (sv(i) > cutoff) {
            r.x += (utb(i) / sv(i)) * svd.matrixV().col(i);
            ++r.rank;
            if (sv(i) <= band) {
                r.ambiguous = true;
                r.diagnostic = "singular value " + std::to_string(sv(i)) +
                               " within ambiguity band of cutoff " +
                               std::to_string(cutoff);
            }
        }
    }
    r.kernel_dim = static_cast<int>(A.cols()) - r.rank;
    r.residual = (A * r.x - b).cwiseAbs().maxCoeff();
    return r;
}

int permutation_sign(int a, int b, int c) {
    int inv = (a > b) + (a > c) + (b > c);
    return inv % 2 == 0 ? 1 : -1;
}

} // namespace

SolveReport solve_chern(const PointFrame& f, double tol) {
    int n = static_cast<int>(f.p.size());
    int nunk = n * n * n;
    auto idx = [n](int k, int i, int j) { return (k * n + i) * n + j; };

    int nrows = n * n * (n + 1) / 2 + n * n * n + n * n * (n - 1) / 2;
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(nrows, nunk);
    Eigen::VectorXd b = Eigen::VectorXd::Zero(nrows);
    int row = 0;

    // nabla g = 0
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
            for (int j = i; j < n; ++j) {
                for (int l = 0; l < n; ++l) {
                    A(row, idx(l, k, i)) -= f.g(l, j);
                    A(row, idx(l, k, j)) -= f.g(i, l);
                }
                b(row) = -f.dg(k, i, j);
                ++row;
            }
    // nabla J = 0
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k)
            for (int j = 0; j < n; ++j) {
                for (int l = 0; l < n; ++l) {
                    A(row, idx(k, i, l)) += f.J(l, j);
                    A(row, idx(l, i, j)) -= f.J(k, l);
                }
                b(row) = -f.dJ(i, k, j);
                ++row;
            }
    // T(JX, JY) = alpha T(X, Y)
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) {
                for (int l = 0; l < n; ++l)
                    for (int m = 0; m < n; ++m) {
                        double c = f.J(l, i) * f.J(m, j);
                        A(row, idx(k, l, m)) += c;
                        A(row, idx(k, m, l)) -= c;
                    }
                A(row, idx(k, i, j)) -= f.alpha;
                A(row, idx(k, j, i)) += f.alpha;
                ++row;
            }

    LsqResult ls = least_squares(A, b);
    SolveReport rep;
    rep.residual = ls.residual;
    rep.kernel_dim = ls.kernel_dim;
    rep.rank_ambiguous = ls.ambiguous;
    rep.diagnostic = ls.diagnostic;
    if (ls.ambiguous || ls.kernel_dim > 0) {
        rep.status = SolveStatus::underdetermined;
    } else if (ls.residual <= tol) {
        rep.status = SolveStatus::unique;
    } else {
        rep.status = SolveStatus::none;
    }
    ConnectionCoeffs c{f.p, Tensor3(n), Provenance::chern};
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) c.gamma(k, i, j) = ls.x(idx(k, i, j));
    rep.connection = std::move(c);
    return rep;
}

SolveReport solve_skew(const PointFrame& f, double tol) {
    int n = static_cast<int>(f.p.size());
    std::vector<std::array<int, 3>> triples;
    for (int a = 0; a < n; ++a)
        for (int b2 = a + 1; b2 < n; ++b2)
            for (int c = b2 + 1; c < n; ++c) triples.push_back({a, b2, c});
    int nunk = static_cast<int>(triples.size());
    auto lookup = [&](int a, int b2, int c) -> std::pair<int, int> {
        if (a == b2 || a == c || b2 == c) return {-1, 0};
        int s[3] = {a, b2, c};
        std::sort(s, s + 3);
        for (int t = 0; t < nunk; ++t)
            if (triples[t][0] == s[0] && triples[t][1] == s[1] && triples[t][2] == s[2])
                return {t, permutation_sign(a, b2, c)};
        return {-1, 0};
    };

    ConnectionCoeffs lc = levi_civita(f);
    Tensor3 njg = nabla_j(lc.gamma, f);

    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n * n * n, nunk);
    Eigen::VectorXd b = Eigen::VectorXd::Zero(n * n * n);
    int row = 0;
    // perturbation of nabla J by A^k_ij = 1/2 g^km H_mij
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k)
            for (int j = 0; j < n; ++j) {
                for (int l = 0; l < n; ++l)
                    for (int m = 0; m < n; ++m) {
                        auto [t1, s1] = lookup(m, i, l);
                        if (t1 >= 0) A(row, t1) += 0.5 * f.g_inv(k, m) * f.J(l, j) * s1;
                        auto [t2, s2] = lookup(m, i, j);
                        if (t2 >= 0) A(row, t2) -= 0.5 * f.g_inv(l, m) * f.J(k, l) * s2;
                    }
                b(row) = -njg(k, i, j);
                ++row;
            }

    LsqResult ls = least_squares(A, b);
    SolveReport rep;
    rep.residual = ls.residual;
    rep.kernel_dim = ls.kernel_dim;
    rep.rank_ambiguous = ls.ambiguous;
    rep.diagnostic = ls.diagnostic;
    if (ls.ambiguous || ls.kernel_dim > 0) {
        rep.status = SolveStatus::underdetermined;
    } else if (ls.residual <= tol) {
        rep.status = SolveStatus::unique;
    } else {
        rep.status = SolveStatus::none;
    }

    Tensor3 H(n);
    for (int t = 0; t < nunk; ++t) {
        auto [a, b2, c] = triples[t];
        int perm[6][3] = {{a, b2, c}, {b2, c, a}, {c, a, b2},
                          {b2, a, c}, {a, c, b2}, {c, b2, a}};
        for (int q = 0; q < 6; ++q)
            H(perm[q][0], perm[q][1], perm[q][2]) =
                permutation_sign(perm[q][0], perm[q][1], perm[q][2]) * ls.x(t);
    }
    rep.torsion_form = H;
    if (rep.status == SolveStatus::unique)
        rep.connection = nabla_plus_minus(f, H, +1);
    return rep;
}

ConnectionCoeffs nabla_plus_minus(const PointFrame& f, const Tensor3& H, int sign) {
    int n = H.dim();
    ConnectionCoeffs lc = levi_civita(f);
    Tensor3 half_t = raise_first(H, f.g_inv);  // T^k_ij = g^kl H_lij
    ConnectionCoeffs r{f.p, lc.gamma + (0.5 * (sign >= 0 ? 1.0 : -1.0)) * half_t,
                       sign >= 0 ? Provenance::skew_plus : Provenance::skew_minus};
    return r;
}

ConnectionCoeffs affine_combine(
    const std::vector<std::pair<double, ConnectionCoeffs>>& terms) {
    if (terms.empty()) throw std::invalid_argument("empty affine combination");
    double total = 0.0;
    for (const auto& [w, c] : terms) total += w;
    if (std::abs(total - 1.0) > 1e-12)
        throw std::invalid_argument("affine weights sum to " + std::to_string(total) +
                                    ", expected 1");
    int n = terms.front().second.gamma.dim();
    ConnectionCoeffs r{terms.front().second.p, Tensor3(n), Provenance::combo};
    for (const auto& [w, c] : terms) r.gamma += w * c.gamma;
    return r;
}

ConnectionCoeffs canonical_line(const ConnectionCoeffs& first_canonical,
                                const ConnectionCoeffs& chern, double t) {
    ConnectionCoeffs r = affine_combine({{1.0 - t, first_canonical}, {t, chern}});
    r.provenance = Provenance::line;
    r.line_t = t;
    return r;
}

ConnectionCoeffs bismut(const ConnectionCoeffs& first_canonical,
                        const ConnectionCoeffs& chern) {
    ConnectionCoeffs r = affine_combine({{2.0, first_canonical}, {-1.0, chern}});
    r.provenance = Provenance::bismut;
    return r;
}

ConnectionCoeffs synthetic_metric_connection(const PointFrame& f, std::uint64_t seed) {
    int n = static_cast<int>(f.p.size());
    std::mt19937_64 rng(seed);
    auto draw = [&rng] {
        return static_cast<double>(rng() >> 11) * 0x1p-52 - 1.0;  // [-1, 1)
    };
    // lowered perturbation L_kij, antisymmetric under swap of the Z=k and
    // Y=j slots, which is exactly the metricity criterion for Gamma^g + A
    Tensor3 L(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = j + 1; k < n; ++k) {
                double v = draw();
                L(k, i, j) = v;
                L(j, i, k) = -v;
            }
    Tensor3 A = raise_first(L, f.g_inv);
    ConnectionCoeffs lc = levi_civita(f);
    return {f.p, lc.gamma + A, Provenance::synthetic};
}

ConnectionCoeffs synthetic_connection(const PointFrame& f, std::uint64_t seed) {
    int n = static_cast<int>(f.p.size());
    std::mt19937_64 rng(seed);
    ConnectionCoeffs lc = levi_civita(f);
    Tensor3 A(n);
    for (double& x : A.data())
        x = static_cast<double>(rng() >> 11) * 0x1p-52 - 1.0;
    return {f.p, lc.gamma + A, Provenance::synthetic};
}

} // namespace connforge
