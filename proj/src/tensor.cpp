#include "connforge/tensor.hpp"

#include <cassert>
#include <cmath>

namespace connforge {

Tensor3& Tensor3::operator+=(const Tensor3& o) {
    assert(n_ == o.n_);
    for (std::size_t k = 0; k < v_.size(); ++k) v_[k] += o.v_[k];
    return *this;
}

Tensor3& Tensor3::operator-=(const Tensor3& o) {
    assert(n_ == o.n_);
    for (std::size_t k = 0; k < v_.size(); ++k) v_[k] -= o.v_[k];
    return *this;
}

Tensor3& Tensor3::operator*=(double s) {
    for (double& x : v_) x *= s;
    return *this;
}

Mat invert_metric(const Mat& g) {
    double det = g.determinant();
    if (std::abs(det) <= 1e-10) throw SingularMetricError(det);
    return g.inverse();
}

Tensor3 lower_first(const Tensor3& A, const Mat& g) {
    int n = A.dim();
    Tensor3 r(n);
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                double s = 0.0;
                for (int l = 0; l < n; ++l) s += g(k, l) * A(l, i, j);
                r(k, i, j) = s;
            }
    return r;
}

Tensor3 raise_first(const Tensor3& L, const Mat& g_inv) {
    return lower_first(L, g_inv);
}

double max_abs(const Mat& m) {
    return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

double max_abs(const Tensor3& t) {
    double m = 0.0;
    for (double x : t.data()) m = std::max(m, std::abs(x));
    return m;
}

double total_antisymmetry_defect(const Tensor3& H) {
    int n = H.dim();
    double d = 0.0;
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int c = 0; c < n; ++c) {
                d = std::max(d, std::abs(H(a, b, c) + H(b, a, c)));
                d = std::max(d, std::abs(H(a, b, c) + H(a, c, b)));
            }
    return d;
}

} // namespace connforge
