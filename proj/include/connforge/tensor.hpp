#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <vector>

namespace connforge {

using Mat = Eigen::MatrixXd;

class SingularMetricError : public std::runtime_error {
public:
    SingularMetricError(double det)
        : std::runtime_error("singular metric, |det| = " + std::to_string(det)),
          det(det) {}
    double det;
};

/// Dense rank-3 array of size n^3, indexed (k,i,j). Used for connection
/// coefficients Gamma^k_ij, (1,2)-tensors A^k_ij (k upper) and
/// (0,3)-tensors L_kij alike; variance is a matter of convention at the
/// call site. Index conventions: Gamma^k_ij means nabla_{d_i} d_j =
/// Gamma^k_ij d_k; torsion T^k_ij = Gamma^k_ij - Gamma^k_ji.
class Tensor3 {
public:
    Tensor3() = default;
    explicit Tensor3(int n) : n_(n), v_(static_cast<std::size_t>(n) * n * n, 0.0) {}

    int dim() const { return n_; }

    double& operator()(int k, int i, int j) {
        return v_[static_cast<std::size_t>((k * n_ + i) * n_ + j)];
    }
    double operator()(int k, int i, int j) const {
        return v_[static_cast<std::size_t>((k * n_ + i) * n_ + j)];
    }

    const std::vector<double>& data() const { return v_; }
    std::vector<double>& data() { return v_; }

    Tensor3& operator+=(const Tensor3& o);
    Tensor3& operator-=(const Tensor3& o);
    Tensor3& operator*=(double s);

    friend Tensor3 operator+(Tensor3 a, const Tensor3& b) { return a += b; }
    friend Tensor3 operator-(Tensor3 a, const Tensor3& b) { return a -= b; }
    friend Tensor3 operator*(double s, Tensor3 a) { return a *= s; }

private:
    int n_ = 0;
    std::vector<double> v_;
};

/// Inverse of a nondegenerate metric. Throws SingularMetricError when
/// |det g| <= 1e-10.
Mat invert_metric(const Mat& g);

/// result_kij = g_kl A^l_ij  (lower the first index).
Tensor3 lower_first(const Tensor3& A, const Mat& g);

/// result^k_ij = g^kl L_lij  (raise the first index with the inverse metric).
Tensor3 raise_first(const Tensor3& L, const Mat& g_inv);

double max_abs(const Mat& m);
double max_abs(const Tensor3& t);

/// Defect of total antisymmetry of a (0,3)-array: max over index pairs of
/// |H_{...} + H_{swapped}|. Zero iff H is a 3-form.
double total_antisymmetry_defect(const Tensor3& H);

} // namespace connforge
