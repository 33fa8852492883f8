#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "connforge/geometry.hpp"
#include "connforge/tensor.hpp"

namespace connforge {

enum class Provenance {
    levi_civita,
    first_canonical,
    chern,
    skew_plus,
    skew_minus,
    bismut,
    line,
    projected,
    jstar,
    synthetic,
    combo,
};

std::string provenance_name(Provenance p);

/// Connection coefficients Gamma^k_ij at a single point.
struct ConnectionCoeffs {
    std::vector<double> p;
    Tensor3 gamma;
    Provenance provenance = Provenance::synthetic;
    double line_t = 0.0;  // meaningful for provenance == line
};

enum class SolveStatus { unique, none, underdetermined };

std::string solve_status_name(SolveStatus s);

/// Outcome of a pointwise constrained linear solve. For the Chern solver
/// the solution is a connection; for the skew solver it is the torsion
/// 3-form H (and the induced connection nabla^+).
struct SolveReport {
    SolveStatus status = SolveStatus::none;
    std::optional<ConnectionCoeffs> connection;
    std::optional<Tensor3> torsion_form;
    double residual = 0.0;
    int kernel_dim = 0;
    bool rank_ambiguous = false;
    std::string diagnostic;
};

/// Christoffel symbols of g: Gamma^k_ij = 1/2 g^kl (d_i g_jl + d_j g_il - d_l g_ij).
ConnectionCoeffs levi_civita(const PointFrame& f);

/// (nabla_k g)_ij = d_k g_ij - Gamma^l_ki g_lj - Gamma^l_kj g_il, as (k,i,j).
Tensor3 nabla_g(const Tensor3& gamma, const PointFrame& f);
double nabla_g_defect(const Tensor3& gamma, const PointFrame& f);

/// (nabla_i J)^k_j = d_i J^k_j + Gamma^k_il J^l_j - Gamma^l_ij J^k_l, stored (k,i,j).
Tensor3 nabla_j(const Tensor3& gamma, const PointFrame& f);

/// T^k_ij = Gamma^k_ij - Gamma^k_ji.
Tensor3 torsion(const Tensor3& gamma);

/// Canonical involution: (J* Gamma)^k_ij = alpha J^k_l (d_i J^l_j + Gamma^l_im J^m_j).
ConnectionCoeffs j_star(const ConnectionCoeffs& c, const PointFrame& f);

/// Projection onto J-adapted connections: 1/2 Gamma + 1/2 J*(Gamma).
ConnectionCoeffs project(const ConnectionCoeffs& c, const PointFrame& f);

/// S^k_ij = (-alpha/2) (nabla_i J)^k_m J^m_j; project(Gamma) = Gamma + S.
Tensor3 s_tensor(const Tensor3& gamma, const PointFrame& f);

/// nabla^0 = nabla^g + (-alpha/2)(nabla^g J) J.
ConnectionCoeffs first_canonical(const PointFrame& f);

/// Chern connection by constrained least squares in the n^3 unknowns
/// Gamma^k_ij: nabla g = 0, nabla J = 0, T(J.,J.) = alpha T. Unique iff the
/// system has full rank and residual <= tol.
SolveReport solve_chern(const PointFrame& f, double tol = 1e-9);

/// Adapted connection with totally skew-symmetric torsion: solves for the
/// 3-form H (C(n,3) unknowns) such that nabla^g + 1/2 g^{-1} H parallelizes J.
SolveReport solve_skew(const PointFrame& f, double tol = 1e-9);

/// Gamma^{+/-} = Gamma^g +/- 1/2 g^kl H_lij.
ConnectionCoeffs nabla_plus_minus(const PointFrame& f, const Tensor3& H, int sign);

/// Barycentric combination; weights must sum to 1 (tol 1e-12).
ConnectionCoeffs affine_combine(
    const std::vector<std::pair<double, ConnectionCoeffs>>& terms);

/// Point on the canonical line nabla^t = (1-t) nabla^0 + t nabla^c.
ConnectionCoeffs canonical_line(const ConnectionCoeffs& first_canonical,
                                const ConnectionCoeffs& chern, double t);

/// nabla^b = 2 nabla^0 - nabla^c (nabla^0 is the midpoint of nabla^b, nabla^c).
ConnectionCoeffs bismut(const ConnectionCoeffs& first_canonical,
                        const ConnectionCoeffs& chern);

/// Seeded random metric connection Gamma^g + A, with the lowering of A
/// antisymmetric in its (Y,Z) slots so that nabla g = 0 holds exactly.
ConnectionCoeffs synthetic_metric_connection(const PointFrame& f, std::uint64_t seed);

/// Seeded random connection with no adaptedness constraints (test fixture).
ConnectionCoeffs synthetic_connection(const PointFrame& f, std::uint64_t seed);

} // namespace connforge
