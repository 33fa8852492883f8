#pragma once

#include <cstdint>
#include <nlohmann/json.hpp>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "connforge/expr.hpp"
#include "connforge/tensor.hpp"

namespace connforge {

class StructureError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Single coordinate chart: an axis-aligned open box in R^n.
struct Chart {
    int n = 0;
    std::vector<std::pair<double, double>> domain;  // per-coordinate [lo,hi]

    bool contains(std::span<const double> p) const;
};

/// An (alpha,epsilon)-structure (M,J,g) on a chart: metric and structure
/// tensor given componentwise as symbolic expressions. Immutable after load.
struct GeometryStructure {
    std::string name;
    std::string geometry;  // hermitian | norden | product | para-hermitian
    int alpha = -1;
    int epsilon = 1;
    Chart chart;

    std::vector<std::vector<ScalarExpr>> g;   // g[i][j] = g_ij
    std::vector<std::vector<ScalarExpr>> J;   // J[k][j] = J^k_j
    std::vector<std::vector<std::string>> g_src, J_src;

    // dg[k][i][j] = d_k g_ij, dJ[i][k][j] = d_i J^k_j (precomputed at load)
    std::vector<std::vector<std::vector<ScalarExpr>>> dg, dJ;
};

/// All pointwise data needed by the connection formulas, with derivatives
/// evaluated from the exact symbolic expressions.
struct PointFrame {
    std::vector<double> p;
    Mat g, g_inv, J;
    Tensor3 dg;   // dg(k,i,j) = d_k g_ij
    Tensor3 dJ;   // dJ(i,k,j) = d_i J^k_j
    int alpha = -1;
    int epsilon = 1;
};

struct ValidationReport {
    struct Condition {
        std::string name;
        double defect;
        double tol;
        bool pass;
    };
    std::vector<Condition> conditions;
    bool pass = true;
    int points_tested = 0;
};

/// Parse and sanity-check a structure file. Throws StructureError on schema
/// violations (missing keys, bad shapes, inconsistent geometry label) and
/// ParseError on malformed component expressions. Mathematical defects are
/// NOT checked here; use validate_structure.
GeometryStructure load_structure(const nlohmann::json& spec);
GeometryStructure load_structure_file(const std::string& path);

/// Export back to the structure-file schema (uses the stored source strings,
/// so a round trip reproduces identical expressions).
nlohmann::ordered_json structure_to_json(const GeometryStructure& s);

/// Pointwise defects of the defining conditions at the sampled points:
/// symmetry of g, nondegeneracy, positive definiteness when epsilon=1,
/// J^2 = alpha Id, trace J = 0, J^T g J = epsilon g.
ValidationReport validate_structure(const GeometryStructure& s,
                                    std::span<const std::vector<double>> points,
                                    double tol);

PointFrame frame_at(const GeometryStructure& s, std::span<const double> p);

enum class KahlerType { kahler_type, non_kahler_type };

/// Kähler type iff the Levi-Civita connection already parallelizes J at
/// every sampled point.
KahlerType classify_kahler_type(const GeometryStructure& s,
                                std::span<const std::vector<double>> points,
                                double tol);

/// Deterministic uniform samples in the chart box; same seed, same points.
std::vector<std::vector<double>> sample_points(const Chart& chart, int count,
                                               std::uint64_t seed);

} // namespace connforge
