#include "connforge/geometry.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>

#include "connforge/connections.hpp"

namespace connforge {

bool Chart::contains(std::span<const double> p) const {
    if (static_cast<int>(p.size()) != n) return false;
    for (int i = 0; i < n; ++i)
        if (p[i] < domain[i].first || p[i] > domain[i].second) return false;
    return true;
}

namespace {

const char* geometry_for(int alpha, int epsilon) {
    if (alpha == -1 && epsilon == 1) return "hermitian";
    if (alpha == -1 && epsilon == -1) return "norden";
    if (alpha == 1 && epsilon == 1) return "product";
    return "para-hermitian";
}

std::vector<std::vector<ScalarExpr>> parse_matrix(const nlohmann::json& m, int n,
                                                  const char* what) {
    if (!m.is_array() || static_cast<int>(m.size()) != n)
        throw StructureError(std::string(what) + " must be an " + std::to_string(n) +
                             "x" + std::to_string(n) + " array");
    std::vector<std::vector<ScalarExpr>> out(n);
    for (int i = 0; i < n; ++i) {
        const auto& row = m[i];
        if (!row.is_array() || static_cast<int>(row.size()) != n)
            throw StructureError(std::string(what) + " row " + std::to_string(i) +
                                 " has wrong length");
        for (int j = 0; j < n; ++j) {
            if (!row[j].is_string())
                throw StructureError(std::string(what) + " entries must be expression strings");
            out[i].push_back(ScalarExpr::parse(row[j].get<std::string>(), n));
        }
    }
    return out;
}

std::vector<std::vector<std::string>> matrix_sources(const nlohmann::json& m, int n) {
    std::vector<std::vector<std::string>> out(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) out[i].push_back(m[i][j].get<std::string>());
    return out;
}

} // namespace

GeometryStructure load_structure(const nlohmann::json& spec) {
    for (const char* key : {"name", "geometry", "alpha", "epsilon", "dimension",
                            "domain", "metric", "J"})
        if (!spec.contains(key))
            throw StructureError(std::string("missing key '") + key + "'");

    GeometryStructure s;
    s.name = spec["name"].get<std::string>();
    s.geometry = spec["geometry"].get<std::string>();
    s.alpha = spec["alpha"].get<int>();
    s.epsilon = spec["epsilon"].get<int>();
    if ((s.alpha != 1 && s.alpha != -1) || (s.epsilon != 1 && s.epsilon != -1))
        throw StructureError("alpha and epsilon must be +1 or -1");
    if (s.geometry != geometry_for(s.alpha, s.epsilon))
        throw StructureError("geometry label '" + s.geometry +
                             "' inconsistent with (alpha,epsilon)=(" +
                             std::to_string(s.alpha) + "," + std::to_string(s.epsilon) + ")");

    int n = spec["dimension"].get<int>();
    if (n < 2 || n % 2 != 0)
        throw StructureError("dimension must be even and >= 2");
    s.chart.n = n;

    const auto& dom = spec["domain"];
    if (!dom.is_array() || static_cast<int>(dom.size()) != n)
        throw StructureError("domain must list one [lo,hi] interval per coordinate");
    for (const auto& iv : dom) {
        if (!iv.is_array() || iv.size() != 2)
            throw StructureError("domain interval must be [lo,hi]");
        double lo = iv[0].get<double>(), hi = iv[1].get<double>();
        if (lo > hi) throw StructureError("empty domain interval");
        s.chart.domain.emplace_back(lo, hi);
    }

    s.g = parse_matrix(spec["metric"], n, "metric");
    s.J = parse_matrix(spec["J"], n, "J");
    s.g_src = matrix_sources(spec["metric"], n);
    s.J_src = matrix_sources(spec["J"], n);

    s.dg.assign(n, std::vector<std::vector<ScalarExpr>>(n, std::vector<ScalarExpr>(n)));
    s.dJ.assign(n, std::vector<std::vector<ScalarExpr>>(n, std::vector<ScalarExpr>(n)));
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                s.dg[k][i][j] = s.g[i][j].diff(k);
                s.dJ[k][i][j] = s.J[i][j].diff(k);
            }
    return s;
}

GeometryStructure load_structure_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw StructureError("cannot open structure file '" + path + "'");
    nlohmann::json spec;
    try {
        in >> spec;
    } catch (const nlohmann::json::exception& e) {
        throw StructureError("invalid JSON in '" + path + "': " + e.what());
    }
    return load_structure(spec);
}

nlohmann::ordered_json structure_to_json(const GeometryStructure& s) {
    nlohmann::ordered_json out;
    out["name"] = s.name;
    out["geometry"] = s.geometry;
    out["alpha"] = s.alpha;
    out["epsilon"] = s.epsilon;
    out["dimension"] = s.chart.n;
    auto dom = nlohmann::ordered_json::array();
    for (const auto& [lo, hi] : s.chart.domain) dom.push_back({lo, hi});
    out["domain"] = dom;
    out["metric"] = s.g_src;
    out["J"] = s.J_src;
    return out;
}

ValidationReport validate_structure(const GeometryStructure& s,
                                    std::span<const std::vector<double>> points,
                                    double tol) {
    int n = s.chart.n;
    double sym = 0, nondeg = 0, posdef = 0, jsq = 0, tr = 0, compat = 0;

    for (const auto& p : points) {
        Mat g(n, n), J(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                g(i, j) = s.g[i][j].eval(p);
                J(i, j) = s.J[i][j].eval(p);
            }
        sym = std::max(sym, max_abs(Mat(g - g.transpose())));
        double det = std::abs(g.determinant());
        if (det <= 1e-10) nondeg = std::max(nondeg, 1e-10 - det);
        if (s.epsilon == 1) {
            Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (g + g.transpose()));
            double mineig = es.eigenvalues().minCoeff();
            posdef = std::max(posdef, std::max(0.0, 1e-10 - mineig));
        }
        jsq = std::max(jsq, max_abs(Mat(J * J - s.alpha * Mat::Identity(n, n))));
        tr = std::max(tr, std::abs(J.trace()));
        compat = std::max(compat, max_abs(Mat(J.transpose() * g * J - s.epsilon * g)));
    }

    ValidationReport r;
    r.points_tested = static_cast<int>(points.size());
    auto push = [&](const std::string& name, double defect) {
        r.conditions.push_back({name, defect, tol, defect <= tol});
        r.pass = r.pass && defect <= tol;
    };
    push("metric_symmetry", sym);
    push("metric_nondegenerate", nondeg);
    if (s.epsilon == 1) push("metric_positive_definite", posdef);
    push("J_squared_alpha_id", jsq);
    push("trace_J_zero", tr);
    push("compatibility_JtgJ_eps_g", compat);
    return r;
}

PointFrame frame_at(const GeometryStructure& s, std::span<const double> p) {
    if (!s.chart.contains(p))
        throw StructureError("point outside chart domain of '" + s.name + "'");
    int n = s.chart.n;
    PointFrame f;
    f.p.assign(p.begin(), p.end());
    f.alpha = s.alpha;
    f.epsilon = s.epsilon;
    f.g = Mat(n, n);
    f.J = Mat(n, n);
    f.dg = Tensor3(n);
    f.dJ = Tensor3(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            f.g(i, j) = s.g[i][j].eval(p);
            f.J(i, j) = s.J[i][j].eval(p);
            for (int k = 0; k < n; ++k) {
                f.dg(k, i, j) = s.dg[k][i][j].eval(p);
                f.dJ(k, i, j) = s.dJ[k][i][j].eval(p);
            }
        }
    f.g_inv = invert_metric(f.g);
    return f;
}

KahlerType classify_kahler_type(const GeometryStructure& s,
                                std::span<const std::vector<double>> points,
                                double tol) {
    for (const auto& p : points) {
        PointFrame f = frame_at(s, p);
        ConnectionCoeffs lc = levi_civita(f);
        if (max_abs(nabla_j(lc.gamma, f)) > tol) return KahlerType::non_kahler_type;
    }
    return KahlerType::kahler_type;
}

std::vector<std::vector<double>> sample_points(const Chart& chart, int count,
                                               std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<std::vector<double>> pts;
    pts.reserve(static_cast<std::size_t>(count));
    for (int c = 0; c < count; ++c) {
        std::vector<double> p(chart.n);
        for (int i = 0; i < chart.n; ++i) {
            // 53-bit mantissa draw; identical across standard libraries
            double u = static_cast<double>(rng() >> 11) * 0x1p-53;
            p[i] = chart.domain[i].first +
                   u * (chart.domain[i].second - chart.domain[i].first);
        }
        pts.push_back(std::move(p));
    }
    return pts;
}

} // namespace connforge
