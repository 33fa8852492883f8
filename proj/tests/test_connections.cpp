#include <doctest.h>

#include <cmath>

#include "connforge/catalog.hpp"
#include "connforge/connections.hpp"

using namespace connforge;

namespace {

// Hand-built frame, bypassing the symbolic layer.
PointFrame raw_frame(Mat g, Tensor3 dg, Mat J, Tensor3 dJ, int alpha, int epsilon,
                     std::vector<double> p) {
    PointFrame f;
    f.p = std::move(p);
    f.g = std::move(g);
    f.g_inv = invert_metric(f.g);
    f.dg = std::move(dg);
    f.J = std::move(J);
    f.dJ = std::move(dJ);
    f.alpha = alpha;
    f.epsilon = epsilon;
    return f;
}

// n=2 frame with g = diag(1, x1^2); the polar-coordinate metric.
PointFrame polar_frame(double x1) {
    Mat g = Eigen::Vector2d(1.0, x1 * x1).asDiagonal();
    Tensor3 dg(2);
    dg(0, 1, 1) = 2.0 * x1;
    Mat J(2, 2);
    J << 0, -1, 1, 0;
    return raw_frame(g, dg, J, Tensor3(2), -1, 1, {x1, 0.0});
}

PointFrame catalog_frame(const std::string& name, int point_index, int seed = 0) {
    const GeometryStructure& s = get_entry(name).structure;
    auto pts = sample_points(s.chart, point_index + 1, static_cast<std::uint64_t>(seed));
    return frame_at(s, pts.back());
}

double torsion_condition_defect(const Tensor3& gamma, const PointFrame& f) {
    Tensor3 t = torsion(gamma);
    int n = t.dim();
    double d = 0;
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                double lhs = 0;
                for (int l = 0; l < n; ++l)
                    for (int m = 0; m < n; ++m)
                        lhs += f.J(l, i) * f.J(m, j) * t(k, l, m);
                d = std::max(d, std::abs(lhs - f.alpha * t(k, i, j)));
            }
    return d;
}

} // namespace

TEST_CASE("levi-civita: flat metric gives zero coefficients") {
    PointFrame f = catalog_frame("flat_hermitian", 4);
    CHECK(max_abs(levi_civita(f).gamma) == 0.0);
}

TEST_CASE("levi-civita: polar-like hand computation") {
    PointFrame f = polar_frame(2.0);
    ConnectionCoeffs lc = levi_civita(f);
    CHECK(std::abs(lc.gamma(0, 1, 1) - (-2.0)) <= 1e-12);
    CHECK(std::abs(lc.gamma(1, 0, 1) - 0.5) <= 1e-12);
    CHECK(std::abs(lc.gamma(1, 1, 0) - 0.5) <= 1e-12);
    // all other components vanish
    double rest = 0;
    for (int k = 0; k < 2; ++k)
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
                if (!((k == 0 && i == 1 && j == 1) || (k == 1 && i + j == 1)))
                    rest = std::max(rest, std::abs(lc.gamma(k, i, j)));
    CHECK(rest <= 1e-12);
    CHECK(nabla_g_defect(lc.gamma, f) <= 1e-10);
    CHECK(max_abs(torsion(lc.gamma)) == 0.0);
}

TEST_CASE("levi-civita: conformal formula at the origin") {
    const GeometryStructure& s = get_entry("hermitian_conformal_4d").structure;
    std::vector<double> origin{0, 0, 0, 0};
    PointFrame f = frame_at(s, origin);
    ConnectionCoeffs lc = levi_civita(f);
    for (int k = 0; k < 4; ++k)
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) {
                double want = (i == 0 && k == j ? 1.0 : 0.0) +
                              (j == 0 && k == i ? 1.0 : 0.0) -
                              (k == 0 && i == j ? 1.0 : 0.0);
                CHECK(std::abs(lc.gamma(k, i, j) - want) <= 1e-12);
            }
    CHECK(nabla_g_defect(lc.gamma, f) <= 1e-10);
}

TEST_CASE("torsion") {
    Tensor3 sym(3);
    sym(0, 1, 2) = 2.0;
    sym(0, 2, 1) = 2.0;
    CHECK(max_abs(torsion(sym)) == 0.0);

    Tensor3 g(3);
    g(0, 0, 1) = 1.0;
    Tensor3 t = torsion(g);
    CHECK(t(0, 0, 1) == 1.0);
    CHECK(t(0, 1, 0) == -1.0);
}

TEST_CASE("nabla_j at levi-civita detects non-kahler structures") {
    PointFrame flat = catalog_frame("flat_hermitian", 0);
    CHECK(max_abs(nabla_j(levi_civita(flat).gamma, flat)) == 0.0);

    PointFrame conf = catalog_frame("hermitian_conformal_4d", 3);
    CHECK(max_abs(nabla_j(levi_civita(conf).gamma, conf)) > 1e-3);
}

TEST_CASE("nabla_j agrees with an independent contraction order") {
    PointFrame f = catalog_frame("hermitian_conformal_4d", 2);
    Tensor3 gamma = levi_civita(f).gamma;
    Tensor3 nj = nabla_j(gamma, f);
    // alternative route: differentiate J g^{-1}-free, contracting J first
    for (int i = 0; i < 4; ++i)
        for (int k = 0; k < 4; ++k)
            for (int j = 0; j < 4; ++j) {
                double gj = 0, jg = 0;
                for (int l = 0; l < 4; ++l) {
                    gj += gamma(k, i, l) * f.J(l, j);
                    jg += f.J(k, l) * gamma(l, i, j);
                }
                double alt = f.dJ(i, k, j) + gj - jg;
                CHECK(std::abs(nj(k, i, j) - alt) <= 1e-14);
            }
}

TEST_CASE("j_star involution and fixed points") {
    PointFrame f = catalog_frame("norden_4d", 1);
    ConnectionCoeffs syn = synthetic_connection(f, 99);
    ConnectionCoeffs twice = j_star(j_star(syn, f), f);
    CHECK(max_abs(twice.gamma - syn.gamma) <= 1e-10);

    ConnectionCoeffs adapted = project(syn, f);
    CHECK(max_abs(nabla_j(adapted.gamma, f)) <= 1e-9);
    CHECK(max_abs(j_star(adapted, f).gamma - adapted.gamma) <= 1e-9);

    // visibly non-adapted connections move visibly
    CHECK(max_abs(nabla_j(syn.gamma, f)) > 1e-3);
    CHECK(max_abs(j_star(syn, f).gamma - syn.gamma) > 1e-6);

    PointFrame flat = catalog_frame("flat_hermitian", 0);
    ConnectionCoeffs zero{flat.p, Tensor3(4), Provenance::synthetic};
    CHECK(max_abs(j_star(zero, flat).gamma) == 0.0);
}

TEST_CASE("projection is idempotent and equals Gamma + S") {
    for (const char* name : {"hermitian_conformal_4d", "product_riemannian_4d"}) {
        PointFrame f = catalog_frame(name, 2);
        ConnectionCoeffs syn = synthetic_connection(f, 5);
        ConnectionCoeffs once = project(syn, f);
        CHECK(max_abs(project(once, f).gamma - once.gamma) <= 1e-10);
        CHECK(max_abs(once.gamma - (syn.gamma + s_tensor(syn.gamma, f))) <= 1e-10);
    }
}

TEST_CASE("first canonical connection") {
    PointFrame flat = catalog_frame("flat_norden", 0);
    CHECK(max_abs(first_canonical(flat).gamma - levi_civita(flat).gamma) == 0.0);

    PointFrame f = catalog_frame("hermitian_conformal_4d", 7);
    ConnectionCoeffs fc = first_canonical(f);
    ConnectionCoeffs lc = levi_civita(f);
    CHECK(max_abs(fc.gamma - lc.gamma) > 1e-3);
    CHECK(nabla_g_defect(fc.gamma, f) <= 1e-10);
    CHECK(max_abs(nabla_j(fc.gamma, f)) <= 1e-10);
    CHECK(max_abs(project(lc, f).gamma - fc.gamma) <= 1e-12);
}

TEST_CASE("s_tensor of a metric connection has antisymmetric lowering") {
    PointFrame f = catalog_frame("para_hermitian_4d", 6);
    ConnectionCoeffs met = synthetic_metric_connection(f, 13);
    Tensor3 low = lower_first(s_tensor(met.gamma, f), f.g);
    double anti = 0;
    for (int k = 0; k < 4; ++k)
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j)
                anti = std::max(anti, std::abs(low(k, i, j) + low(j, i, k)));
    CHECK(anti <= 1e-10);
}

TEST_CASE("chern solver: unique on alpha*eps = -1") {
    PointFrame flat = catalog_frame("flat_hermitian", 0);
    SolveReport fr = solve_chern(flat);
    CHECK(fr.status == SolveStatus::unique);
    CHECK(max_abs(fr.connection->gamma) == 0.0);

    for (const char* name : {"hermitian_conformal_4d", "para_hermitian_4d"}) {
        for (int pi = 0; pi < 5; ++pi) {
            PointFrame f = catalog_frame(name, pi);
            SolveReport r = solve_chern(f);
            REQUIRE(r.status == SolveStatus::unique);
            CHECK(r.residual <= 1e-9);
            CHECK(r.kernel_dim == 0);
            const Tensor3& gc = r.connection->gamma;
            CHECK(nabla_g_defect(gc, f) <= 1e-9);
            CHECK(max_abs(nabla_j(gc, f)) <= 1e-9);
            CHECK(torsion_condition_defect(gc, f) <= 1e-9);
        }
    }
}

TEST_CASE("chern solver: not unique on alpha*eps = +1") {
    for (const char* name : {"norden_4d", "product_riemannian_4d", "flat_product"}) {
        PointFrame f = catalog_frame(name, 2);
        SolveReport r = solve_chern(f);
        CHECK(r.status != SolveStatus::unique);
        CHECK(r.kernel_dim > 0);
    }
}

TEST_CASE("skew solver") {
    PointFrame flat = catalog_frame("flat_para", 0);
    SolveReport fr = solve_skew(flat);
    CHECK(fr.status == SolveStatus::unique);
    CHECK(max_abs(*fr.torsion_form) == 0.0);

    PointFrame f = catalog_frame("hermitian_conformal_4d", 3);
    SolveReport r = solve_skew(f);
    REQUIRE(r.status == SolveStatus::unique);
    CHECK(max_abs(*r.torsion_form) > 1e-3);
    CHECK(total_antisymmetry_defect(*r.torsion_form) <= 1e-10);
    const Tensor3& gp = r.connection->gamma;
    CHECK(nabla_g_defect(gp, f) <= 1e-9);
    CHECK(max_abs(nabla_j(gp, f)) <= 1e-9);

    // inconsistent system: perturb dJ away from any adapted geometry
    PointFrame broken = f;
    broken.dJ(0, 0, 0) += 0.3;
    broken.dJ(1, 2, 3) -= 0.2;
    SolveReport br = solve_skew(broken);
    CHECK(br.status == SolveStatus::none);
    CHECK(br.residual > 1e-6);
}

TEST_CASE("skew solver: inconsistent on non-G1-like catalog entries") {
    for (const char* name : {"norden_4d", "product_riemannian_4d"}) {
        PointFrame f = catalog_frame(name, 1);
        SolveReport r = solve_skew(f);
        CHECK(r.status == SolveStatus::none);
        CHECK(r.residual > 1e-6);
    }
}

TEST_CASE("nabla plus/minus") {
    PointFrame f = catalog_frame("hermitian_conformal_4d", 5);
    ConnectionCoeffs lc = levi_civita(f);

    Tensor3 zero(4);
    CHECK(max_abs(nabla_plus_minus(f, zero, +1).gamma - lc.gamma) == 0.0);

    SolveReport r = solve_skew(f);
    REQUIRE(r.status == SolveStatus::unique);
    ConnectionCoeffs gp = nabla_plus_minus(f, *r.torsion_form, +1);
    ConnectionCoeffs gm = nabla_plus_minus(f, *r.torsion_form, -1);
    CHECK(max_abs(0.5 * gp.gamma + 0.5 * gm.gamma - lc.gamma) <= 1e-14);
    CHECK(nabla_g_defect(gp.gamma, f) <= 1e-9);
    CHECK(nabla_g_defect(gm.gamma, f) <= 1e-9);
    CHECK(max_abs(nabla_j(gp.gamma, f)) <= 1e-9);

    // lowered torsion of nabla^+ reconstructs H
    Tensor3 lowered = lower_first(torsion(gp.gamma), f.g);
    CHECK(max_abs(lowered - *r.torsion_form) <= 1e-12);
}

TEST_CASE("affine combinations") {
    PointFrame f = catalog_frame("norden_4d", 4);
    ConnectionCoeffs a = synthetic_connection(f, 1);
    ConnectionCoeffs b = synthetic_connection(f, 2);

    CHECK(max_abs(affine_combine({{1.0, a}}).gamma - a.gamma) == 0.0);
    CHECK_THROWS_AS(affine_combine({{0.4, a}, {0.4, b}}), std::invalid_argument);

    // J* preserves barycentric combinations
    double l1 = 0.75, l2 = 0.25;
    ConnectionCoeffs mix = affine_combine({{l1, a}, {l2, b}});
    Tensor3 lhs = j_star(mix, f).gamma;
    Tensor3 rhs = l1 * j_star(a, f).gamma + l2 * j_star(b, f).gamma;
    CHECK(max_abs(lhs - rhs) <= 1e-12);
}

TEST_CASE("canonical line and bismut") {
    PointFrame flat = catalog_frame("flat_hermitian", 0);
    SolveReport fc_chern = solve_chern(flat);
    ConnectionCoeffs f0 = first_canonical(flat);
    ConnectionCoeffs fb = bismut(f0, *fc_chern.connection);
    CHECK(max_abs(fb.gamma - levi_civita(flat).gamma) == 0.0);

    PointFrame f = catalog_frame("hermitian_conformal_4d", 8);
    ConnectionCoeffs g0 = first_canonical(f);
    SolveReport chern = solve_chern(f);
    REQUIRE(chern.status == SolveStatus::unique);

    CHECK(max_abs(canonical_line(g0, *chern.connection, 0.0).gamma - g0.gamma) == 0.0);
    CHECK(max_abs(canonical_line(g0, *chern.connection, 1.0).gamma -
                  chern.connection->gamma) == 0.0);

    ConnectionCoeffs gb = bismut(g0, *chern.connection);
    CHECK(max_abs(0.5 * gb.gamma + 0.5 * chern.connection->gamma - g0.gamma) <= 1e-12);

    SolveReport skew = solve_skew(f);
    REQUIRE(skew.status == SolveStatus::unique);
    ConnectionCoeffs gp = nabla_plus_minus(f, *skew.torsion_form, +1);
    CHECK(max_abs(gb.gamma - gp.gamma) <= 1e-9);

    // line points stay adapted and metric
    for (double t : {-1.0, 0.5, 3.0}) {
        ConnectionCoeffs line = canonical_line(g0, *chern.connection, t);
        CHECK(nabla_g_defect(line.gamma, f) <= 1e-9);
        CHECK(max_abs(nabla_j(line.gamma, f)) <= 1e-9);
    }
}

TEST_CASE("synthetic metric connections are metric, and stay so under projection") {
    for (const char* name : {"flat_norden", "hermitian_conformal_4d", "norden_4d"}) {
        PointFrame f = catalog_frame(name, 2);
        for (std::uint64_t seed : {1ULL, 2ULL, 3ULL}) {
            ConnectionCoeffs met = synthetic_metric_connection(f, seed);
            CHECK(nabla_g_defect(met.gamma, f) <= 1e-10);
            CHECK(nabla_g_defect(project(met, f).gamma, f) <= 1e-9);
        }
    }
}
