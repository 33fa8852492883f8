#include "connforge/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ctime>

#include "connforge/connections.hpp"

namespace connforge {

namespace {

constexpr int kSyntheticPerPoint = 5;

struct Ctx {
    const GeometryStructure& s;
    std::vector<std::vector<double>> points;
    std::vector<PointFrame> frames;
    bool kahler = false;
    bool chern_ok = false;  // status unique at every sampled point
    bool skew_ok = false;
    double tol;
};

void add(VerifyReport& rep, int id, const std::string& name, int pts,
         double defect, double tol) {
    bool pass = defect <= tol;
    rep.records.push_back({id, name, pts, defect, tol, pass});
    rep.pass = rep.pass && pass;
}

void run_invariants(Ctx& c, VerifyReport& rep) {
    const double tol = c.tol;
    int npts = static_cast<int>(c.frames.size());

    double inv_defect = 0;                       // 1
    double fixed_fwd = 0, fixed_sep = 0;         // 2
    double proj_adapted = 0, proj_idem = 0;      // 3
    double proj_lc = 0;                          // 4
    double proj_s = 0;                           // 5
    double metric_preserved = 0, s_antisym = 0;  // 6
    double chern_cert = 0;                       // 7
    bool chern_status_matches = true;
    double corollary = 0;                        // 8
    double line_defect = 0;                      // 9
    double kahler_deg = 0;                       // 10

    std::uint64_t seq = rep.seed * 1000003ULL + 17ULL;
    for (int pi = 0; pi < npts; ++pi) {
        const PointFrame& f = c.frames[pi];
        ConnectionCoeffs lc = levi_civita(f);
        ConnectionCoeffs fc = first_canonical(f);

        for (int si = 0; si < kSyntheticPerPoint; ++si) {
            ConnectionCoeffs syn = synthetic_connection(f, ++seq);

            // 1: involutivity
            ConnectionCoeffs jj = j_star(j_star(syn, f), f);
            inv_defect = std::max(inv_defect, max_abs(jj.gamma - syn.gamma));

            // 2: adapted connections are fixed points...
            ConnectionCoeffs adapted = project(syn, f);
            fixed_fwd = std::max(
                fixed_fwd, max_abs(j_star(adapted, f).gamma - adapted.gamma));
            // ...and visibly non-adapted ones are visibly moved
            double nj = max_abs(nabla_j(syn.gamma, f));
            if (nj >= 1e-3) {
                double sep = max_abs(j_star(syn, f).gamma - syn.gamma);
                fixed_sep = std::max(fixed_sep, std::max(0.0, 1e-6 - sep));
            }

            // 3: projection lands in C(M,J) and is idempotent
            proj_adapted = std::max(proj_adapted, max_abs(nabla_j(adapted.gamma, f)));
            proj_idem = std::max(
                proj_idem, max_abs(project(adapted, f).gamma - adapted.gamma));

            // 5: project(Gamma) = Gamma + S_Gamma
            proj_s = std::max(proj_s, max_abs(adapted.gamma -
                                              (syn.gamma + s_tensor(syn.gamma, f))));

            // 6: projection preserves metricity
            ConnectionCoeffs met = synthetic_metric_connection(f, ++seq);
            metric_preserved = std::max(
                metric_preserved, nabla_g_defect(project(met, f).gamma, f));
            Tensor3 low = lower_first(s_tensor(met.gamma, f), f.g);
            double anti = 0;
            int n = low.dim();
            for (int k = 0; k < n; ++k)
                for (int i = 0; i < n; ++i)
                    for (int j = 0; j < n; ++j)
                        anti = std::max(anti, std::abs(low(k, i, j) + low(j, i, k)));
            s_antisym = std::max(s_antisym, anti);
        }

        // 4: pi(levi-civita) = first canonical
        proj_lc = std::max(proj_lc, max_abs(project(lc, f).gamma - fc.gamma));

        // 7: Chern certificate / impossibility
        SolveReport chern = solve_chern(f, tol);
        if (f.alpha * f.epsilon == -1) {
            chern_status_matches =
                chern_status_matches && chern.status == SolveStatus::unique;
            const Tensor3& gc = chern.connection->gamma;
            chern_cert = std::max({chern_cert, chern.residual,
                                   nabla_g_defect(gc, f), max_abs(nabla_j(gc, f))});
            Tensor3 t = torsion(gc);
            int n = t.dim();
            double tc = 0;
            for (int k = 0; k < n; ++k)
                for (int i = 0; i < n; ++i)
                    for (int j = 0; j < n; ++j) {
                        double lhs = 0;
                        for (int l = 0; l < n; ++l)
                            for (int m = 0; m < n; ++m)
                                lhs += f.J(l, i) * f.J(m, j) * t(k, l, m);
                        tc = std::max(tc, std::abs(lhs - f.alpha * t(k, i, j)));
                    }
            chern_cert = std::max(chern_cert, tc);
        } else {
            chern_status_matches =
                chern_status_matches && chern.status != SolveStatus::unique;
        }

        SolveReport skew = solve_skew(f, tol);

        if (pi == 0) {
            rep.chern_status = solve_status_name(chern.status);
            rep.skew_status = solve_status_name(skew.status);
        }

        // 8: corollary suite, where both nabla^c and nabla^sk exist
        if (c.chern_ok && c.skew_ok) {
            const Tensor3& H = *skew.torsion_form;
            ConnectionCoeffs gp = nabla_plus_minus(f, H, +1);
            ConnectionCoeffs gm = nabla_plus_minus(f, H, -1);
            const Tensor3& gc = chern.connection->gamma;
            corollary = std::max(
                {corollary, max_abs(project(gp, f).gamma - gp.gamma),
                 max_abs(project(gm, f).gamma - gc),
                 max_abs(0.5 * gp.gamma + 0.5 * gm.gamma - lc.gamma),
                 max_abs(bismut(fc, *chern.connection).gamma - gp.gamma)});
        }

        // 9: the canonical line lies in C(M,J,g)
        if (c.chern_ok) {
            for (double t : {-1.0, 0.0, 0.5, 1.0, 3.0}) {
                ConnectionCoeffs line = canonical_line(fc, *chern.connection, t);
                line_defect = std::max({line_defect, nabla_g_defect(line.gamma, f),
                                        max_abs(nabla_j(line.gamma, f))});
            }
        }

        // 10: Kahler-type degeneracy
        if (c.kahler) {
            kahler_deg = std::max(kahler_deg, max_abs(fc.gamma - lc.gamma));
            kahler_deg = std::max(kahler_deg, max_abs(nabla_j(lc.gamma, f)));
            if (f.alpha * f.epsilon == -1)
                kahler_deg =
                    std::max(kahler_deg, max_abs(chern.connection->gamma - lc.gamma));
        }
    }

    int nsyn = npts * kSyntheticPerPoint;
    add(rep, 1, "involution", nsyn, inv_defect, 1e-10);
    add(rep, 2, "fixed_point_forward", nsyn, fixed_fwd, tol);
    add(rep, 2, "fixed_point_separation", nsyn, fixed_sep, 0.0);
    add(rep, 3, "projection_adapted", nsyn, proj_adapted, tol);
    add(rep, 3, "projection_idempotent", nsyn, proj_idem, 1e-10);
    add(rep, 4, "projection_of_levi_civita", npts, proj_lc, 1e-10);
    add(rep, 5, "projection_equals_gamma_plus_s", nsyn, proj_s, 1e-10);
    add(rep, 6, "projection_preserves_metricity", nsyn, metric_preserved, tol);
    add(rep, 6, "lowered_s_antisymmetric", nsyn, s_antisym, 1e-10);
    if (c.s.alpha * c.s.epsilon == -1)
        add(rep, 7, "chern_certificate", npts, chern_cert, tol);
    add(rep, 7, "chern_status_matches_alpha_epsilon", npts,
        chern_status_matches ? 0.0 : 1.0, 0.0);
    if (c.chern_ok && c.skew_ok)
        add(rep, 8, "corollary_suite", npts, corollary, tol);
    if (c.chern_ok)
        add(rep, 9, "canonical_line_adapted", npts, line_defect, tol);
    if (c.kahler)
        add(rep, 10, "kahler_type_degeneracy", npts, kahler_deg, 0.0);
}

} // namespace

VerifyReport verify_structure(const GeometryStructure& s, const VerifyOptions& opt) {
    VerifyReport rep;
    rep.structure = s.name;
    rep.seed = opt.seed;
    rep.tol = opt.tol;
    rep.timestamp = iso8601_utc_now();

    Ctx c{s, sample_points(s.chart, opt.points, opt.seed), {}, false, false, false,
          opt.tol};
    for (const auto& p : c.points) c.frames.push_back(frame_at(s, p));

    ValidationReport vr = validate_structure(s, c.points, opt.tol);
    double vdefect = 0;
    for (const auto& cond : vr.conditions) vdefect = std::max(vdefect, cond.defect);
    add(rep, 0, "structure_validation", vr.points_tested, vdefect, opt.tol);

    c.kahler = classify_kahler_type(s, c.points, opt.tol) == KahlerType::kahler_type;
    rep.kahler_type = c.kahler;
    c.chern_ok = true;
    c.skew_ok = true;
    for (const PointFrame& f : c.frames) {
        c.chern_ok = c.chern_ok && solve_chern(f, opt.tol).status == SolveStatus::unique;
        c.skew_ok = c.skew_ok && solve_skew(f, opt.tol).status == SolveStatus::unique;
    }

    run_invariants(c, rep);
    return rep;
}

nlohmann::ordered_json report_to_json(const VerifyReport& r) {
    nlohmann::ordered_json out;
    out["structure"] = r.structure;
    out["seed"] = r.seed;
    out["tol"] = r.tol;
    out["kahler_type"] = r.kahler_type;
    out["chern_status"] = r.chern_status;
    out["skew_status"] = r.skew_status;
    auto records = nlohmann::ordered_json::array();
    for (const auto& rec : r.records) {
        nlohmann::ordered_json jr;
        jr["id"] = rec.id;
        jr["name"] = rec.name;
        jr["points_tested"] = rec.points_tested;
        jr["max_defect"] = rec.defect;
        jr["tol"] = rec.tol;
        jr["pass"] = rec.pass;
        records.push_back(jr);
    }
    out["records"] = records;
    out["pass"] = r.pass;
    out["timestamp"] = r.timestamp;
    return out;
}

namespace {

void dump_value(const nlohmann::ordered_json& j, std::string& out, int indent,
                int depth) {
    auto pad = [&](int d) { out.append(static_cast<std::size_t>(d) * indent, ' '); };
    switch (j.type()) {
    case nlohmann::json::value_t::object: {
        if (j.empty()) { out += "{}"; return; }
        out += "{\n";
        std::size_t i = 0;
        for (auto it = j.begin(); it != j.end(); ++it, ++i) {
            pad(depth + 1);
            out += nlohmann::json(it.key()).dump();
            out += ": ";
            dump_value(it.value(), out, indent, depth + 1);
            if (i + 1 < j.size()) out += ",";
            out += "\n";
        }
        pad(depth);
        out += "}";
        return;
    }
    case nlohmann::json::value_t::array: {
        if (j.empty()) { out += "[]"; return; }
        out += "[\n";
        for (std::size_t i = 0; i < j.size(); ++i) {
            pad(depth + 1);
            dump_value(j[i], out, indent, depth + 1);
            if (i + 1 < j.size()) out += ",";
            out += "\n";
        }
        pad(depth);
        out += "]";
        return;
    }
    case nlohmann::json::value_t::number_float: {
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.17g", j.get<double>());
        out += buf;
        return;
    }
    default:
        out += j.dump();
        return;
    }
}

} // namespace

std::string dump_json_17(const nlohmann::ordered_json& j, int indent) {
    std::string out;
    dump_value(j, out, indent, 0);
    return out;
}

std::string iso8601_utc_now() {
    std::time_t t = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

} // namespace connforge
