#include <CLI11.hpp>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>

#include "connforge/catalog.hpp"
#include "connforge/connections.hpp"
#include "connforge/verify.hpp"

using namespace connforge;
using nlohmann::ordered_json;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

double default_tol() {
    if (const char* env = std::getenv("CONNFORGE_TOL")) {
        char* end = nullptr;
        double v = std::strtod(env, &end);
        if (end != env && v > 0) return v;
    }
    return 1e-9;
}

GeometryStructure resolve_structure(const std::string& arg) {
    for (const std::string& name : list_entries())
        if (name == arg) return get_entry(arg).structure;
    return load_structure_file(arg);
}

std::vector<double> parse_point(const std::string& text, int n) {
    std::vector<double> p;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t next = text.find(',', pos);
        std::string tok = text.substr(pos, next == std::string::npos ? next : next - pos);
        p.push_back(std::stod(tok));
        if (next == std::string::npos) break;
        pos = next + 1;
    }
    if (static_cast<int>(p.size()) != n)
        throw StructureError("point has " + std::to_string(p.size()) +
                             " coordinates, expected " + std::to_string(n));
    return p;
}

ordered_json tensor_to_json(const Tensor3& t) {
    int n = t.dim();
    auto out = ordered_json::array();
    for (int k = 0; k < n; ++k) {
        auto mk = ordered_json::array();
        for (int i = 0; i < n; ++i) {
            auto row = ordered_json::array();
            for (int j = 0; j < n; ++j) row.push_back(t(k, i, j));
            mk.push_back(row);
        }
        out.push_back(mk);
    }
    return out;
}

int cmd_list() {
    auto out = ordered_json::array();
    for (const std::string& name : list_entries()) {
        const CatalogEntry& e = get_entry(name);
        ordered_json je;
        je["name"] = name;
        je["geometry"] = e.structure.geometry;
        je["alpha"] = e.structure.alpha;
        je["epsilon"] = e.structure.epsilon;
        je["kahler_type"] = e.kahler_type;
        je["chern_exists"] = e.chern_exists;
        je["skew_exists"] = e.skew_exists;
        je["doc"] = e.doc;
        out.push_back(je);
    }
    std::cout << dump_json_17(out) << "\n";
    return kExitPass;
}

int cmd_validate(const std::string& input, int points, std::uint64_t seed, double tol) {
    GeometryStructure s = resolve_structure(input);
    auto pts = sample_points(s.chart, points, seed);
    ValidationReport r = validate_structure(s, pts, tol);

    ordered_json out;
    out["structure"] = s.name;
    out["points_tested"] = r.points_tested;
    out["seed"] = seed;
    auto conds = ordered_json::array();
    for (const auto& c : r.conditions) {
        ordered_json jc;
        jc["condition"] = c.name;
        jc["max_defect"] = c.defect;
        jc["tol"] = c.tol;
        jc["pass"] = c.pass;
        conds.push_back(jc);
    }
    out["conditions"] = conds;
    out["pass"] = r.pass;
    std::cout << dump_json_17(out) << "\n";
    std::cerr << "validate " << s.name << ": " << (r.pass ? "PASS" : "FAIL") << "\n";
    return r.pass ? kExitPass : kExitFail;
}

int cmd_connection(const std::string& input, const std::string& kind,
                   const std::string& at, double tol) {
    GeometryStructure s = resolve_structure(input);
    std::vector<double> p = parse_point(at, s.chart.n);
    PointFrame f = frame_at(s, p);

    std::optional<ConnectionCoeffs> result;
    auto need_chern = [&]() -> ConnectionCoeffs {
        SolveReport rep = solve_chern(f, tol);
        if (rep.status != SolveStatus::unique)
            throw StructureError("chern unavailable: solver status " +
                                 solve_status_name(rep.status) + " (residual " +
                                 std::to_string(rep.residual) + ", kernel dim " +
                                 std::to_string(rep.kernel_dim) + ")");
        return *rep.connection;
    };
    auto need_skew = [&]() -> SolveReport {
        SolveReport rep = solve_skew(f, tol);
        if (rep.status != SolveStatus::unique)
            throw StructureError("skew-torsion connection unavailable: solver status " +
                                 solve_status_name(rep.status));
        return rep;
    };

    if (kind == "levi-civita") {
        result = levi_civita(f);
    } else if (kind == "first-canonical") {
        result = first_canonical(f);
    } else if (kind == "chern") {
        result = need_chern();
    } else if (kind == "plus") {
        result = nabla_plus_minus(f, *need_skew().torsion_form, +1);
    } else if (kind == "minus") {
        result = nabla_plus_minus(f, *need_skew().torsion_form, -1);
    } else if (kind == "bismut") {
        result = bismut(first_canonical(f), need_chern());
    } else if (kind.rfind("line:", 0) == 0) {
        double t = std::stod(kind.substr(5));
        result = canonical_line(first_canonical(f), need_chern(), t);
    } else {
        std::cerr << "unknown connection kind '" << kind << "'\n";
        return kExitUsage;
    }

    const Tensor3& gamma = result->gamma;
    Tensor3 t = torsion(gamma);
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

    ordered_json out;
    out["structure"] = s.name;
    out["kind"] = kind;
    out["provenance"] = provenance_name(result->provenance);
    out["point"] = p;
    out["gamma"] = tensor_to_json(gamma);
    ordered_json defects;
    defects["nabla_g"] = nabla_g_defect(gamma, f);
    defects["nabla_J"] = max_abs(nabla_j(gamma, f));
    defects["torsion_condition"] = tc;
    out["defects"] = defects;
    std::cout << dump_json_17(out) << "\n";
    return kExitPass;
}

int cmd_verify(const std::string& input, bool all, int points, std::uint64_t seed,
               double tol, const std::string& json_out) {
    std::vector<GeometryStructure> targets;
    if (all) {
        for (const std::string& name : list_entries())
            targets.push_back(get_entry(name).structure);
    } else {
        targets.push_back(resolve_structure(input));
    }

    VerifyOptions opt{points, seed, tol};
    auto reports = ordered_json::array();
    bool pass = true;
    for (const GeometryStructure& s : targets) {
        VerifyReport r = verify_structure(s, opt);
        pass = pass && r.pass;
        std::cerr << "verify " << s.name << ": " << (r.pass ? "PASS" : "FAIL") << "\n";
        reports.push_back(report_to_json(r));
    }

    std::string text = dump_json_17(reports) + "\n";
    if (!json_out.empty()) {
        std::ofstream out(json_out);
        if (!out) {
            std::cerr << "cannot write '" << json_out << "'\n";
            return kExitUsage;
        }
        out << text;
    } else {
        std::cout << text;
    }
    return pass ? kExitPass : kExitFail;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"adapted-connection calculator and verifier for "
                 "(J^2=+/-1)-metric structures"};
    app.require_subcommand(1);

    double tol = default_tol();
    int points = 50;
    std::uint64_t seed = 0;

    auto* list_cmd = app.add_subcommand("list", "list built-in catalog structures");

    std::string val_input;
    auto* val = app.add_subcommand("validate", "check the defining conditions of a structure");
    val->add_option("input", val_input, "catalog name or structure file")->required();
    val->add_option("--points", points, "sample point count");
    val->add_option("--seed", seed, "sampling seed");
    val->add_option("--tol", tol, "defect tolerance");

    std::string conn_input, conn_kind = "levi-civita", conn_at;
    auto* conn = app.add_subcommand("connection", "compute connection coefficients at a point");
    conn->add_option("input", conn_input, "catalog name or structure file")->required();
    conn->add_option("--kind", conn_kind,
                     "levi-civita|first-canonical|chern|plus|minus|bismut|line:<t>");
    conn->add_option("--at", conn_at, "point, comma-separated coordinates")->required();
    conn->add_option("--tol", tol, "solver tolerance");

    std::string ver_input, ver_json;
    bool ver_all = false;
    auto* ver = app.add_subcommand("verify", "run the full invariant suite");
    ver->add_option("input", ver_input, "catalog name or structure file");
    ver->add_flag("--all", ver_all, "verify every catalog entry");
    ver->add_option("--points", points, "sample point count");
    ver->add_option("--seed", seed, "sampling seed");
    ver->add_option("--tol", tol, "defect tolerance");
    ver->add_option("--json", ver_json, "write the JSON report to this file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    try {
        if (list_cmd->parsed()) return cmd_list();
        if (val->parsed()) return cmd_validate(val_input, points, seed, tol);
        if (conn->parsed()) return cmd_connection(conn_input, conn_kind, conn_at, tol);
        if (ver->parsed()) {
            if (!ver_all && ver_input.empty()) {
                std::cerr << "verify: give a structure or --all\n";
                return kExitUsage;
            }
            return cmd_verify(ver_input, ver_all, points, seed, tol, ver_json);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
