#include "connforge/catalog.hpp"

#include <map>
#include <mutex>

#include "connforge/connections.hpp"

namespace connforge {

namespace {

using Grid = std::vector<std::vector<std::string>>;

nlohmann::json entry_json(const std::string& name, const std::string& geometry,
                          int alpha, int epsilon, const Grid& metric, const Grid& J) {
    nlohmann::json spec;
    spec["name"] = name;
    spec["geometry"] = geometry;
    spec["alpha"] = alpha;
    spec["epsilon"] = epsilon;
    spec["dimension"] = 4;
    spec["domain"] = {{-1, 1}, {-1, 1}, {-1, 1}, {-1, 1}};
    spec["metric"] = metric;
    spec["J"] = J;
    return spec;
}

Grid diag4(const std::string& a, const std::string& b, const std::string& c,
           const std::string& d) {
    return {{a, "0", "0", "0"},
            {"0", b, "0", "0"},
            {"0", "0", c, "0"},
            {"0", "0", "0", d}};
}

// Je1=e2, Je2=-e1, Je3=e4, Je4=-e3 (standard almost complex structure)
const Grid kComplexJ = {{"0", "-1", "0", "0"},
                        {"1", "0", "0", "0"},
                        {"0", "0", "0", "-1"},
                        {"0", "0", "1", "0"}};

// Je1=e2, Je2=e1, Je3=e4, Je4=e3 (para-complex structure)
const Grid kParaJ = {{"0", "1", "0", "0"},
                     {"1", "0", "0", "0"},
                     {"0", "0", "0", "1"},
                     {"0", "0", "1", "0"}};

const Grid kProductJ = diag4("1", "1", "-1", "-1");

struct EntrySpec {
    nlohmann::json json;
    std::string doc;
    bool kahler_type, chern_exists, skew_exists;
};

std::vector<EntrySpec> entry_specs() {
    std::vector<EntrySpec> out;
    out.push_back({entry_json("flat_hermitian", "hermitian", -1, 1,
                              diag4("1", "1", "1", "1"), kComplexJ),
                   "Flat Hermitian structure on R^4: Euclidean metric, standard "
                   "complex structure. Kahler type; all canonical connections "
                   "coincide with the (vanishing) Levi-Civita connection.",
                   true, true, true});
    out.push_back({entry_json("flat_norden", "norden", -1, -1,
                              diag4("1", "-1", "1", "-1"), kComplexJ),
                   "Flat Norden structure: neutral metric, standard complex "
                   "structure, g(JX,JY) = -g(X,Y). Kahler type; alpha*eps = 1 so "
                   "no Chern connection.",
                   true, false, true});
    out.push_back({entry_json("flat_product", "product", 1, 1,
                              diag4("1", "1", "1", "1"), kProductJ),
                   "Flat product Riemannian structure: Euclidean metric, "
                   "J = diag(1,1,-1,-1). Kahler type; alpha*eps = 1 so no Chern "
                   "connection.",
                   true, false, true});
    out.push_back({entry_json("flat_para", "para-hermitian", 1, -1,
                              diag4("1", "-1", "1", "-1"), kParaJ),
                   "Flat para-Hermitian structure: neutral metric, para-complex "
                   "J. Kahler type; alpha*eps = -1 so the Chern connection "
                   "exists (and vanishes).",
                   true, true, true});
    out.push_back({entry_json("hermitian_conformal_4d", "hermitian", -1, 1,
                              diag4("exp(2*x1)", "exp(2*x1)", "exp(2*x1)", "exp(2*x1)"),
                              kComplexJ),
                   "Conformally flat Hermitian structure g = e^{2 x1} Id with the "
                   "standard complex structure. Non-Kahler type; both the Chern "
                   "connection and the skew-torsion connection exist and differ "
                   "from Levi-Civita.",
                   false, true, true});
    out.push_back({entry_json("norden_4d", "norden", -1, -1,
                              diag4("exp(2*x1)", "-exp(2*x1)", "exp(2*x1)", "-exp(2*x1)"),
                              kComplexJ),
                   "Conformally scaled Norden structure g = e^{2 x1} diag(1,-1,1,-1). "
                   "Non-Kahler type; alpha*eps = 1 so the Chern system is "
                   "degenerate; the skew-torsion system is inconsistent here.",
                   false, false, false});
    out.push_back({entry_json("product_riemannian_4d", "product", 1, 1,
                              diag4("exp(2*x3)", "exp(2*x3)", "1", "1"), kProductJ),
                   "Product Riemannian structure with a warped 2-plane, "
                   "g = diag(e^{2 x3}, e^{2 x3}, 1, 1), J = diag(1,1,-1,-1). "
                   "Non-Kahler type; no Chern connection (alpha*eps = 1); the "
                   "skew-torsion system is inconsistent here.",
                   false, false, false});
    out.push_back({entry_json("para_hermitian_4d", "para-hermitian", 1, -1,
                              diag4("exp(2*x1)", "-exp(2*x1)", "exp(2*x1)", "-exp(2*x1)"),
                              kParaJ),
                   "Conformally scaled para-Hermitian structure with the "
                   "para-complex J. Non-Kahler type; alpha*eps = -1 so the Chern "
                   "connection exists; the skew-torsion connection also exists.",
                   false, true, true});
    return out;
}

void self_check(CatalogEntry& e) {
    auto points = sample_points(e.structure.chart, 5, 20240ULL);
    ValidationReport vr = validate_structure(e.structure, points, 1e-9);
    if (!vr.pass)
        throw StructureError("catalog entry '" + e.structure.name +
                             "' fails structure validation");

    bool kahler = classify_kahler_type(e.structure, points, 1e-9) ==
                  KahlerType::kahler_type;
    if (kahler != e.kahler_type)
        throw StructureError("catalog entry '" + e.structure.name +
                             "' has wrong kahler_type flag");
    for (const auto& p : points) {
        PointFrame f = frame_at(e.structure, p);
        bool chern = solve_chern(f).status == SolveStatus::unique;
        bool skew = solve_skew(f).status == SolveStatus::unique;
        if (chern != e.chern_exists)
            throw StructureError("catalog entry '" + e.structure.name +
                                 "' has wrong chern_exists flag");
        if (skew != e.skew_exists)
            throw StructureError("catalog entry '" + e.structure.name +
                                 "' has wrong skew_exists flag");
    }
}

const std::map<std::string, CatalogEntry>& entries() {
    static std::map<std::string, CatalogEntry> cache;
    static std::once_flag once;
    std::call_once(once, [] {
        for (const EntrySpec& spec : entry_specs()) {
            CatalogEntry e;
            e.structure = load_structure(spec.json);
            e.doc = spec.doc;
            e.kahler_type = spec.kahler_type;
            e.chern_exists = spec.chern_exists;
            e.skew_exists = spec.skew_exists;
            self_check(e);
            cache.emplace(e.structure.name, std::move(e));
        }
    });
    return cache;
}

} // namespace

std::vector<std::string> list_entries() {
    std::vector<std::string> names;
    for (const auto& [name, e] : entries()) names.push_back(name);
    return names;
}

const CatalogEntry& get_entry(const std::string& name) {
    const auto& all = entries();
    auto it = all.find(name);
    if (it == all.end()) throw UnknownEntryError(name);
    return it->second;
}

} // namespace connforge
