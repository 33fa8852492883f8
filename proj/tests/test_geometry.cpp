#include <doctest.h>

#include <cmath>
#include <nlohmann/json.hpp>

#include "connforge/catalog.hpp"
#include "connforge/geometry.hpp"

using namespace connforge;
using nlohmann::json;

namespace {

json flat_hermitian_spec() {
    return {
        {"name", "flat"},
        {"geometry", "hermitian"},
        {"alpha", -1},
        {"epsilon", 1},
        {"dimension", 4},
        {"domain", {{-1, 1}, {-1, 1}, {-1, 1}, {-1, 1}}},
        {"metric", {{"1", "0", "0", "0"},
                    {"0", "1", "0", "0"},
                    {"0", "0", "1", "0"},
                    {"0", "0", "0", "1"}}},
        {"J", {{"0", "-1", "0", "0"},
               {"1", "0", "0", "0"},
               {"0", "0", "0", "-1"},
               {"0", "0", "1", "0"}}},
    };
}

} // namespace

TEST_CASE("load and validate a flat hermitian structure") {
    GeometryStructure s = load_structure(flat_hermitian_spec());
    CHECK(s.chart.n == 4);
    auto pts = sample_points(s.chart, 20, 0);
    ValidationReport r = validate_structure(s, pts, 1e-9);
    CHECK(r.pass);
    for (const auto& c : r.conditions) CHECK(c.defect == 0.0);
}

TEST_CASE("definite metric cannot be epsilon = -1 compatible") {
    json spec = flat_hermitian_spec();
    spec["geometry"] = "norden";
    spec["epsilon"] = -1;  // g = Id cannot satisfy J^T g J = -g
    GeometryStructure s = load_structure(spec);
    auto pts = sample_points(s.chart, 10, 0);
    ValidationReport r = validate_structure(s, pts, 1e-9);
    CHECK_FALSE(r.pass);
    bool compat_failed = false;
    for (const auto& c : r.conditions)
        if (c.name == "compatibility_JtgJ_eps_g") compat_failed = !c.pass;
    CHECK(compat_failed);
}

TEST_CASE("schema violations throw") {
    json spec = flat_hermitian_spec();
    spec.erase("metric");
    CHECK_THROWS_AS(load_structure(spec), StructureError);

    spec = flat_hermitian_spec();
    spec["geometry"] = "product";  // inconsistent with (alpha,epsilon)=(-1,1)
    CHECK_THROWS_AS(load_structure(spec), StructureError);

    spec = flat_hermitian_spec();
    spec["dimension"] = 3;
    CHECK_THROWS_AS(load_structure(spec), StructureError);

    spec = flat_hermitian_spec();
    spec["metric"][0][1] = "x9";  // out-of-range coordinate
    CHECK_THROWS_AS(load_structure(spec), ParseError);
}

TEST_CASE("scaled J shows up as a J^2 defect") {
    json spec = flat_hermitian_spec();
    for (auto& row : spec["J"])
        for (auto& entry : row) {
            std::string v = entry.get<std::string>();
            if (v == "1") entry = "1.1";
            if (v == "-1") entry = "-1.1";
        }
    GeometryStructure s = load_structure(spec);
    auto pts = sample_points(s.chart, 5, 0);
    ValidationReport r = validate_structure(s, pts, 1e-9);
    for (const auto& c : r.conditions)
        if (c.name == "J_squared_alpha_id")
            CHECK(c.defect == doctest::Approx(0.21).epsilon(1e-9));
}

TEST_CASE("frame_at evaluates exact derivatives") {
    GeometryStructure flat = load_structure(flat_hermitian_spec());
    std::vector<double> p{0.2, -0.3, 0.7, 0.0};
    PointFrame f = frame_at(flat, p);
    CHECK(max_abs(f.dg) == 0.0);
    CHECK(max_abs(f.dJ) == 0.0);

    const GeometryStructure& conf = get_entry("hermitian_conformal_4d").structure;
    PointFrame fc = frame_at(conf, p);
    double factor = 2.0 * std::exp(2.0 * p[0]);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            double want = i == j ? factor : 0.0;
            CHECK(fc.dg(0, i, j) == doctest::Approx(want).epsilon(1e-14));
            CHECK(fc.dg(1, i, j) == 0.0);
        }

    std::vector<double> origin{0, 0, 0, 0};
    PointFrame f0 = frame_at(conf, origin);
    CHECK(max_abs(Mat(f0.g - Mat::Identity(4, 4))) == 0.0);
    for (int i = 0; i < 4; ++i) CHECK(f0.dg(0, i, i) == 2.0);
}

TEST_CASE("frame_at rejects points outside the domain") {
    GeometryStructure s = load_structure(flat_hermitian_spec());
    std::vector<double> outside{2.0, 0, 0, 0};
    CHECK_THROWS_AS(frame_at(s, outside), StructureError);
}

TEST_CASE("kahler type classification") {
    GeometryStructure flat = load_structure(flat_hermitian_spec());
    auto pts = sample_points(flat.chart, 20, 3);
    CHECK(classify_kahler_type(flat, pts, 1e-9) == KahlerType::kahler_type);

    for (const char* name : {"hermitian_conformal_4d", "para_hermitian_4d"}) {
        const GeometryStructure& s = get_entry(name).structure;
        CHECK(classify_kahler_type(s, pts, 1e-9) == KahlerType::non_kahler_type);
    }
}

TEST_CASE("sample_points is deterministic") {
    Chart degenerate{4, {{0, 0}, {0, 0}, {0, 0}, {0, 0}}};
    auto single = sample_points(degenerate, 1, 123);
    REQUIRE(single.size() == 1);
    for (double x : single[0]) CHECK(x == 0.0);

    Chart box{4, {{-1, 1}, {-1, 1}, {-1, 1}, {-1, 1}}};
    auto a = sample_points(box, 30, 7);
    auto b = sample_points(box, 30, 7);
    CHECK(a == b);
    auto c = sample_points(box, 30, 8);
    CHECK(a != c);
    for (const auto& p : a)
        CHECK(box.contains(p));
}
