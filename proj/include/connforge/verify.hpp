#pragma once

#include <cstdint>
#include <nlohmann/json.hpp>
#include <string>
#include <vector>

#include "connforge/geometry.hpp"

namespace connforge {

struct VerifyOptions {
    int points = 50;
    std::uint64_t seed = 0;
    double tol = 1e-9;
};

/// One verified identity: id 0 is structure validation, ids 1-10 are the
/// connection-level invariants. Some ids contribute several records.
struct VerifyRecord {
    int id = 0;
    std::string name;
    int points_tested = 0;
    double defect = 0.0;
    double tol = 0.0;
    bool pass = true;
};

struct VerifyReport {
    std::string structure;
    std::uint64_t seed = 0;
    double tol = 1e-9;
    bool kahler_type = false;
    std::string chern_status;
    std::string skew_status;
    std::vector<VerifyRecord> records;
    bool pass = true;
    std::string timestamp;  // ISO 8601 UTC
};

/// Runs every invariant applicable to the structure's (alpha,epsilon) and
/// solver statuses. Deterministic for fixed (structure, seed, tol, points).
VerifyReport verify_structure(const GeometryStructure& s, const VerifyOptions& opt);

nlohmann::ordered_json report_to_json(const VerifyReport& r);

/// JSON dump with every number rendered at 17 significant digits, so equal
/// reports serialize to identical bytes.
std::string dump_json_17(const nlohmann::ordered_json& j, int indent = 2);

std::string iso8601_utc_now();

} // namespace connforge
