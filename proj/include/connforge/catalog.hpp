#pragma once

#include <string>
#include <vector>

#include "connforge/geometry.hpp"

namespace connforge {

class UnknownEntryError : public std::runtime_error {
public:
    explicit UnknownEntryError(const std::string& name)
        : std::runtime_error("unknown catalog entry '" + name + "'") {}
};

/// Pre-validated example structure plus its expected behavior. Entries are
/// self-certifying: get_entry re-derives the flags from the geometry and
/// solver modules and fails loudly on any mismatch.
struct CatalogEntry {
    GeometryStructure structure;
    std::string doc;
    bool kahler_type = false;
    bool chern_exists = false;
    bool skew_exists = false;
};

std::vector<std::string> list_entries();

/// Throws UnknownEntryError for unknown names and StructureError if the
/// entry fails its own validation or flag check.
const CatalogEntry& get_entry(const std::string& name);

} // namespace connforge
