#pragma once

#include <filesystem>
#include <memory>
#include <string>

#include <json.hpp>

#include "varcz/dyadic.hpp"
#include "varcz/space.hpp"
#include "varcz/sparse.hpp"

namespace varcz {

using Json = nlohmann::json;

/// Versioned space document; point data is regenerated deterministically
/// from these fields, never stored.
Json space_to_json(const Space& space);
Space space_from_json(const Json& j);

Json cube_system_to_json(const CubeSystem& system);
CubeSystem cube_system_from_json(std::shared_ptr<const Space> space,
                                 const Json& j);

Json sparse_family_to_json(const SparseFamily& family);
SparseFamily sparse_family_from_json(const Json& j);

Json load_json(const std::filesystem::path& path);
void save_json(const Json& j, const std::filesystem::path& path);

/// FNV-1a hash of the canonical dump; embedded in reports.
std::uint64_t config_hash(const Json& j);

}  // namespace varcz
