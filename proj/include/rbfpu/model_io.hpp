#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "rbfpu/datasets_io.hpp"
#include "rbfpu/pu.hpp"

namespace rbfpu {

/// Version written into every model file; readers reject any other value.
inline constexpr int kModelSchemaVersion = 1;

/// A fitted model plus the transform from raw data coordinates to the unit
/// cube it was trained on.
struct StoredModel {
  PUModel model;
  DomainTransform transform;
};

/// JSON text; see docs/model_format.md for the schema.
std::string serialize_model(const StoredModel& stored);
StoredModel deserialize_model(const std::string& text);

void save_model(const std::filesystem::path& path, const StoredModel& stored);
/// Throws SchemaVersion for a file written with a different schema version
/// and Parse for malformed content.
StoredModel load_model(const std::filesystem::path& path);

}  // namespace rbfpu
