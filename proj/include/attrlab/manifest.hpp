#pragma once
// Experiment manifests: a small key/value format with nested tables
// ([section] headers, scalar and array values, # comments). Parsed into a
// JSON tree; the schema is validated by the pipeline layer.

#include <filesystem>
#include <string>

#include <json.hpp>

namespace attrlab {

// throws ValidationError with line context on syntax errors
nlohmann::json parse_manifest_text(const std::string& text);

struct Manifest {
    nlohmann::json root;
    std::string hash;  // FNV-1a of the raw bytes
    std::filesystem::path path;
};

Manifest load_manifest(const std::filesystem::path& path);

}  // namespace attrlab
