#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

namespace hbergman {

/// Serializes with every floating-point number printed as %.17g (non-finite
/// values become null). Object keys keep insertion order of nlohmann::json
/// (sorted), so equal documents give equal bytes.
std::string dump_json(const nlohmann::json& doc, int indent = 2);

/// Writes text to path through a temporary sibling file and a rename, so a
/// failed run never leaves a partial file behind.
void write_atomically(const std::filesystem::path& path, const std::string& text);

}  // namespace hbergman
