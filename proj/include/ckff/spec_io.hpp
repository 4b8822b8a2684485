#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>

#include "json.hpp"

#include "ckff/frame.hpp"

namespace ckff {

using Json = nlohmann::json;
using Metadata = std::map<std::string, std::string>;

/// On-disk form of a ControlledFrameSpec (schema_version 1).
struct SpecDocument {
    ControlledFrameSpec spec;
    Metadata metadata;
};

inline constexpr int kSchemaVersion = 1;

Json matrix_to_json(const Matrix& m);
/// Rows of [re, im] pairs; `cols` is needed when there are no pairs to count.
Matrix matrix_from_json(const Json& j, Index rows, Index cols);

Json spec_to_json(const ControlledFrameSpec& spec, const Metadata& metadata = {});
/// Throws InvalidInput on any schema or validation problem.
SpecDocument spec_from_json(const Json& j, const Tolerance& tol = {});

/// Canonical text: two-space indented JSON with shortest round-trip doubles.
std::string serialize(const ControlledFrameSpec& spec, const Metadata& metadata = {});
SpecDocument parse_spec(std::string_view text, const Tolerance& tol = {});

SpecDocument read_spec_file(const std::filesystem::path& path, const Tolerance& tol = {});
void write_text_file(const std::filesystem::path& path, std::string_view text);
/// Reads a whole file as JSON; InvalidInput if unreadable or malformed.
Json read_json_file(const std::filesystem::path& path);

}  // namespace ckff
