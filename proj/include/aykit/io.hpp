#pragma once

#include <cstdint>
#include <filesystem>
#include <json.hpp>
#include <string>

#include "aykit/embed.hpp"
#include "aykit/mc.hpp"
#include "aykit/measure.hpp"
#include "aykit/path.hpp"
#include "aykit/profile.hpp"

namespace aykit {

using Json = nlohmann::json;

// Parsers report failures as ValidationError naming the JSON path, e.g.
// "$.atoms[1].p: expected a number".
AtomicMeasure measure_from_json(const Json& j, const std::string& where = "$");
Json measure_to_json(const AtomicMeasure& mu);

Coefficient coefficient_from_json(const Json& j, const std::string& where = "$");
DrawdownFunction drawdown_from_json(const Json& j, const std::string& where = "$");
HFunction h_from_json(const Json& j, const std::string& where = "$");
FloorFunction floor_from_json(const Json& j, const std::string& where = "$");
ProfilePtr profile_from_json(const Json& j, const std::string& where = "$");
// Parametric tag plus a sampled table of (x, U, u) on [a, min(b, 64 a)].
Json profile_to_json(const Profile& p, std::size_t samples = 33);

Json read_json_file(const std::filesystem::path& file);
void write_text_file(const std::filesystem::path& file, const std::string& text);

Path read_path_csv(const std::filesystem::path& file);
std::string path_csv(const Path& p);

Json to_json(const StopEvent& e);
Json to_json(const GenSpec& spec);
Json to_json(const McReport& rep, bool include_provenance = true);

// Sorted keys, doubles printed as %.17g, two-space indent.
std::string dump_json(const Json& j);
// Shortest round-trip form, with a trailing ".0" for integral values.
std::string format_scalar(double x);

std::uint64_t fnv1a(const std::string& bytes);
std::string hex64(std::uint64_t h);

}  // namespace aykit
