#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace powerscope::detail {

/// Shortest decimal form that round-trips the double exactly. Used by every
/// emitted CSV.
std::string format_full(double v);

/// 17 significant digits. Model-file serialization contract.
std::string format_sig17(double v);

/// 4 significant digits. Human summaries only.
std::string format_human(double v);

std::string_view trim(std::string_view s);
std::vector<std::string> split(std::string_view line, char sep);

bool parse_double(std::string_view s, double& out);
bool parse_int64(std::string_view s, std::int64_t& out);
bool parse_uint64(std::string_view s, std::uint64_t& out);
bool parse_size(std::string_view s, std::size_t& out);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view text);
std::vector<std::string> read_lines(const std::filesystem::path& path);

/// ISO-8601 UTC. Honors SOURCE_DATE_EPOCH so artifact files can be made
/// reproducible.
std::string iso8601_utc_now();

} // namespace powerscope::detail
