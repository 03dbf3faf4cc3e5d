#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace hafelm::cli {

/// Runs the command-line tool in-process. Returns the exit code:
/// 0 success, 2 usage error, 3 data error, 4 numeric error.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Parses a plain-text "key = value" file; '#' starts a comment.
std::map<std::string, std::string> read_config_file(const std::filesystem::path& path);

/// "0-4,9" -> {0, 1, 2, 3, 4, 9}.
std::vector<std::uint64_t> parse_seed_list(const std::string& text);
/// Comma-separated reals.
std::vector<double> parse_real_list(const std::string& text);
/// "0,0;4,0" -> two 2-D points.
std::vector<std::vector<double>> parse_point_list(const std::string& text);

}  // namespace hafelm::cli
