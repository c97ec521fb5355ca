#pragma once

#include <filesystem>
#include <string>

#include "parasemi/function_spaces.hpp"

namespace parasemi {

/// Shortest text that parses back to the same double ("%.17g").
std::string format_double(double x);

/// CSV with header `t,c_1,...,c_N`, one row per node.
std::string path_to_csv(const PathSample& p);
/// Parses the CSV layout above; weights default to 1.
PathSample path_from_csv(const std::string& text, const Vec& weights = {});

std::string read_text_file(const std::filesystem::path& file);
/// Creates parent directories as needed.
void write_text_file(const std::filesystem::path& file, const std::string& content);

}  // namespace parasemi
