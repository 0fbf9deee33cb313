#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace comfortcam {

std::string slurp_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

/// Lines of a text file with trailing \r stripped. Keeps blank/comment lines.
std::vector<std::string> read_lines(const std::string& path);

std::string trim(std::string_view s);
bool starts_with(std::string_view s, std::string_view prefix);

/// Split on a single delimiter; fields are not trimmed.
std::vector<std::string> split(std::string_view s, char delim);

/// Split on runs of whitespace; empty fields dropped.
std::vector<std::string> split_ws(std::string_view s);

/// Strict numeric parsing: the whole field must parse.
double parse_double(std::string_view field, const std::string& context);
std::int64_t parse_int(std::string_view field, const std::string& context);

/// Shortest decimal form that round-trips a double ("%.17g" fallback).
std::string fmt_double(double v);
/// Fixed-point form, e.g. fmt_fixed(1.5, 3) == "1.500".
std::string fmt_fixed(double v, int decimals);

/// Directory part of a path ("" if none) and path joining.
std::string dir_name(const std::string& path);
std::string join_path(const std::string& dir, const std::string& rel);

bool file_exists(const std::string& path);
void make_dirs(const std::string& path);

/// Provenance header written at the top of every produced text file:
/// "# comfortcam <version>\n# config: <config>\n".
std::string provenance_header(const std::string& config);

}  // namespace comfortcam
