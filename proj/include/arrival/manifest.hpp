#pragma once

#include <ostream>
#include <string>
#include <utility>
#include <vector>

namespace arrival {

inline constexpr const char* kToolVersion = "0.1.0";

/// %.12g in the C locale; "inf"/"-inf"/"nan" spelled out.
std::string format_number(double x);
/// %.17g, exact round trip through strtod.
std::string format_exact(double x);

/// Everything needed to regenerate an output file. Serialized as '#'-prefixed
/// "key = value" lines ahead of the CSV column row.
struct RunManifest {
  std::string subcommand;
  std::string version = kToolVersion;
  std::vector<std::string> args;  // canonical argument list, starting with the subcommand
  std::vector<std::pair<std::string, std::string>> params;

  void set(const std::string& key, const std::string& value);
  void set(const std::string& key, double value);
  std::string header() const;

  /// Reads the header of a file written by write_csv.
  static RunManifest parse(const std::string& text);
  static RunManifest load(const std::string& path);
};

/// Writes header, column row and rows (already formatted) to `out`.
void write_csv(std::ostream& out, const RunManifest& manifest, const std::vector<std::string>& columns,
               const std::vector<std::vector<double>>& rows);
void write_csv(std::ostream& out, const RunManifest& manifest, const std::string& column_row,
               const std::vector<std::string>& rows);

}  // namespace arrival
