#ifndef GWCCA_CSV_HPP
#define GWCCA_CSV_HPP

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace gwcca::csv {

/// Header plus string cells; quoted fields (RFC 4180 style) are unquoted.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  /// Column position by name; nullopt if absent.
  [[nodiscard]] std::optional<std::size_t> find(std::string_view name) const;
  /// Column position by name; InputError naming the column if absent.
  [[nodiscard]] std::size_t require(std::string_view name) const;
};

Table read(const std::filesystem::path& path);
Table parse(std::string_view text);

std::vector<std::string> split_line(std::string_view line);

/// Shortest text that parses back to the same double; negative zero prints as 0.
std::string format_number(double value);

std::string quote(std::string_view field);

/// Parses a finite double; nullopt for an empty or missing-value cell ("", NA, NaN).
/// Throws InputError for anything else that does not parse.
std::optional<double> parse_cell(std::string_view cell, std::string_view column);

/// Writes `content` to `path`, surfacing failures as InputError with the path.
void write_file(const std::filesystem::path& path, std::string_view content);

}  // namespace gwcca::csv

#endif  // GWCCA_CSV_HPP
