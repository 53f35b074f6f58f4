#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "bregman/legendre.hpp"
#include "bregman/point_set.hpp"

namespace bregman::harness {

/// Input file missing or malformed.
class InputError : public Error {
 public:
  using Error::Error;
};

/// Output file could not be written.
class OutputError : public Error {
 public:
  using Error::Error;
};

/// Parses "1,2.5,-3" (whitespace tolerated) into a vector.
Vector parse_vector(std::string_view text);

/// A JSON array of arrays, e.g. [[1, 2], [3, 4]].
std::vector<Vector> parse_points_json(std::string_view text);
/// One point per row; a first row that is not numeric is taken as a header.
std::vector<Vector> parse_points_csv(std::string_view text);

/// Reads a point file, choosing JSON for a .json extension or a leading
/// '[' and CSV otherwise. The dimension is inferred from the data.
std::vector<Vector> load_points(const std::filesystem::path& path);

/// Loads and validates against f (nonempty, matching dimension, inside U).
PointSet load_point_set(const std::filesystem::path& path,
                        const LegendreSpec& f);

/// Shortest round-trip decimal form; "inf", "-inf" and "nan" otherwise.
std::string format_real(double value);

/// RFC 4180 field quoting.
std::string csv_escape(std::string_view field);

class CsvWriter {
 public:
  explicit CsvWriter(std::ostream& out) : out_(out) {}
  void row(const std::vector<std::string>& fields);

 private:
  std::ostream& out_;
};

/// Binary portable graymap (P5), maxval 255, rows top to bottom.
void write_pgm(std::ostream& out, std::size_t width, std::size_t height,
               const std::vector<std::uint8_t>& pixels);

/// Writes text to path, throwing OutputError on failure.
void write_file(const std::filesystem::path& path, std::string_view content);

}  // namespace bregman::harness
