#include "bregman/harness/io.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace bregman::harness {

namespace {

std::string_view trim(std::string_view text) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front())))
    text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back())))
    text.remove_suffix(1);
  return text;
}

bool parse_real(std::string_view text, double& out) {
  text = trim(text);
  if (text.empty()) return false;
  if (text.front() == '+') text.remove_prefix(1);
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, out);
  return ec == std::errc() && ptr == end;
}

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> parts;
  while (true) {
    const auto pos = text.find(sep);
    parts.push_back(text.substr(0, pos));
    if (pos == std::string_view::npos) break;
    text.remove_prefix(pos + 1);
  }
  return parts;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

}  // namespace

Vector parse_vector(std::string_view text) {
  const auto parts = split(trim(text), ',');
  Vector v(static_cast<Eigen::Index>(parts.size()));
  for (std::size_t j = 0; j < parts.size(); ++j) {
    if (!parse_real(parts[j], v[j])) {
      throw InputError("cannot parse '" + std::string(parts[j]) +
                       "' as a number in vector '" + std::string(text) + "'");
    }
  }
  return v;
}

std::vector<Vector> parse_points_json(std::string_view text) {
  nlohmann::json root;
  try {
    root = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError(std::string("point file is not valid JSON: ") + e.what());
  }
  if (!root.is_array()) throw InputError("point file must be a JSON array");
  std::vector<Vector> points;
  for (std::size_t i = 0; i < root.size(); ++i) {
    const auto& row = root[i];
    if (!row.is_array() || row.empty()) {
      throw InputError("point " + std::to_string(i) +
                       " must be a nonempty array of numbers");
    }
    Vector p(static_cast<Eigen::Index>(row.size()));
    for (std::size_t j = 0; j < row.size(); ++j) {
      if (!row[j].is_number()) {
        throw InputError("point " + std::to_string(i) + " coordinate " +
                         std::to_string(j) + " is not a number");
      }
      p[j] = row[j].get<double>();
    }
    points.push_back(std::move(p));
  }
  return points;
}

std::vector<Vector> parse_points_csv(std::string_view text) {
  std::vector<Vector> points;
  bool first = true;
  std::size_t line_number = 0;
  for (std::string_view line : split(text, '\n')) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (trim(line).empty()) continue;
    const auto fields = split(line, ',');
    Vector p(static_cast<Eigen::Index>(fields.size()));
    bool numeric = true;
    for (std::size_t j = 0; j < fields.size() && numeric; ++j) {
      std::string_view field = trim(fields[j]);
      if (field.size() >= 2 && field.front() == '"' && field.back() == '"') {
        field = field.substr(1, field.size() - 2);
      }
      numeric = parse_real(field, p[j]);
    }
    if (!numeric) {
      if (first) {
        first = false;
        continue;  // header
      }
      throw InputError("line " + std::to_string(line_number) +
                       " of point CSV is not numeric");
    }
    first = false;
    points.push_back(std::move(p));
  }
  return points;
}

std::vector<Vector> load_points(const std::filesystem::path& path) {
  const std::string content = read_file(path);
  const std::string_view body = trim(content);
  if (path.extension() == ".json" || (!body.empty() && body.front() == '[')) {
    return parse_points_json(body);
  }
  return parse_points_csv(body);
}

PointSet load_point_set(const std::filesystem::path& path,
                        const LegendreSpec& f) {
  return PointSet(load_points(path), f);
}

std::string format_real(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buffer[64];
  auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
  return std::string(buffer, ptr);
}

std::string csv_escape(std::string_view field) {
  if (field.find_first_of(",\"\r\n") == std::string_view::npos) {
    return std::string(field);
  }
  std::string quoted = "\"";
  for (char ch : field) {
    if (ch == '"') quoted += '"';
    quoted += ch;
  }
  quoted += '"';
  return quoted;
}

void CsvWriter::row(const std::vector<std::string>& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i > 0) out_ << ',';
    out_ << csv_escape(fields[i]);
  }
  out_ << "\r\n";
}

void write_pgm(std::ostream& out, std::size_t width, std::size_t height,
               const std::vector<std::uint8_t>& pixels) {
  if (pixels.size() != width * height) {
    throw std::invalid_argument("pixel count does not match image size");
  }
  out << "P5\n" << width << ' ' << height << "\n255\n";
  out.write(reinterpret_cast<const char*>(pixels.data()),
            static_cast<std::streamsize>(pixels.size()));
}

void write_file(const std::filesystem::path& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw OutputError("cannot open " + path.string() + " for writing");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  out.flush();
  if (!out) throw OutputError("failed writing " + path.string());
}

}  // namespace bregman::harness
