#include "vbpw/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "vbpw/errors.hpp"

namespace vbpw {

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError(path + ": cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::size_t line_of(const std::string& text, std::size_t byte) {
  std::size_t line = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i)
    if (text[i] == '\n') ++line;
  return line;
}

std::vector<double> number_list(const nlohmann::json& j, const std::string& where) {
  if (!j.is_array()) throw ValidationError(where + ": expected an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number())
      throw ValidationError(where + "[" + std::to_string(i) + "]: expected a number");
    out.push_back(j[i].get<double>());
  }
  return out;
}

const nlohmann::json& field(const nlohmann::json& j, const char* name,
                            const std::string& source) {
  if (!j.is_object()) throw ValidationError(source + ": expected a JSON object");
  const auto it = j.find(name);
  if (it == j.end())
    throw ValidationError(source + ": missing field \"" + std::string(name) + "\"");
  return *it;
}

}  // namespace

nlohmann::json parse_json_text(const std::string& text, const std::string& source) {
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError(source + ":" + std::to_string(line_of(text, e.byte)) +
                          ": invalid JSON (" + e.what() + ")");
  }
}

nlohmann::json load_json_file(const std::string& path) {
  return parse_json_text(read_file(path), path);
}

BandwidthProfile profile_from_json(const nlohmann::json& j, const std::string& source) {
  const auto knots = number_list(field(j, "knots", source), source + ": field \"knots\"");
  const auto levels = number_list(field(j, "levels", source), source + ": field \"levels\"");
  try {
    return BandwidthProfile(knots, levels);
  } catch (const ValidationError& e) {
    throw ValidationError(source + ": " + e.what());
  }
}

nlohmann::json profile_to_json(const BandwidthProfile& p) {
  return {{"knots", std::vector<double>(p.knots().begin(), p.knots().end())},
          {"levels", std::vector<double>(p.levels().begin(), p.levels().end())}};
}

BandwidthProfile load_profile(const std::string& path) {
  return profile_from_json(load_json_file(path), path);
}

SpectralSet spectrum_from_json(const nlohmann::json& j, const std::string& source) {
  const auto& list = field(j, "intervals", source);
  if (!list.is_array()) throw ValidationError(source + ": field \"intervals\" must be an array");
  std::vector<std::pair<double, double>> iv;
  for (std::size_t i = 0; i < list.size(); ++i) {
    const std::string where = source + ": intervals[" + std::to_string(i) + "]";
    const auto ab = number_list(list[i], where);
    if (ab.size() != 2) throw ValidationError(where + ": expected [a, b]");
    iv.emplace_back(ab[0], ab[1]);
  }
  try {
    return SpectralSet(iv);
  } catch (const ValidationError& e) {
    throw ValidationError(source + ": " + e.what());
  }
}

nlohmann::json spectrum_to_json(const SpectralSet& s) {
  nlohmann::json list = nlohmann::json::array();
  for (const auto& [a, b] : s.intervals()) list.push_back({a, b});
  return {{"intervals", list}};
}

SpectralSet load_spectrum(const std::string& path) {
  return spectrum_from_json(load_json_file(path), path);
}

PointSet parse_points(const std::string& text, const std::string& source) {
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  long column = -1;  // CSV column of x, -1 for plain lists
  bool header_seen = false;
  std::vector<double> pts;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto start = line.find_first_not_of(" \t");
    if (start == std::string::npos || line[start] == '#') continue;
    std::vector<std::string> cells;
    std::stringstream ls(line);
    for (std::string c; std::getline(ls, c, ',');) {
      const auto a = c.find_first_not_of(" \t");
      const auto b = c.find_last_not_of(" \t");
      cells.push_back(a == std::string::npos ? "" : c.substr(a, b - a + 1));
    }
    if (!header_seen) {
      header_seen = true;
      for (std::size_t i = 0; i < cells.size(); ++i)
        if (cells[i] == "x") column = static_cast<long>(i);
      if (column >= 0) continue;
      if (cells.size() > 1)
        throw ValidationError(source + ":" + std::to_string(lineno) +
                              ": CSV input needs a header with a column named x");
    }
    const std::string& cell = cells.at(column >= 0 ? static_cast<std::size_t>(column) : 0);
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(cell, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != cell.size() || cell.empty() || !std::isfinite(v))
      throw ValidationError(source + ":" + std::to_string(lineno) + ": not a number: \"" +
                            cell + "\"");
    pts.push_back(v);
  }
  return PointSet(std::move(pts));
}

PointSet load_points(const std::string& path) { return parse_points(read_file(path), path); }

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.15g", v);
  return buf;
}

CsvWriter::CsvWriter(std::vector<std::string> header) : columns_(header.size()) {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (i) buffer_ += ',';
    buffer_ += header[i];
  }
  buffer_ += '\n';
}

void CsvWriter::row(const std::vector<double>& values) {
  if (values.size() != columns_) throw std::logic_error("csv: column count mismatch");
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) buffer_ += ',';
    buffer_ += format_number(values[i]);
  }
  buffer_ += '\n';
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string config_hash(const nlohmann::json& config) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(fnv1a64(config.dump())));
  return buf;
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError(path + ": cannot open for writing");
  out << text;
  if (!out) throw ValidationError(path + ": write failed");
}

}  // namespace vbpw
