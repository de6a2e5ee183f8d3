#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "vbpw/density.hpp"
#include "vbpw/piecewise.hpp"
#include "vbpw/spectral.hpp"

namespace vbpw {

inline constexpr const char* kToolName = "vbpw";
inline constexpr const char* kToolVersion = "0.1.0";

/// Parses JSON text, reporting syntax errors as ValidationError with the
/// source name and line number.
nlohmann::json parse_json_text(const std::string& text, const std::string& source);
nlohmann::json load_json_file(const std::string& path);

/// {"knots": [...], "levels": [...]}
BandwidthProfile profile_from_json(const nlohmann::json& j, const std::string& source);
nlohmann::json profile_to_json(const BandwidthProfile& p);
BandwidthProfile load_profile(const std::string& path);

/// {"intervals": [[a, b], ...]}
SpectralSet spectrum_from_json(const nlohmann::json& j, const std::string& source);
nlohmann::json spectrum_to_json(const SpectralSet& s);
SpectralSet load_spectrum(const std::string& path);

/// One number per line, or a CSV with a column named `x`. Blank lines and
/// lines starting with '#' are skipped.
PointSet parse_points(const std::string& text, const std::string& source);
PointSet load_points(const std::string& path);

/// "%.15g", independent of the global locale.
std::string format_number(double v);

/// Comma-separated rows with a header line.
class CsvWriter {
 public:
  explicit CsvWriter(std::vector<std::string> header);
  void row(const std::vector<double>& values);
  const std::string& str() const { return buffer_; }

 private:
  std::size_t columns_;
  std::string buffer_;
};

/// 64-bit FNV-1a.
std::uint64_t fnv1a64(std::string_view bytes);

/// Hex FNV-1a of the compact, key-sorted dump of `config`.
std::string config_hash(const nlohmann::json& config);

/// Writes `text` to `path`, or to stdout when `path` is empty or "-".
void write_output(const std::string& path, const std::string& text);

}  // namespace vbpw
