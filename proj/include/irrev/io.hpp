#pragma once

// Series files (plain and CSV), JSON report documents and sweep tables.

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "irrev/measures.hpp"
#include "irrev/surrogate.hpp"

namespace irrev {

inline constexpr std::string_view kToolVersion = "0.1.0";
inline constexpr std::string_view kSchemaVersion = "1";

enum class SeriesFormat { plain, csv };

struct SeriesFile {
  std::filesystem::path path;
  SeriesFormat format = SeriesFormat::plain;
  char delimiter = ',';
  int column = 0;  // 0-based
  bool header = false;
};

/// Throws ParseError / NonFiniteSample (with 1-based line), EmptyFile,
/// SeriesTooShort (single sample) or IoError.
std::vector<double> read_series(const SeriesFile& file);
std::vector<double> parse_plain_series(std::string_view text);
std::vector<double> parse_csv_series(std::string_view text, char delimiter, int column,
                                     bool header);

/// One sample per line, 17 significant digits, LF-terminated. Throws EmptyFile
/// for an empty series, NonFiniteSample, IoError.
void write_series(std::span<const double> series, const std::filesystem::path& path);

/// 17 significant digits, shortest exponent form as printf("%.17g").
std::string format_double(double value);

struct Provenance {
  std::string source;
  std::string command;
  std::optional<std::uint64_t> seed;
  std::string tool_version{kToolVersion};
  std::map<std::string, std::string> parameters;

  friend bool operator==(const Provenance&, const Provenance&) = default;
};

struct ReportDocument {
  std::string schema_version{kSchemaVersion};
  Provenance provenance;
  std::vector<IrreversibilityReport> reports;
  std::vector<SurrogateVerdict> verdicts;
};

/// JSON text: keys sorted, two-space indent, floats at 17 significant digits,
/// patterns as codec strings, trailing newline.
std::string render_report(const ReportDocument& doc);
/// Throws ParseError on malformed or schema-incompatible documents.
ReportDocument parse_report(std::string_view text);

/// Writes through a temporary file that is fsync'ed and renamed into place.
void write_report(const ReportDocument& doc, const std::filesystem::path& path);
ReportDocument read_report(const std::filesystem::path& path);

/// Header "kind,m,tau,value,n_windows,n_forbidden", one row per report.
std::string render_sweep_csv(std::span<const IrreversibilityReport> reports);
void write_text_file(const std::filesystem::path& path, std::string_view text);

}  // namespace irrev
