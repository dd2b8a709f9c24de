#include "irrev/io.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <charconv>
#include <cmath>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "irrev/error.hpp"

namespace irrev {
namespace {

using nlohmann::json;

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

double parse_sample(std::string_view field, std::size_t line) {
  std::string_view t = trim(field);
  if (!t.empty() && t.front() == '+') t.remove_prefix(1);
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || ec != std::errc() || ptr != t.data() + t.size())
    throw Error(ErrorCode::ParseError,
                "line " + std::to_string(line) + ": cannot parse '" + std::string(field) + "'");
  if (!std::isfinite(v))
    throw Error(ErrorCode::NonFiniteSample,
                "line " + std::to_string(line) + ": non-finite sample '" + std::string(field) + "'");
  return v;
}

void check_length(const std::vector<double>& series) {
  if (series.empty()) throw Error(ErrorCode::EmptyFile, "no samples found");
  if (series.size() < 2) throw Error(ErrorCode::SeriesTooShort, "a series needs at least 2 samples");
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw Error(ErrorCode::IoError, "cannot read '" + path.string() + "'");
  return buf.str();
}

struct CsvRecord {
  std::size_t line;
  std::vector<std::string> fields;
};

// RFC 4180 records: quoted fields may contain the delimiter, "" and newlines.
std::vector<CsvRecord> split_csv(std::string_view text, char delimiter) {
  std::vector<CsvRecord> records;
  CsvRecord current{1, {}};
  std::string field;
  bool in_quotes = false, field_started = false;
  std::size_t line = 1;

  auto end_record = [&] {
    if (field_started || !current.fields.empty()) {
      current.fields.push_back(field);
      records.push_back(std::move(current));
    }
    current = CsvRecord{line + 1, {}};
    field.clear();
    field_started = false;
  };

  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        if (c == '\n') ++line;
        field += c;
      }
    } else if (c == '"' && trim(field).empty()) {
      field.clear();
      in_quotes = true;
      field_started = true;
    } else if (c == delimiter) {
      current.fields.push_back(field);
      field.clear();
      field_started = true;
    } else if (c == '\n') {
      end_record();
      ++line;
    } else if (c != '\r') {
      field += c;
      if (c != ' ' && c != '\t') field_started = true;
    }
  }
  if (in_quotes)
    throw Error(ErrorCode::ParseError, "line " + std::to_string(current.line) + ": unterminated quote");
  end_record();
  return records;
}

// --- JSON emission -------------------------------------------------------

void emit(const json& j, std::string& out, int indent) {
  const std::string pad(static_cast<std::size_t>(indent + 2), ' ');
  switch (j.type()) {
    case json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (const auto& [key, value] : j.items()) {
        if (!first) out += ",\n";
        first = false;
        out += pad;
        out += json(key).dump();
        out += ": ";
        emit(value, out, indent + 2);
      }
      out += '\n';
      out.append(static_cast<std::size_t>(indent), ' ');
      out += '}';
      return;
    }
    case json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      out += "[\n";
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) out += ",\n";
        out += pad;
        emit(j[i], out, indent + 2);
      }
      out += '\n';
      out.append(static_cast<std::size_t>(indent), ' ');
      out += ']';
      return;
    }
    case json::value_t::number_float:
      out += format_double(j.get<double>());
      return;
    default:
      out += j.dump();
      return;
  }
}

json config_to_json(const EmbeddingConfig& c) {
  return {{"m", c.m},
          {"tau", c.tau},
          {"scheme", std::string(to_string(c.scheme))},
          {"tie_epsilon", c.tie_epsilon}};
}

EmbeddingConfig config_from_json(const json& j) {
  EmbeddingConfig c;
  c.m = j.at("m").get<int>();
  c.tau = j.at("tau").get<int>();
  c.scheme = tie_scheme_from_string(j.at("scheme").get<std::string>());
  c.tie_epsilon = j.at("tie_epsilon").get<double>();
  return c;
}

json report_to_json(const IrreversibilityReport& r) {
  json pairs = json::array();
  for (const auto& p : r.pairs) {
    pairs.push_back({{"pattern", pattern_to_string(p.pattern)},
                     {"counterpart", p.counterpart ? pattern_to_string(*p.counterpart) : "same-bin"},
                     {"p_forward", p.p_forward},
                     {"p_counterpart", p.p_counterpart},
                     {"ys", p.ys}});
  }
  return {{"kind", std::string(to_string(r.kind))},
          {"config", config_to_json(r.config)},
          {"value", r.value},
          {"n_windows", r.n_windows},
          {"n_observed_patterns", r.n_observed_patterns},
          {"n_forbidden_counterparts", r.n_forbidden_counterparts},
          {"pairs", pairs}};
}

IrreversibilityReport report_from_json(const json& j) {
  IrreversibilityReport r;
  r.kind = measure_kind_from_string(j.at("kind").get<std::string>());
  r.config = config_from_json(j.at("config"));
  r.value = j.at("value").get<double>();
  r.n_windows = j.at("n_windows").get<std::uint64_t>();
  r.n_observed_patterns = j.at("n_observed_patterns").get<std::uint64_t>();
  r.n_forbidden_counterparts = j.at("n_forbidden_counterparts").get<std::uint64_t>();
  for (const auto& p : j.at("pairs")) {
    PairContribution c;
    c.pattern = pattern_from_string(p.at("pattern").get<std::string>());
    const auto counterpart = p.at("counterpart").get<std::string>();
    if (counterpart != "same-bin") c.counterpart = pattern_from_string(counterpart);
    c.p_forward = p.at("p_forward").get<double>();
    c.p_counterpart = p.at("p_counterpart").get<double>();
    c.ys = p.at("ys").get<double>();
    r.pairs.push_back(std::move(c));
  }
  return r;
}

json verdict_to_json(const SurrogateVerdict& v) {
  return {{"kind", std::string(to_string(v.kind))},
          {"config", config_to_json(v.config)},
          {"seed", v.seed},
          {"max_iterations", v.max_iterations},
          {"n_surrogates", v.surrogate_values.size()},
          {"original_value", v.original_value},
          {"surrogate_values", v.surrogate_values},
          {"p2_5", v.p2_5},
          {"p97_5", v.p97_5},
          {"significant_above", v.significant_above},
          {"significant_below", v.significant_below}};
}

SurrogateVerdict verdict_from_json(const json& j) {
  SurrogateVerdict v;
  v.kind = measure_kind_from_string(j.at("kind").get<std::string>());
  v.config = config_from_json(j.at("config"));
  v.seed = j.at("seed").get<std::uint64_t>();
  v.max_iterations = j.at("max_iterations").get<int>();
  v.original_value = j.at("original_value").get<double>();
  v.surrogate_values = j.at("surrogate_values").get<std::vector<double>>();
  if (j.at("n_surrogates").get<std::size_t>() != v.surrogate_values.size())
    throw Error(ErrorCode::ParseError, "n_surrogates does not match surrogate_values");
  v.p2_5 = j.at("p2_5").get<double>();
  v.p97_5 = j.at("p97_5").get<double>();
  v.significant_above = j.at("significant_above").get<bool>();
  v.significant_below = j.at("significant_below").get<bool>();
  return v;
}

}  // namespace

std::string format_double(double value) {
  if (value == 0.0) return std::signbit(value) ? "-0" : "0";
  char buf[40];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, 17);
  return std::string(buf, ptr);
}

std::vector<double> parse_plain_series(std::string_view text) {
  std::vector<double> out;
  std::size_t line = 0;
  while (!text.empty()) {
    ++line;
    const auto nl = text.find('\n');
    const std::string_view row = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    if (trim(row).empty()) continue;
    out.push_back(parse_sample(row, line));
  }
  check_length(out);
  return out;
}

std::vector<double> parse_csv_series(std::string_view text, char delimiter, int column,
                                     bool header) {
  if (column < 0) throw Error(ErrorCode::InvalidParams, "CSV column index must be >= 0");
  auto records = split_csv(text, delimiter);
  std::vector<double> out;
  bool skipped_header = !header;
  for (const auto& rec : records) {
    if (rec.fields.size() == 1 && trim(rec.fields[0]).empty()) continue;
    if (!skipped_header) {
      skipped_header = true;
      continue;
    }
    if (static_cast<std::size_t>(column) >= rec.fields.size())
      throw Error(ErrorCode::ParseError, "line " + std::to_string(rec.line) + ": no column " +
                                             std::to_string(column));
    out.push_back(parse_sample(rec.fields[static_cast<std::size_t>(column)], rec.line));
  }
  check_length(out);
  return out;
}

std::vector<double> read_series(const SeriesFile& file) {
  const std::string text = read_text_file(file.path);
  if (file.format == SeriesFormat::plain) return parse_plain_series(text);
  return parse_csv_series(text, file.delimiter, file.column, file.header);
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
  const std::filesystem::path tmp = path.string() + ".tmp";
  const int fd = ::open(tmp.c_str(), O_WRONLY | O_CREAT | O_TRUNC, 0644);
  if (fd < 0) throw Error(ErrorCode::IoError, "cannot create '" + tmp.string() + "'");
  std::size_t done = 0;
  while (done < text.size()) {
    const ssize_t w = ::write(fd, text.data() + done, text.size() - done);
    if (w < 0) {
      ::close(fd);
      throw Error(ErrorCode::IoError, "write to '" + tmp.string() + "' failed");
    }
    done += static_cast<std::size_t>(w);
  }
  if (::fsync(fd) != 0 || ::close(fd) != 0)
    throw Error(ErrorCode::IoError, "flushing '" + tmp.string() + "' failed");
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw Error(ErrorCode::IoError, "cannot move into '" + path.string() + "': " + ec.message());
}

void write_series(std::span<const double> series, const std::filesystem::path& path) {
  if (series.empty()) throw Error(ErrorCode::EmptyFile, "refusing to write an empty series");
  std::string text;
  text.reserve(series.size() * 24);
  for (std::size_t i = 0; i < series.size(); ++i) {
    if (!std::isfinite(series[i]))
      throw Error(ErrorCode::NonFiniteSample, "sample " + std::to_string(i + 1) + " is not finite");
    text += format_double(series[i]);
    text += '\n';
  }
  write_text_file(path, text);
}

std::string render_report(const ReportDocument& doc) {
  json params = json::object();
  for (const auto& [k, v] : doc.provenance.parameters) params[k] = v;
  json provenance = {{"source", doc.provenance.source},
                     {"command", doc.provenance.command},
                     {"seed", doc.provenance.seed ? json(*doc.provenance.seed) : json(nullptr)},
                     {"tool_version", doc.provenance.tool_version},
                     {"parameters", params}};
  json reports = json::array();
  for (const auto& r : doc.reports) reports.push_back(report_to_json(r));
  json verdicts = json::array();
  for (const auto& v : doc.verdicts) verdicts.push_back(verdict_to_json(v));
  const json root = {{"schema_version", doc.schema_version},
                     {"provenance", provenance},
                     {"reports", reports},
                     {"verdicts", verdicts}};
  std::string out;
  emit(root, out, 0);
  out += '\n';
  return out;
}

ReportDocument parse_report(std::string_view text) {
  try {
    const json root = json::parse(text);
    ReportDocument doc;
    doc.schema_version = root.at("schema_version").get<std::string>();
    if (doc.schema_version != kSchemaVersion)
      throw Error(ErrorCode::ParseError, "unsupported schema_version '" + doc.schema_version + "'");
    const auto& p = root.at("provenance");
    doc.provenance.source = p.at("source").get<std::string>();
    doc.provenance.command = p.at("command").get<std::string>();
    if (!p.at("seed").is_null()) doc.provenance.seed = p.at("seed").get<std::uint64_t>();
    doc.provenance.tool_version = p.at("tool_version").get<std::string>();
    doc.provenance.parameters = p.at("parameters").get<std::map<std::string, std::string>>();
    for (const auto& r : root.at("reports")) doc.reports.push_back(report_from_json(r));
    for (const auto& v : root.at("verdicts")) doc.verdicts.push_back(verdict_from_json(v));
    return doc;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("report JSON: ") + e.what());
  }
}

void write_report(const ReportDocument& doc, const std::filesystem::path& path) {
  write_text_file(path, render_report(doc));
}

ReportDocument read_report(const std::filesystem::path& path) {
  return parse_report(read_text_file(path));
}

std::string render_sweep_csv(std::span<const IrreversibilityReport> reports) {
  std::string out = "kind,m,tau,value,n_windows,n_forbidden\n";
  for (const auto& r : reports) {
    out += to_string(r.kind);
    out += ',' + std::to_string(r.config.m) + ',' + std::to_string(r.config.tau) + ',' +
           format_double(r.value) + ',' + std::to_string(r.n_windows) + ',' +
           std::to_string(r.n_forbidden_counterparts) + '\n';
  }
  return out;
}

}  // namespace irrev
