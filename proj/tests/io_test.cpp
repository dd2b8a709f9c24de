#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "irrev/error.hpp"
#include "irrev/io.hpp"
#include "irrev/models.hpp"

using namespace irrev;
namespace fs = std::filesystem;

namespace {

class TempDir {
 public:
  TempDir() {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    path_ = fs::temp_directory_path() /
            (std::string("irrev_io_") + info->test_suite_name() + "_" + info->name());
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  fs::path operator/(const std::string& name) const { return path_ / name; }

 private:
  fs::path path_;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void spit(const fs::path& p, const std::string& text) {
  std::ofstream(p, std::ios::binary) << text;
}

template <typename F>
Error error_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e;
  }
  ADD_FAILURE() << "no error raised";
  return Error(ErrorCode::IoError, "none");
}

ReportDocument sample_document() {
  ModelSpec spec;
  spec.kind = ModelKind::logistic;
  spec.n = 3000;
  const auto x = generate(spec);
  ReportDocument doc;
  doc.provenance.source = "logistic.txt";
  doc.provenance.command = "analyze --in logistic.txt";
  doc.provenance.seed = 9;
  doc.provenance.parameters = {{"tau", "1"}, {"scheme", "equal-value"}};
  doc.reports.push_back(measure(x, EmbeddingConfig{3, 1}, MeasureKind::TIR));
  doc.reports.push_back(measure(x, EmbeddingConfig{4, 2, TieScheme::original}, MeasureKind::AIR));
  IaaftParams p;
  p.seed = 9;
  p.n_surrogates = 5;
  doc.verdicts.push_back(make_verdict(MeasureKind::TIR, EmbeddingConfig{3, 1}, p, 0.5,
                                      {0.1, 0.2, 0.3, 1.0 / 3.0, 0.0}));
  return doc;
}

}  // namespace

TEST(SeriesParse, Plain) {
  EXPECT_EQ(parse_plain_series("1.0\n2.5\n-3\n"), (std::vector<double>{1.0, 2.5, -3.0}));
  EXPECT_EQ(parse_plain_series("1\r\n2\r\n"), (std::vector<double>{1.0, 2.0}));
  EXPECT_EQ(parse_plain_series("  4e-3 \n\n5"), (std::vector<double>{4e-3, 5.0}));
}

TEST(SeriesParse, Csv) {
  EXPECT_EQ(parse_csv_series("t,rr\n0,800\n1,812\n", ',', 1, true),
            (std::vector<double>{800, 812}));
  EXPECT_EQ(parse_csv_series("\"a,b\",7\n\"x\"\"y\",8\n", ',', 1, false),
            (std::vector<double>{7, 8}));
  EXPECT_EQ(parse_csv_series("1;2\n3;4\n", ';', 0, false), (std::vector<double>{1, 3}));
}

TEST(SeriesParse, ErrorsCarryLineNumbers) {
  auto e = error_of([] { parse_plain_series("abc\n"); });
  EXPECT_EQ(e.code(), ErrorCode::ParseError);
  EXPECT_NE(std::string(e.what()).find("line 1"), std::string::npos) << e.what();

  e = error_of([] { parse_plain_series("1\n2\nnan\n"); });
  EXPECT_EQ(e.code(), ErrorCode::NonFiniteSample);
  EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos) << e.what();

  e = error_of([] { parse_csv_series("t,rr\n0,800\n1\n", ',', 1, true); });
  EXPECT_EQ(e.code(), ErrorCode::ParseError);
  EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos) << e.what();

  EXPECT_EQ(error_of([] { parse_plain_series("1.5x\n"); }).code(), ErrorCode::ParseError);
}

TEST(SeriesFileIo, ReadErrors) {
  TempDir dir;
  spit(dir / "empty.txt", "");
  spit(dir / "blank.txt", "\n\n");
  spit(dir / "one.txt", "3\n");
  EXPECT_EQ(error_of([&] { read_series({dir / "empty.txt"}); }).code(), ErrorCode::EmptyFile);
  EXPECT_EQ(error_of([&] { read_series({dir / "blank.txt"}); }).code(), ErrorCode::EmptyFile);
  EXPECT_EQ(error_of([&] { read_series({dir / "one.txt"}); }).code(), ErrorCode::SeriesTooShort);
  EXPECT_EQ(error_of([&] { read_series({dir / "missing.txt"}); }).code(), ErrorCode::IoError);
}

TEST(SeriesFileIo, WriteRoundTripsExactly) {
  TempDir dir;
  write_series(std::vector<double>{1.0}, dir / "one.txt");
  EXPECT_EQ(slurp(dir / "one.txt"), "1\n");

  ModelSpec spec;
  spec.kind = ModelKind::henon;
  spec.n = 5000;
  auto x = generate(spec);
  x.push_back(-0.0);
  x.push_back(5e-324);
  x.push_back(1.7976931348623157e308);
  write_series(x, dir / "h.txt");
  const auto y = read_series({dir / "h.txt"});
  ASSERT_EQ(x.size(), y.size());
  for (std::size_t i = 0; i < x.size(); ++i)
    ASSERT_EQ(std::bit_cast<std::uint64_t>(x[i]), std::bit_cast<std::uint64_t>(y[i])) << i;
  write_series(y, dir / "h2.txt");
  EXPECT_EQ(slurp(dir / "h.txt"), slurp(dir / "h2.txt"));

  EXPECT_EQ(error_of([&] { write_series(std::vector<double>{}, dir / "e.txt"); }).code(),
            ErrorCode::EmptyFile);
  EXPECT_EQ(error_of([&] { write_series(std::vector<double>{INFINITY}, dir / "e.txt"); }).code(),
            ErrorCode::NonFiniteSample);
  EXPECT_FALSE(fs::exists(dir / "e.txt"));
}

TEST(SeriesFileIo, CsvFile) {
  TempDir dir;
  spit(dir / "rr.csv", "t,rr\n0,800\n1,812\n");
  SeriesFile f{dir / "rr.csv", SeriesFormat::csv, ',', 1, true};
  EXPECT_EQ(read_series(f), (std::vector<double>{800, 812}));
}

TEST(FormatDouble, ShortestRoundTrip) {
  EXPECT_EQ(format_double(0.0), "0");
  EXPECT_EQ(format_double(-0.0), "-0");
  EXPECT_EQ(format_double(1.0), "1");
  EXPECT_EQ(format_double(-3.0), "-3");
  EXPECT_EQ(format_double(0.1), "0.10000000000000001");
  EXPECT_EQ(std::stod(format_double(1.0 / 3.0)), 1.0 / 3.0);
}

TEST(Report, ZeroValueIsWrittenAsZero) {
  ReportDocument doc;
  doc.reports.push_back(
      measure(std::vector<double>(20, 1.0), EmbeddingConfig{3, 1}, MeasureKind::TIR));
  const auto text = render_report(doc);
  EXPECT_NE(text.find("\"value\": 0\n"), std::string::npos) << text;
  EXPECT_EQ(text.back(), '\n');
}

TEST(Report, RoundTripIsByteIdentical) {
  TempDir dir;
  const auto doc = sample_document();
  write_report(doc, dir / "a.json");
  const auto back = read_report(dir / "a.json");
  write_report(back, dir / "b.json");
  EXPECT_EQ(slurp(dir / "a.json"), slurp(dir / "b.json"));
  EXPECT_EQ(render_report(sample_document()), slurp(dir / "a.json"));

  EXPECT_EQ(back.provenance, doc.provenance);
  ASSERT_EQ(back.reports.size(), doc.reports.size());
  for (std::size_t i = 0; i < doc.reports.size(); ++i) {
    EXPECT_EQ(back.reports[i].value, doc.reports[i].value);
    EXPECT_EQ(back.reports[i].kind, doc.reports[i].kind);
    EXPECT_EQ(back.reports[i].config.m, doc.reports[i].config.m);
    EXPECT_EQ(back.reports[i].config.scheme, doc.reports[i].config.scheme);
    EXPECT_EQ(back.reports[i].pairs.size(), doc.reports[i].pairs.size());
  }
  ASSERT_EQ(back.verdicts.size(), 1u);
  EXPECT_EQ(back.verdicts[0].surrogate_values, doc.verdicts[0].surrogate_values);
  EXPECT_EQ(back.verdicts[0].significant_above, doc.verdicts[0].significant_above);
}

TEST(Report, MalformedInputIsParseError) {
  EXPECT_EQ(error_of([] { parse_report("{"); }).code(), ErrorCode::ParseError);
  EXPECT_EQ(error_of([] { parse_report("[]"); }).code(), ErrorCode::ParseError);
  auto text = render_report(sample_document());
  const auto pos = text.find("\"schema_version\": \"1\"");
  ASSERT_NE(pos, std::string::npos);
  text.replace(pos, 21, "\"schema_version\": \"9\"");
  EXPECT_EQ(error_of([&] { parse_report(text); }).code(), ErrorCode::ParseError);
}

TEST(SweepTable, MatchesGoldenFile) {
  ModelSpec spec;
  spec.kind = ModelKind::logistic;
  spec.n = 2000;
  const auto x = generate(spec);
  const std::vector<MeasureKind> kinds{MeasureKind::TIR, MeasureKind::AIR};
  const auto reports = sweep(x, IntRange{2, 4}, IntRange{1, 2}, TieScheme::equal_value, kinds);
  const auto csv = render_sweep_csv(reports);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "kind,m,tau,value,n_windows,n_forbidden");
  EXPECT_EQ(csv, slurp(fs::path(IRREV_TEST_DATA) / "golden_sweep.csv"));
}
