#include "cli.hpp"

#include <CLI11.hpp>
#include <filesystem>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "irrev/io.hpp"
#include "irrev/measures.hpp"
#include "irrev/models.hpp"
#include "irrev/surrogate.hpp"

namespace irrev::cli {
namespace {

namespace fs = std::filesystem;

struct EmbeddingFlags {
  int m = 3;
  int tau = 1;
  std::string scheme = "equal-value";
  double tie_epsilon = 0.0;

  void add_to(CLI::App& app, bool with_m_tau = true) {
    if (with_m_tau) {
      app.add_option("--m", m, "Embedding dimension")->envname("IRREV_M")->capture_default_str();
      app.add_option("--tau", tau, "Embedding delay")->envname("IRREV_TAU")->capture_default_str();
    }
    app.add_option("--scheme", scheme, "Tie scheme: original | equal-value")
        ->envname("IRREV_SCHEME")
        ->capture_default_str();
    app.add_option("--tie-epsilon", tie_epsilon, "Samples within epsilon are tied")
        ->envname("IRREV_TIE_EPSILON")
        ->capture_default_str();
  }

  EmbeddingConfig config() const {
    EmbeddingConfig c{m, tau, tie_scheme_from_string(scheme), tie_epsilon};
    c.validate();
    return c;
  }
};

struct InputFlags {
  std::string path;
  std::string format = "plain";
  int column = 0;
  bool header = false;
  std::string delimiter = ",";

  void add_to(CLI::App& app) {
    app.add_option("--in", path, "Input series file")->required();
    app.add_option("--format", format, "plain | csv")->capture_default_str();
    app.add_option("--column", column, "CSV column (0-based)")->capture_default_str();
    app.add_flag("--header", header, "CSV has a header row");
    app.add_option("--delimiter", delimiter, "CSV delimiter")->capture_default_str();
  }

  SeriesFile file() const {
    SeriesFile f;
    f.path = path;
    if (format == "plain")
      f.format = SeriesFormat::plain;
    else if (format == "csv")
      f.format = SeriesFormat::csv;
    else
      throw Error(ErrorCode::InvalidParams, "unknown input format '" + format + "'");
    if (delimiter.size() != 1)
      throw Error(ErrorCode::InvalidParams, "CSV delimiter must be one character");
    f.delimiter = delimiter.front();
    f.column = column;
    f.header = header;
    return f;
  }
};

std::vector<MeasureKind> parse_kinds(const std::string& text) {
  if (text == "both") return {MeasureKind::TIR, MeasureKind::AIR};
  return {measure_kind_from_string(text)};
}

std::string join_args(int argc, char** argv) {
  std::string s;
  for (int i = 1; i < argc; ++i) {
    if (i > 1) s += ' ';
    s += argv[i];
  }
  return s;
}

void print_report_line(std::ostream& out, const IrreversibilityReport& r) {
  out << to_string(r.kind) << ' ' << r.config.m << ' ' << r.config.tau << ' '
      << format_double(r.value) << '\n';
}

// --- repro-models ---------------------------------------------------------

struct ModelRun {
  std::string name;
  std::vector<double> series;
  std::vector<IrreversibilityReport> reports;  // (kind, m) order: TIR m=2.., AIR m=2..
  std::vector<SurrogateVerdict> verdicts;      // same order
};

const IrreversibilityReport* find_report(const ModelRun& run, MeasureKind kind, int m) {
  for (const auto& r : run.reports)
    if (r.kind == kind && r.config.m == m) return &r;
  return nullptr;
}

const SurrogateVerdict* find_verdict(const ModelRun& run, MeasureKind kind, int m) {
  for (const auto& v : run.verdicts)
    if (v.kind == kind && v.config.m == m) return &v;
  return nullptr;
}

std::string render_model_table(const std::vector<ModelRun>& runs) {
  std::string out =
      "model,kind,m,tau,value,n_windows,n_forbidden,p2_5,p97_5,significant_above,"
      "significant_below\n";
  for (const auto& run : runs) {
    for (const auto& r : run.reports) {
      out += run.name + ',' + std::string(to_string(r.kind)) + ',' + std::to_string(r.config.m) +
             ',' + std::to_string(r.config.tau) + ',' + format_double(r.value) + ',' +
             std::to_string(r.n_windows) + ',' + std::to_string(r.n_forbidden_counterparts);
      if (const auto* v = find_verdict(run, r.kind, r.config.m)) {
        out += ',' + format_double(v->p2_5) + ',' + format_double(v->p97_5) + ',' +
               (v->significant_above ? "true" : "false") + ',' +
               (v->significant_below ? "true" : "false");
      } else {
        out += ",,,,";
      }
      out += '\n';
    }
  }
  return out;
}

struct Check {
  std::string name;
  bool passed;
  std::string detail;
};

std::vector<Check> model_checks(const std::vector<ModelRun>& runs, int m_max) {
  std::vector<Check> checks;
  auto value = [](const IrreversibilityReport* r) { return r ? r->value : -1.0; };
  for (const auto& run : runs) {
    const auto* tir2 = find_report(run, MeasureKind::TIR, 2);
    const auto* air2 = find_report(run, MeasureKind::AIR, 2);
    if (tir2 && air2)
      checks.push_back({run.name + "-m2-tir-equals-air", tir2->value == air2->value,
                        "TIR=" + format_double(tir2->value) + " AIR=" + format_double(air2->value)});
    if (run.name == "gaussian") {
      for (MeasureKind kind : {MeasureKind::TIR, MeasureKind::AIR}) {
        if (const auto* v = find_verdict(run, kind, 4))
          checks.push_back({run.name + "-m4-" + std::string(to_string(kind)) + "-inside-band",
                            !v->significant_above && !v->significant_below,
                            format_double(v->original_value) + " in [" + format_double(v->p2_5) +
                                ", " + format_double(v->p97_5) + "]"});
      }
      continue;
    }
    for (int m = 3; m <= std::min(5, m_max); ++m) {
      const double t = value(find_report(run, MeasureKind::TIR, m));
      const double a = value(find_report(run, MeasureKind::AIR, m));
      checks.push_back({run.name + "-m" + std::to_string(m) + "-tir-above-air", t > a,
                        "TIR=" + format_double(t) + " AIR=" + format_double(a)});
    }
    for (MeasureKind kind : {MeasureKind::TIR, MeasureKind::AIR}) {
      if (const auto* v = find_verdict(run, kind, 4))
        checks.push_back({run.name + "-m4-" + std::string(to_string(kind)) + "-above-p97.5",
                          v->significant_above,
                          format_double(v->original_value) + " > " + format_double(v->p97_5)});
    }
    if (run.name == "logistic" && m_max >= 7) {
      const double t = value(find_report(run, MeasureKind::TIR, 7));
      const double a = value(find_report(run, MeasureKind::AIR, 7));
      checks.push_back({"logistic-m7-tir-one-air-nonzero", t == 1.0 && a > 0.0 && a < 1.0,
                        "TIR=" + format_double(t) + " AIR=" + format_double(a)});
    }
  }
  return checks;
}

}  // namespace

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidParams:
      return kExitUsage;
    case ErrorCode::DivergedOrbit:
    case ErrorCode::DegenerateSeries:
    case ErrorCode::DomainError:
    case ErrorCode::TiedPatternUnsupported:
      return kExitNumeric;
    default:
      return kExitData;
  }
}

int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Permutation time and amplitude irreversibility of time series"};
  app.require_subcommand(1);

  // generate
  auto* gen = app.add_subcommand("generate", "Write a logistic, Henon or Gaussian series");
  std::string gen_kind;
  ModelSpec spec;
  spec.n = reference_length();
  std::optional<std::uint64_t> gen_seed;
  std::string gen_out;
  gen->add_option("kind", gen_kind, "logistic | henon | gaussian")->required();
  gen->add_option("--n", spec.n, "Samples")->envname("IRREV_N")->capture_default_str();
  gen->add_option("--burn-in", spec.burn_in, "Iterates discarded first")->capture_default_str();
  gen->add_option("--r", spec.logistic.r, "Logistic parameter")->capture_default_str();
  double x1 = 0.01, y1 = 0.01;
  gen->add_option("--x1", x1, "Initial x")->capture_default_str();
  gen->add_option("--y1", y1, "Initial y (Henon)")->capture_default_str();
  gen->add_option("--alpha", spec.henon.alpha, "Henon alpha")->capture_default_str();
  gen->add_option("--beta", spec.henon.beta, "Henon beta")->capture_default_str();
  gen->add_option("--mean", spec.gaussian.mean, "Gaussian mean")->capture_default_str();
  gen->add_option("--sd", spec.gaussian.sd, "Gaussian standard deviation")->capture_default_str();
  gen->add_option("--seed", gen_seed, "Seed (required for gaussian)")->envname("IRREV_SEED");
  gen->add_option("--out", gen_out, "Output series file")->required();

  // analyze
  auto* analyze = app.add_subcommand("analyze", "TIR/AIR of one series");
  InputFlags an_in;
  EmbeddingFlags an_emb;
  std::string an_measure = "both";
  std::string an_out;
  an_in.add_to(*analyze);
  an_emb.add_to(*analyze);
  analyze->add_option("--measure", an_measure, "tir | air | both")
      ->envname("IRREV_MEASURE")
      ->capture_default_str();
  analyze->add_option("--out", an_out, "Report JSON");

  // sweep
  auto* sweep_cmd = app.add_subcommand("sweep", "TIR/AIR over a grid of m and tau");
  InputFlags sw_in;
  EmbeddingFlags sw_emb;
  std::string sw_m = "2..6", sw_tau = "1..5", sw_measure = "both", sw_out, sw_report;
  sw_in.add_to(*sweep_cmd);
  sw_emb.add_to(*sweep_cmd, false);
  sweep_cmd->add_option("--m", sw_m, "Dimension range a..b")->envname("IRREV_M")->capture_default_str();
  sweep_cmd->add_option("--tau", sw_tau, "Delay range a..b")->envname("IRREV_TAU")->capture_default_str();
  sweep_cmd->add_option("--measure", sw_measure, "tir | air | both")
      ->envname("IRREV_MEASURE")
      ->capture_default_str();
  sweep_cmd->add_option("--out", sw_out, "Output CSV table")->required();
  sweep_cmd->add_option("--report", sw_report, "Also write a JSON report");

  // surrogate-test
  auto* surr = app.add_subcommand("surrogate-test", "IAAFT surrogate significance test");
  InputFlags su_in;
  EmbeddingFlags su_emb;
  std::string su_measure = "both", su_out;
  std::optional<std::uint64_t> su_seed;
  IaaftParams su_params;
  su_params.n_surrogates = 500;
  su_in.add_to(*surr);
  su_emb.add_to(*surr);
  surr->add_option("--measure", su_measure, "tir | air | both")
      ->envname("IRREV_MEASURE")
      ->capture_default_str();
  surr->add_option("--n-surrogates", su_params.n_surrogates, "Ensemble size")
      ->envname("IRREV_N_SURROGATES")
      ->capture_default_str();
  surr->add_option("--max-iterations", su_params.max_iterations, "IAAFT iteration cap")
      ->envname("IRREV_MAX_ITERATIONS")
      ->capture_default_str();
  surr->add_option("--threads", su_params.threads, "OpenMP threads (0 = default)")
      ->envname("IRREV_THREADS")
      ->capture_default_str();
  surr->add_option("--seed", su_seed, "Ensemble seed (required)")->envname("IRREV_SEED");
  surr->add_option("--out", su_out, "Report JSON");

  // repro-models
  auto* repro = app.add_subcommand("repro-models",
                                   "Logistic/Henon/Gaussian benchmark with surrogate bands");
  std::string re_dir;
  std::optional<std::uint64_t> re_seed;
  IaaftParams re_params;
  re_params.n_surrogates = 100;
  std::size_t re_n = reference_length();
  int re_m_max = 7;
  repro->add_option("--out-dir", re_dir, "Output directory")->required();
  repro->add_option("--seed", re_seed, "Seed for the Gaussian series and surrogates (required)")
      ->envname("IRREV_SEED");
  repro->add_option("--n-surrogates", re_params.n_surrogates, "Ensemble size per series")
      ->envname("IRREV_N_SURROGATES")
      ->capture_default_str();
  repro->add_option("--max-iterations", re_params.max_iterations, "IAAFT iteration cap")
      ->envname("IRREV_MAX_ITERATIONS")
      ->capture_default_str();
  repro->add_option("--threads", re_params.threads, "OpenMP threads (0 = default)")
      ->envname("IRREV_THREADS")
      ->capture_default_str();
  repro->add_option("--n", re_n, "Series length")->envname("IRREV_N")->capture_default_str();
  repro->add_option("--m-max", re_m_max, "Largest dimension (from 2)")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  const std::string command = join_args(argc, argv);
  try {
    if (*gen) {
      spec.kind = model_kind_from_string(gen_kind);
      spec.logistic.x1 = spec.henon.x1 = x1;
      spec.henon.y1 = y1;
      spec.gaussian.seed = gen_seed;
      spec.validate();
      const auto series = generate(spec);
      write_series(series, gen_out);
      out << to_string(spec.kind) << ' ' << series.size() << ' '
          << (gen_seed ? std::to_string(*gen_seed) : "none") << '\n';
      return kExitOk;
    }

    if (*analyze) {
      const auto config = an_emb.config();
      const auto kinds = parse_kinds(an_measure);
      const auto file = an_in.file();
      const auto series = read_series(file);
      ReportDocument doc;
      doc.provenance.source = an_in.path;
      doc.provenance.command = command;
      for (MeasureKind kind : kinds) {
        doc.reports.push_back(measure(series, config, kind));
        print_report_line(out, doc.reports.back());
      }
      if (!an_out.empty()) write_report(doc, an_out);
      return kExitOk;
    }

    if (*sweep_cmd) {
      const auto m_range = IntRange::parse(sw_m);
      const auto tau_range = IntRange::parse(sw_tau);
      const auto kinds = parse_kinds(sw_measure);
      // Validate every cell's configuration before reading data.
      EmbeddingFlags probe = sw_emb;
      probe.m = m_range.first;
      probe.tau = tau_range.first;
      const auto base = probe.config();
      EmbeddingConfig{m_range.last, tau_range.last, base.scheme, base.tie_epsilon}.validate();
      const auto series = read_series(sw_in.file());
      const auto reports = sweep(series, m_range, tau_range, base.scheme, kinds, base.tie_epsilon);
      write_text_file(sw_out, render_sweep_csv(reports));
      for (const auto& r : reports) print_report_line(out, r);
      if (!sw_report.empty()) {
        ReportDocument doc;
        doc.provenance.source = sw_in.path;
        doc.provenance.command = command;
        doc.reports = reports;
        write_report(doc, sw_report);
      }
      return kExitOk;
    }

    if (*surr) {
      if (!su_seed) {
        err << "surrogate-test: --seed (or IRREV_SEED) is required\n";
        return kExitUsage;
      }
      const auto config = su_emb.config();
      const auto kinds = parse_kinds(su_measure);
      su_params.seed = *su_seed;
      su_params.validate();
      const auto series = read_series(su_in.file());
      std::vector<MeasureCell> cells;
      for (MeasureKind kind : kinds) cells.push_back({config, kind});
      ReportDocument doc;
      doc.provenance.source = su_in.path;
      doc.provenance.command = command;
      doc.provenance.seed = su_params.seed;
      doc.verdicts = significance_tests(series, cells, su_params);
      for (MeasureKind kind : kinds) doc.reports.push_back(measure(series, config, kind));
      for (const auto& v : doc.verdicts) {
        out << to_string(v.kind) << ' ' << v.config.m << ' ' << v.config.tau << ' '
            << format_double(v.original_value) << ' ' << format_double(v.p2_5) << ' '
            << format_double(v.p97_5) << ' ' << (v.significant_above ? "above" : "-") << ' '
            << (v.significant_below ? "below" : "-") << '\n';
      }
      if (!su_out.empty()) write_report(doc, su_out);
      return kExitOk;
    }

    if (*repro) {
      if (!re_seed) {
        err << "repro-models: --seed (or IRREV_SEED) is required\n";
        return kExitUsage;
      }
      if (re_m_max < 2 || re_m_max > kMaxDimension)
        throw Error(ErrorCode::InvalidParams, "--m-max must lie in [2, 16]");
      re_params.seed = *re_seed;
      re_params.validate();
      const fs::path dir = re_dir;
      std::error_code ec;
      fs::create_directories(dir, ec);
      if (ec) throw Error(ErrorCode::IoError, "cannot create '" + re_dir + "': " + ec.message());

      std::vector<ModelSpec> specs(3);
      specs[0].kind = ModelKind::logistic;
      specs[1].kind = ModelKind::henon;
      specs[2].kind = ModelKind::gaussian;
      specs[2].gaussian.seed = *re_seed;
      for (auto& s : specs) s.n = re_n;

      ReportDocument doc;
      doc.provenance.source = "models";
      doc.provenance.command = command;
      doc.provenance.seed = *re_seed;
      doc.provenance.parameters["tau"] = "1";
      doc.provenance.parameters["scheme"] = "equal-value";
      doc.provenance.parameters["n_surrogates"] = std::to_string(re_params.n_surrogates);

      std::vector<ModelRun> runs;
      for (const auto& s : specs) {
        ModelRun run;
        run.name = std::string(to_string(s.kind));
        run.series = generate(s);
        doc.provenance.parameters["model." + run.name] = s.describe();
        write_series(run.series, dir / (run.name + ".txt"));

        std::vector<MeasureCell> cells;
        for (MeasureKind kind : {MeasureKind::TIR, MeasureKind::AIR})
          for (int m = 2; m <= re_m_max; ++m)
            cells.push_back({EmbeddingConfig{m, 1, TieScheme::equal_value, 0.0}, kind});
        for (const auto& cell : cells) run.reports.push_back(measure(run.series, cell.config, cell.kind));
        run.verdicts = significance_tests(run.series, cells, re_params);

        doc.reports.insert(doc.reports.end(), run.reports.begin(), run.reports.end());
        doc.verdicts.insert(doc.verdicts.end(), run.verdicts.begin(), run.verdicts.end());
        runs.push_back(std::move(run));
        // Flush after each model so a later failure keeps finished results.
        write_text_file(dir / "models.csv", render_model_table(runs));
        write_report(doc, dir / "report.json");
        for (const auto& r : runs.back().reports) {
          out << runs.back().name << ' ';
          print_report_line(out, r);
        }
      }

      const auto checks = model_checks(runs, re_m_max);
      int passed = 0;
      for (const auto& c : checks) {
        out << (c.passed ? "PASS " : "FAIL ") << c.name << ' ' << c.detail << '\n';
        passed += c.passed;
      }
      out << "checks " << passed << '/' << checks.size() << '\n';
      return kExitOk;
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e.code());
  }
  return kExitUsage;
}

}  // namespace irrev::cli
