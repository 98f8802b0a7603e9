#include "cli.hpp"

#include <chrono>
#include <filesystem>
#include <iomanip>
#include <map>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <CLI11.hpp>

#include <esshist/esshist.hpp>

namespace esshist::cli {
namespace {

namespace fs = std::filesystem;

// Bad flag values that CLI11 cannot check on its own.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Calibration {
  std::size_t reps = kDefaultReps;
  std::uint64_t seed = 1;
  std::string cache_dir;
};

void add_calibration_flags(CLI::App* cmd, Calibration& c, const char* reps_flag,
                           const char* seed_flag) {
  cmd->add_option(reps_flag, c.reps, "Monte-Carlo repetitions for the threshold table")
      ->capture_default_str();
  cmd->add_option(seed_flag, c.seed, "Seed of the threshold simulation")->capture_default_str();
  cmd->add_option("--cache-dir", c.cache_dir,
                  "Quantile cache directory (default: $ESSHIST_CACHE_DIR, then the user cache)");
}

QuantileCache open_cache(const Calibration& c) {
  return QuantileCache(c.cache_dir.empty() ? QuantileCache::default_dir() : fs::path(c.cache_dir));
}

QuantileTable calibrated_table(std::size_t n, const Calibration& c, std::ostream& err) {
  const auto cache = open_cache(c);
  const auto grid = default_alpha_grid();
  if (auto table = cache.load(n, c.reps, c.seed, grid)) return *table;
  err << "warning: no cached quantile table for n=" << capped_size(n) << " (reps " << c.reps
      << ", seed " << c.seed << ") in " << cache.dir().string() << "; simulating it now\n";
  return cache.get_or_simulate(n, c.reps, c.seed, grid);
}

void check_alpha(double alpha) {
  const auto grid = default_alpha_grid();
  if (!(alpha >= grid.front() && alpha <= grid.back())) {
    std::ostringstream msg;
    msg << "alpha " << alpha << " outside the calibrated range [" << grid.front() << ", "
        << grid.back() << "]";
    throw UsageError(msg.str());
  }
}

std::string format_number(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

// out.json -> out_alpha0.1.json, out.features.json, ...
fs::path derived_path(const fs::path& base, const std::string& suffix) {
  auto name = base.stem().string() + suffix + base.extension().string();
  return base.parent_path() / name;
}

void check_format(const std::string& format) {
  if (format != "json" && format != "csv") throw UsageError("--format must be json or csv");
}

// Collects documents; writes each to its own file, or all of them to `out`.
class Emitter {
 public:
  Emitter(std::string base, std::string format, std::ostream& out)
      : base_(std::move(base)), format_(std::move(format)), out_(out) {}

  void add(const std::string& suffix, std::string text) {
    docs_.push_back({suffix, std::move(text)});
  }

  void flush() {
    if (!base_.empty()) {
      for (const auto& [suffix, text] : docs_) {
        write_text_file(derived_path(base_, suffix).string(), text);
      }
      return;
    }
    if (docs_.size() == 1) {
      out_ << docs_.front().second;
      if (format_ == "json") out_ << '\n';
      return;
    }
    if (format_ == "csv") {
      for (std::size_t i = 0; i < docs_.size(); ++i) out_ << (i ? "\n" : "") << docs_[i].second;
      return;
    }
    out_ << "[\n";
    for (std::size_t i = 0; i < docs_.size(); ++i) {
      out_ << docs_[i].second << (i + 1 < docs_.size() ? ",\n" : "\n");
    }
    out_ << "]\n";
  }

 private:
  std::string base_;
  std::string format_;
  std::ostream& out_;
  std::vector<std::pair<std::string, std::string>> docs_;
};

SortedSample load_sample(const std::string& path, bool jitter, std::uint64_t seed) {
  return SortedSample(read_sample_file(path), jitter ? TiePolicy::kJitter : TiePolicy::kReject,
                      seed);
}

// ---------------------------------------------------------------------------

struct QuantileArgs {
  std::size_t n = 0;
  std::vector<double> alphas = default_alpha_grid();
  Calibration calibration;
  std::string out;
};

int cmd_quantile(const QuantileArgs& a, std::ostream& out, std::ostream& err) {
  if (a.calibration.reps < 100) throw UsageError("--reps must be at least 100");
  for (double alpha : a.alphas) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw UsageError("alphas must lie in (0,1)");
  }
  const auto cache = open_cache(a.calibration);
  bool simulated = false;
  const auto table =
      cache.get_or_simulate(a.n, a.calibration.reps, a.calibration.seed, a.alphas, &simulated);
  const auto path = cache.path_for(a.n, a.calibration.reps, a.calibration.seed, a.alphas);
  err << (simulated ? "wrote " : "cached ") << path.string() << '\n';
  if (!a.out.empty()) write_text_file(a.out, quantile_table_to_json(table));
  out << "alpha,kappa\n";
  for (std::size_t i = 0; i < table.alphas.size(); ++i) {
    out << format_number(table.alphas[i]) << ',' << std::setprecision(17) << table.kappas[i]
        << '\n';
  }
  return kOk;
}

struct FitArgs {
  std::string input;
  double alpha = 0.1;
  std::vector<double> alphas;
  Calibration calibration;
  std::string out;
  std::string format = "json";
  bool features = false;
  bool jitter = false;
};

int cmd_fit(const FitArgs& a, std::ostream& out, std::ostream& err) {
  check_format(a.format);
  const auto alphas = a.alphas.empty() ? std::vector<double>{a.alpha} : a.alphas;
  for (double alpha : alphas) check_alpha(alpha);
  const auto sample = load_sample(a.input, a.jitter, a.calibration.seed);
  const std::size_t n = sample.size();
  const bool trivial = IntervalSystem(n).empty();
  QuantileTable table;
  if (trivial) {
    err << "warning: n=" << n << " is too small for any multiscale interval; "
        << "returning a single bin\n";
  } else {
    table = calibrated_table(n, a.calibration, err);
  }
  Emitter emit(a.out, a.format, out);
  for (double alpha : alphas) {
    const std::string tag = alphas.size() > 1 ? "_alpha" + format_number(alpha) : "";
    const auto h = essential_histogram(sample, alpha, table);
    emit.add(tag, a.format == "json" ? histogram_to_json(h) : histogram_step_csv(h));
    err << "alpha=" << alpha << " bins=" << h.bins();
    if (a.features) {
      FeatureDocument doc;
      doc.alpha = alpha;
      doc.kappa = trivial ? 0.0 : lookup_kappa(table, alpha, n);
      doc.features = significant_feature_intervals(sample, alpha, table);
      std::tie(doc.modes_lb, doc.troughs_lb) = lower_bound_modes(doc.features);
      emit.add(tag + ".features", a.format == "json" ? features_to_json(doc) : features_csv(doc));
      err << " features=" << doc.features.size() << " modes_lb=" << doc.modes_lb
          << " troughs_lb=" << doc.troughs_lb;
    }
    err << '\n';
  }
  emit.flush();
  return kOk;
}

struct EvaluateArgs {
  std::string input;
  std::string hist;
  std::string method;
  double alpha = 0.1;
  std::size_t window = kDefaultMergeWindow;
  Calibration calibration;
  std::string out;
  std::string format = "json";
  bool jitter = false;
};

int cmd_evaluate(const EvaluateArgs& a, std::ostream& out, std::ostream& err) {
  check_format(a.format);
  check_alpha(a.alpha);
  if (a.hist.empty() == a.method.empty()) {
    throw UsageError("evaluate needs exactly one of --hist or --method");
  }
  if (a.window < 2) throw UsageError("--window must be at least 2");
  const auto sample = load_sample(a.input, a.jitter, a.calibration.seed);
  const auto estimator = a.hist.empty()
                             ? classical_histogram(sample, parse_classical_rule(a.method))
                             : histogram_from_json(read_text_file(a.hist));
  QuantileTable table;
  if (!IntervalSystem(sample.size()).empty()) table = calibrated_table(sample.size(), a.calibration, err);
  const auto report = audit(sample, estimator, a.alpha, table, a.window);
  const auto doc = make_audit_document(sample, report, a.alpha);
  Emitter emit(a.out, a.format, out);
  emit.add("", a.format == "json" ? audit_to_json(doc) : audit_csv(doc));
  emit.flush();
  err << "violations=" << report.violations.size() << " removable=" << report.removable.size()
      << '\n';
  return kOk;
}

struct SimulateArgs {
  std::string density;
  std::size_t n = 0;
  std::size_t reps = 100;
  std::vector<std::string> methods = {"essential", "sturges", "scott_width", "scott_area"};
  std::vector<double> alphas = {0.1};
  std::uint64_t seed = 1;
  Calibration calibration;
  std::size_t threads = 0;
  std::string out;
};

int cmd_simulate(const SimulateArgs& a, std::ostream& out, std::ostream& err) {
  const auto truth = density_by_name(a.density);
  if (a.n < 2) throw UsageError("--n must be at least 2");
  bool wants_essential = false;
  std::vector<ClassicalRule> rules;
  for (const auto& m : a.methods) {
    if (m == "essential" || m == "eh") {
      wants_essential = true;
    } else {
      try {
        rules.push_back(parse_classical_rule(m));
      } catch (const DataError&) {
        throw UsageError("unknown method '" + m + "'");
      }
    }
  }
  if (wants_essential) {
    for (double alpha : a.alphas) check_alpha(alpha);
  }
  QuantileTable table;
  if (wants_essential && !IntervalSystem(a.n).empty()) {
    table = calibrated_table(a.n, a.calibration, err);
  }

  struct Row {
    std::string method;
    double alpha;  // NaN for classical rules
    MetricSet m;
    double ms;
  };
  std::vector<std::vector<Row>> rows(a.reps);
  auto run_rep = [&](std::size_t rep) {
    const auto sample = truth.sample(a.seed, a.n, rep);
    auto timed = [&](auto&& fit) {
      const auto t0 = std::chrono::steady_clock::now();
      auto h = fit();
      const auto t1 = std::chrono::steady_clock::now();
      return std::make_pair(std::move(h),
                            std::chrono::duration<double, std::milli>(t1 - t0).count());
    };
    if (wants_essential) {
      for (double alpha : a.alphas) {
        auto [h, ms] = timed([&] { return essential_histogram(sample, alpha, table); });
        rows[rep].push_back({"essential", alpha, metrics(h, truth, {}), ms});
      }
    }
    for (auto rule : rules) {
      auto [h, ms] = timed([&] { return classical_histogram(sample, rule); });
      rows[rep].push_back({to_string(rule), std::nan(""), metrics(h, truth, {}), ms});
    }
  };
  std::size_t threads = a.threads ? a.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, std::max<std::size_t>(a.reps, 1));
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> failures(threads);
  for (std::size_t t = 0; t < threads; ++t) {
    pool.emplace_back([&, t] {
      try {
        for (std::size_t rep = t; rep < a.reps; rep += threads) run_rep(rep);
      } catch (...) {
        failures[t] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& f : failures) {
    if (f) std::rethrow_exception(f);
  }

  std::ostringstream csv;
  csv << "density,method,alpha,n,rep,n_bins,modes,troughs,mise_sq,kolmogorov,skewness,"
         "runtime_ms\n"
      << std::setprecision(10);
  struct Summary {
    double bins = 0, modes = 0, correct = 0, ise = 0;
  };
  std::map<std::pair<std::string, double>, Summary> summary;
  for (std::size_t rep = 0; rep < a.reps; ++rep) {
    for (const auto& r : rows[rep]) {
      csv << truth.name() << ',' << r.method << ',';
      if (std::isnan(r.alpha)) {
        csv << "NA";
      } else {
        csv << r.alpha;
      }
      csv << ',' << a.n << ',' << rep << ',' << r.m.n_bins << ',' << r.m.modes << ','
          << r.m.troughs << ',' << r.m.ise << ',' << r.m.kolmogorov << ',' << r.m.skewness << ','
          << r.ms << '\n';
      auto& s = summary[{r.method, std::isnan(r.alpha) ? -1.0 : r.alpha}];
      s.bins += r.m.n_bins;
      s.modes += r.m.modes;
      s.ise += r.m.ise;
      s.correct += (r.m.modes + r.m.troughs == truth.true_extrema()) ? 1 : 0;
    }
  }
  if (a.out.empty()) {
    out << csv.str();
  } else {
    write_text_file(a.out, csv.str());
  }
  const double reps = static_cast<double>(std::max<std::size_t>(a.reps, 1));
  for (const auto& [key, s] : summary) {
    err << key.first;
    if (key.second >= 0) err << " alpha=" << key.second;
    err << ": mean bins " << s.bins / reps << ", mean modes " << s.modes / reps
        << ", correct extrema " << s.correct / reps << ", mean ise " << s.ise / reps << '\n';
  }
  return kOk;
}

struct PlotArgs {
  std::string input;
  std::string out;
};

int cmd_plot_data(const PlotArgs& a, std::ostream& out, std::ostream&) {
  const auto text = read_text_file(a.input);
  std::string csv;
  switch (detect_document(text)) {
    case DocumentKind::kHistogram: csv = histogram_step_csv(histogram_from_json(text)); break;
    case DocumentKind::kFeatures: csv = features_csv(features_from_json(text)); break;
    case DocumentKind::kAudit: csv = audit_csv(audit_from_json(text)); break;
    default:
      throw DataError("plot-data reads histogram, feature or audit documents");
  }
  if (a.out.empty()) {
    out << csv;
  } else {
    write_text_file(a.out, csv);
  }
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Essential histograms: fewest-bin histograms inside a multiscale confidence set",
               "esshist"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "esshist 0.1.0");

  QuantileArgs qa;
  auto* quantile = app.add_subcommand("quantile", "Calibrate and cache the threshold table");
  quantile->add_option("--n", qa.n, "Sample size")->required();
  quantile->add_option("--alphas", qa.alphas, "Comma-separated significance levels")
      ->delimiter(',');
  add_calibration_flags(quantile, qa.calibration, "--reps", "--seed");
  quantile->add_option("--out", qa.out, "Also write the table document here");

  FitArgs fa;
  auto* fit = app.add_subcommand("fit", "Fit the essential histogram to a sample");
  fit->add_option("--input", fa.input, "Sample file, one value per line")->required();
  auto* fit_alpha = fit->add_option("--alpha", fa.alpha, "Significance level")->capture_default_str();
  fit->add_option("--alphas", fa.alphas, "Comma-separated levels; one document each")
      ->delimiter(',')
      ->excludes(fit_alpha);
  add_calibration_flags(fit, fa.calibration, "--reps", "--seed");
  fit->add_option("--out", fa.out, "Output file (derived names for extra documents)");
  fit->add_option("--format", fa.format, "json or csv")->capture_default_str();
  fit->add_flag("--features", fa.features, "Also report certified increases and decreases");
  fit->add_flag("--jitter", fa.jitter, "Spread tied values instead of rejecting them");

  EvaluateArgs ea;
  auto* evaluate = app.add_subcommand("evaluate", "Audit a histogram against the constraints");
  evaluate->add_option("--input", ea.input, "Sample file, one value per line")->required();
  evaluate->add_option("--hist", ea.hist, "Histogram document to audit");
  evaluate->add_option("--method", ea.method, "Audit a classical rule instead: sturges, "
                                              "scott_width or scott_area");
  evaluate->add_option("--alpha", ea.alpha, "Significance level")->capture_default_str();
  evaluate->add_option("--window", ea.window, "Largest merge counted for multiplicities")
      ->capture_default_str();
  add_calibration_flags(evaluate, ea.calibration, "--reps", "--seed");
  evaluate->add_option("--out", ea.out, "Output file");
  evaluate->add_option("--format", ea.format, "json or csv")->capture_default_str();
  evaluate->add_flag("--jitter", ea.jitter, "Spread tied values instead of rejecting them");

  SimulateArgs sa;
  auto* simulate = app.add_subcommand("simulate", "Benchmark estimators on a reference density");
  simulate->add_option("--density", sa.density, "Reference density name")->required();
  simulate->add_option("--n", sa.n, "Sample size")->required();
  simulate->add_option("--reps", sa.reps, "Replications")->capture_default_str();
  simulate->add_option("--methods", sa.methods,
                       "Comma-separated: essential, sturges, scott_width, scott_area")
      ->delimiter(',');
  simulate->add_option("--alphas", sa.alphas, "Levels for the essential histogram")
      ->delimiter(',');
  simulate->add_option("--seed", sa.seed, "Seed of the simulated samples")->capture_default_str();
  add_calibration_flags(simulate, sa.calibration, "--calibration-reps", "--calibration-seed");
  simulate->add_option("--threads", sa.threads, "Worker threads (0: all cores)");
  simulate->add_option("--out", sa.out, "CSV output file");

  PlotArgs pa;
  auto* plot = app.add_subcommand("plot-data", "Turn a document into plot-ready CSV");
  plot->add_option("--input", pa.input, "Histogram, feature or audit document")->required();
  plot->add_option("--out", pa.out, "CSV output file");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
    if (quantile->parsed()) return cmd_quantile(qa, out, err);
    if (fit->parsed()) return cmd_fit(fa, out, err);
    if (evaluate->parsed()) return cmd_evaluate(ea, out, err);
    if (simulate->parsed()) return cmd_simulate(sa, out, err);
    if (plot->parsed()) return cmd_plot_data(pa, out, err);
    return kUsage;
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const DataError& e) {
    err << "error: " << e.what() << '\n';
    return kDataError;
  } catch (const CalibrationError& e) {
    err << "error: " << e.what() << '\n';
    return kDataError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kNumericError;
  }
}

}  // namespace esshist::cli
