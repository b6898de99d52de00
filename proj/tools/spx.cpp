// spx: body-part relevance for black-box pedestrian detectors.

#include <glob.h>

#include <CLI11.hpp>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <nlohmann/json.hpp>
#include <sstream>

#include "spx/attribution.hpp"
#include "spx/config.hpp"
#include "spx/error.hpp"
#include "spx/explain.hpp"
#include "spx/fixtures.hpp"
#include "spx/reporting.hpp"

namespace fs = std::filesystem;

namespace {

enum class LogLevel { Error, Warn, Info, Debug };

LogLevel log_level() {
  const char* env = std::getenv("SPX_LOG");
  const std::string v = env ? env : "";
  if (v == "debug") return LogLevel::Debug;
  if (v == "info") return LogLevel::Info;
  if (v == "error") return LogLevel::Error;
  return LogLevel::Warn;
}

void log(LogLevel level, const std::string& message) {
  static const LogLevel threshold = log_level();
  if (level > threshold) return;
  static constexpr const char* names[] = {"error", "warn", "info", "debug"};
  std::cerr << "[spx " << names[static_cast<int>(level)] << "] " << message << '\n';
}

int report_error(spx::ErrorCode code, const std::string& message) {
  nlohmann::json err = {{"code", spx::error_code_name(code)}, {"message", message}};
  std::cerr << err.dump() << '\n';
  return spx::exit_status(code);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream in(s);
  for (std::string item; std::getline(in, item, ',');) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::vector<std::string> expand_globs(const std::vector<std::string>& patterns) {
  std::vector<std::string> out;
  for (const auto& pattern : patterns) {
    glob_t g{};
    if (::glob(pattern.c_str(), 0, nullptr, &g) == 0) {
      for (std::size_t i = 0; i < g.gl_pathc; ++i) out.emplace_back(g.gl_pathv[i]);
    }
    globfree(&g);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::chrono::milliseconds timeout_of(const spx::RunConfig& c) {
  return std::chrono::milliseconds(static_cast<long long>(c.timeout_s * 1000.0));
}

void cmd_explain(const spx::RunConfig& config) {
  spx::validate(config);
  if (config.image.empty() || config.segmentation.empty() || config.gt.empty()) {
    spx::fail(spx::ErrorCode::ConfigError, "explain needs --image, --segmentation and --gt");
  }
  const auto detector = spx::make_detector_factory(config.detector, timeout_of(config));
  const auto instance = spx::load_instance(config.image, config.segmentation, config.gt);
  const auto hash = spx::config_hash(config);
  log(LogLevel::Info, "explaining " + instance.name + " (config " + hash + ")");

  const auto report = spx::explain_instance(instance, detector, spx::to_explain_config(config), hash);
  const auto map = spx::remap_abstraction(instance.map, spx::AbstractionLevel(config.abstraction));

  const fs::path out(config.out);
  fs::create_directories(out);
  spx::write_file(out / "report.json", spx::report_json(report));
  spx::write_file(out / "relevance.png", spx::render_relevance_map(instance.image, map, report));
  if (report.result.errors) {
    spx::write_file(out / "error.png", spx::render_error_map(instance.image, map, report));
  }
  if (report.q_full != report.q_unperturbed) {
    log(LogLevel::Warn, "q at full presence differs from the unperturbed image");
  }
}

void cmd_aggregate(const std::vector<std::string>& patterns, const std::string& out_dir) {
  const auto files = expand_globs(patterns);
  if (files.empty()) spx::fail(spx::ErrorCode::EmptyInput, "no reports matched");
  std::vector<spx::ExplanationReport> reports;
  for (const auto& f : files) {
    const auto bytes = spx::read_file(f);
    reports.push_back(spx::parse_report_json(std::string(bytes.begin(), bytes.end())));
  }
  const int level = reports.front().abstraction;
  const auto vocabulary = spx::AbstractionTables::defaults().vocabulary(level);
  const auto aggregates = spx::aggregate_global(reports, vocabulary);

  const fs::path out(out_dir);
  fs::create_directories(out);
  spx::write_file(out / "aggregate.json", spx::aggregate_json(aggregates, level));
  if (level == 0) {
    log(LogLevel::Warn, "no pictogram template for level 0; wrote aggregate.json only");
    return;
  }
  spx::write_file(out / "pictogram.svg", spx::render_pictogram(aggregates, level));
}

struct ConvergenceArgs {
  std::string instances;
  std::size_t top = 20;
  std::string methods = "kernelshap,beta";
  std::string maskings = "inpaint,noise";
  std::string levels = "1,3";
  std::string ladder;
  int seeds = 1;
};

void cmd_convergence(const spx::RunConfig& config, const ConvergenceArgs& args) {
  spx::validate(config);
  spx::ConvergenceConfig cc;
  cc.methods.clear();
  for (const auto& m : split_list(args.methods)) cc.methods.push_back(spx::parse_method(m));
  cc.maskings.clear();
  for (const auto& m : split_list(args.maskings)) cc.maskings.push_back(spx::parse_masking(m));
  cc.levels.clear();
  for (const auto& l : split_list(args.levels)) {
    cc.levels.push_back(spx::AbstractionLevel(std::stoi(l)).level);
  }
  if (args.ladder.empty()) {
    cc.ladder = spx::default_ladder();
  } else {
    for (const auto& n : split_list(args.ladder)) cc.ladder.push_back(std::stoull(n));
  }
  spx::validate_ladder(cc.ladder);
  if (args.seeds < 1) spx::fail(spx::ErrorCode::ConfigError, "--seeds must be at least 1");
  cc.seeds.clear();
  for (int s = 0; s < args.seeds; ++s) cc.seeds.push_back(config.seed + static_cast<std::uint64_t>(s));
  cc.band = spx::parse_band(config.band);
  cc.base = spx::to_explain_config(config);
  for (const auto m : cc.methods) {
    if (m == spx::Method::ExactOracle) {
      spx::fail(spx::ErrorCode::ConfigError, "convergence methods are kernelshap and beta");
    }
  }

  if (args.instances.empty()) spx::fail(spx::ErrorCode::ConfigError, "convergence needs --instances");
  auto instances = spx::select_largest(spx::load_instance_dir(args.instances), args.top);
  if (instances.empty()) spx::fail(spx::ErrorCode::EmptyInput, "no instances in " + args.instances);
  log(LogLevel::Info, "convergence over " + std::to_string(instances.size()) + " instances");

  const auto detector = spx::make_detector_factory(config.detector, timeout_of(config));
  const auto table = spx::run_convergence(instances, detector, cc);
  const fs::path out(config.out);
  fs::create_directories(out);
  spx::write_file(out / "convergence.csv", spx::convergence_csv(table));
  spx::write_file(out / "summary.json", spx::convergence_summary_json(table));
}

void cmd_oracle(const spx::RunConfig& config, int parts) {
  constexpr std::string_view prefix = "synthetic:";
  if (!config.detector.starts_with(prefix)) {
    spx::fail(spx::ErrorCode::ConfigError, "oracle needs a synthetic:<spec> detector");
  }
  const auto spec = spx::parse_synthetic_spec(config.detector.substr(prefix.size()),
                                              spx::BBox{0, 0, 1, 1});
  int m = parts;
  if (const auto* lin = std::get_if<spx::LinearForm>(&spec.form)) {
    const int inferred = static_cast<int>(lin->weights.size());
    if (m >= 0 && m != inferred) {
      spx::fail(spx::ErrorCode::ConfigError, "--parts disagrees with the number of weights");
    }
    m = inferred;
  } else if (const auto* prod = std::get_if<spx::ProductForm>(&spec.form)) {
    int inferred = 0;
    for (const auto& t : prod->terms) {
      for (const auto i : t.parts) inferred = std::max(inferred, static_cast<int>(i) + 1);
    }
    if (m < 0) m = inferred;
    if (m < inferred) spx::fail(spx::ErrorCode::ConfigError, "--parts smaller than the terms use");
  } else {
    spx::fail(spx::ErrorCode::ConfigError, "oracle needs a linear or product detector");
  }
  if (m > spx::kMaxOracleParts) {
    spx::fail(spx::ErrorCode::TooManyParts, "oracle supports at most " +
                                                std::to_string(spx::kMaxOracleParts) + " parts");
  }
  spx::SyntheticDetector det(spec);
  const auto phi = spx::exact_shapley(m, [&](std::span<const double> p) { return det.score(p); });

  std::vector<double> ones(static_cast<std::size_t>(m), 1.0);
  std::vector<double> zeros(static_cast<std::size_t>(m), 0.0);
  nlohmann::ordered_json doc;
  doc["parts"] = m;
  doc["scores"] = std::vector<double>(phi.data(), phi.data() + phi.size());
  doc["value_full"] = det.score(ones);
  doc["value_empty"] = det.score(zeros);
  const fs::path out(config.out);
  fs::create_directories(out);
  spx::write_file(out / "oracle.json", doc.dump(2) + "\n");
}

void cmd_fixtures(const std::string& out_dir, int count, std::uint64_t seed) {
  if (count < 1) spx::fail(spx::ErrorCode::ConfigError, "--count must be at least 1");
  for (const auto& inst : spx::fixtures::pedestrians(count, seed)) {
    spx::write_instance(out_dir, inst);
  }
  const auto form = spx::fixtures::interaction_form();
  nlohmann::ordered_json terms = nlohmann::ordered_json::array();
  for (const auto& t : form.terms) terms.push_back({{"coef", t.coefficient}, {"parts", t.parts}});
  nlohmann::ordered_json doc;
  doc["form"] = "product";
  doc["bias"] = form.bias;
  doc["terms"] = std::move(terms);
  spx::write_file(fs::path(out_dir) / "interaction_detector.json", doc.dump(2) + "\n");
}

void add_common(CLI::App* app, spx::RunConfig& c) {
  app->add_option("--detector", c.detector, "synthetic:<spec> or adapter command line");
  app->add_option("--seed", c.seed, "base seed");
  app->add_option("--out", c.out, "output directory");
  app->add_option("--workers", c.workers, "parallel sample workers");
  app->add_option("--min-score", c.min_score, "ignore detections below this score");
  app->add_option("--match-label", c.match_label, "only match detections with this label");
  app->add_flag("--resample-noise", c.resample_noise, "draw fresh noise layers per sample");
  app->add_option("--bootstrap-rounds", c.bootstrap_rounds, "bootstrap regressions");
  app->add_option("--bootstrap-fraction", c.bootstrap_fraction, "bootstrap subset fraction");
  app->add_option("--alpha", c.alpha, "Beta concentration alpha");
  app->add_option("--beta", c.beta, "Beta concentration beta");
  app->add_option("--timeout", c.timeout_s, "detector request timeout in seconds");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Body-part relevance scores for black-box pedestrian detectors"};
  app.require_subcommand(1);

  spx::RunConfig config;

  auto* explain = app.add_subcommand("explain", "explain one instance");
  explain->add_option("--image", config.image, "RGB PNG")->required();
  explain->add_option("--segmentation", config.segmentation, "label PNG with .json sidecar")
      ->required();
  explain->add_option("--gt", config.gt, "ground-truth JSON")->required();
  explain->add_option("--abstraction", config.abstraction, "body-part level 0..3");
  explain->add_option("--method", config.method, "kernelshap | beta");
  explain->add_option("--masking", config.masking, "noise | neighbor | inpaint");
  explain->add_option("--samples", config.samples, "perturbation samples per instance");
  add_common(explain, config);

  std::vector<std::string> report_patterns;
  std::string aggregate_out = ".";
  auto* aggregate = app.add_subcommand("aggregate", "average reports into a pictogram");
  aggregate->add_option("reports", report_patterns, "report files or globs")->required();
  aggregate->add_option("--out", aggregate_out, "output directory");

  ConvergenceArgs conv;
  auto* convergence = app.add_subcommand("convergence", "sample-efficiency sweep");
  convergence->add_option("--instances", conv.instances, "fixture directory")->required();
  convergence->add_option("--top", conv.top, "largest instances by gt area");
  convergence->add_option("--methods", conv.methods, "comma list");
  convergence->add_option("--maskings", conv.maskings, "comma list");
  convergence->add_option("--levels", conv.levels, "comma list of abstraction levels");
  convergence->add_option("--ladder", conv.ladder, "comma list of powers of two");
  convergence->add_option("--seeds", conv.seeds, "number of seeds, counting up from --seed");
  convergence->add_option("--band", config.band, "instances | seeds");
  add_common(convergence, config);

  int oracle_parts = -1;
  auto* oracle = app.add_subcommand("oracle", "exact Shapley values of a synthetic detector");
  oracle->add_option("--detector", config.detector, "synthetic:<spec>")->required();
  oracle->add_option("--parts", oracle_parts, "part count for product detectors");
  oracle->add_option("--out", config.out, "output directory");

  std::string fixtures_out = "fixtures";
  int fixtures_count = 20;
  std::uint64_t fixtures_seed = 0;
  auto* fixtures = app.add_subcommand("fixtures", "synthetic test data");
  auto* generate = fixtures->add_subcommand("generate", "write synthetic pedestrians");
  fixtures->require_subcommand(1);
  generate->add_option("--out", fixtures_out, "output directory");
  generate->add_option("--count", fixtures_count, "number of instances");
  generate->add_option("--seed", fixtures_seed, "fixture seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return report_error(spx::ErrorCode::ConfigError, e.what());
  }

  try {
    if (*explain) {
      config.command = "explain";
      cmd_explain(config);
    } else if (*aggregate) {
      cmd_aggregate(report_patterns, aggregate_out);
    } else if (*convergence) {
      config.command = "convergence";
      cmd_convergence(config, conv);
    } else if (*oracle) {
      config.command = "oracle";
      cmd_oracle(config, oracle_parts);
    } else if (*generate) {
      cmd_fixtures(fixtures_out, fixtures_count, fixtures_seed);
    }
  } catch (const spx::Error& e) {
    return report_error(e.code(), e.what());
  } catch (const std::filesystem::filesystem_error& e) {
    return report_error(spx::ErrorCode::IoError, e.what());
  } catch (const std::invalid_argument& e) {
    return report_error(spx::ErrorCode::ConfigError, e.what());
  } catch (const std::out_of_range& e) {
    return report_error(spx::ErrorCode::ConfigError, e.what());
  }
  return 0;
}
