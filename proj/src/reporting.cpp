#include "spx/reporting.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <map>
#include <optional>
#include <nlohmann/json.hpp>
#include <sstream>
#include <thread>

#include "spx/colormap.hpp"
#include "spx/error.hpp"
#include "spx/random.hpp"

namespace spx {

// Defined in the generated pictogram_templates.cpp.
extern const char* const kPictogramTemplates[3];

namespace {

std::uint8_t luminance(Rgb8 c) {
  return static_cast<std::uint8_t>(std::lround(0.299 * c.r + 0.587 * c.g + 0.114 * c.b));
}

std::uint8_t mix(std::uint8_t tint, std::uint8_t base) {
  return static_cast<std::uint8_t>(
      std::lround(kOverlayAlpha * tint + (1.0 - kOverlayAlpha) * base));
}

/// Grayscale base with each listed part tinted by `colors[k]`.
Image overlay(const Image& image, const SegmentationMap& map, const ExplanationReport& report,
              const std::vector<Rgb8>& colors) {
  if (image.width() != map.width() || image.height() != map.height()) {
    fail(ErrorCode::DimensionMismatch, "image and segmentation dimensions differ");
  }
  const auto active = active_parts(map);
  std::array<int, 256> slot;
  slot.fill(-1);
  for (std::size_t k = 0; k < report.parts.size(); ++k) {
    const auto& part = report.parts[k];
    const auto it = std::find_if(active.begin(), active.end(),
                                 [&](const ActivePart& a) { return a.label.id == part.id; });
    if (it == active.end() || it->label.name != part.name) {
      fail(ErrorCode::PartMismatch,
           "report part " + std::to_string(part.id) + " '" + part.name + "' is not in the map");
    }
    slot[part.id] = static_cast<int>(k);
  }

  Image out(image.width(), image.height());
  const auto& labels = map.labels();
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const auto g = luminance(image.at(i));
    const int k = slot[labels[i]];
    if (k < 0) {
      out.set(i, {g, g, g});
    } else {
      const auto c = colors[static_cast<std::size_t>(k)];
      out.set(i, {mix(c.r, g), mix(c.g, g), mix(c.b, g)});
    }
  }
  return out;
}

std::string hex_color(Rgb8 c) {
  char buf[8];
  std::snprintf(buf, sizeof(buf), "#%02x%02x%02x", c.r, c.g, c.b);
  return buf;
}

std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4g", v);
  return buf;
}

}  // namespace

RelevanceMap relevance_map(const Image& image, const SegmentationMap& map,
                           const ExplanationReport& report) {
  const auto& scores = report.result.scores;
  if (static_cast<std::size_t>(scores.size()) != report.parts.size()) {
    fail(ErrorCode::PartMismatch, "score count does not match part count");
  }
  RelevanceMap out;
  if (scores.size() > 0) {
    out.lower = scores.minCoeff();
    out.upper = scores.maxCoeff();
  }
  const double bound = scores.size() > 0 ? scores.cwiseAbs().maxCoeff() : 0.0;
  std::vector<Rgb8> colors;
  for (Eigen::Index k = 0; k < scores.size(); ++k) {
    colors.push_back(kDivergingTable[diverging_index(scores[k], bound)]);
  }
  out.image = overlay(image, map, report, colors);
  return out;
}

std::vector<std::uint8_t> render_relevance_map(const Image& image, const SegmentationMap& map,
                                               const ExplanationReport& report) {
  return encode_png_rgb(relevance_map(image, map, report).image);
}

RelevanceMap error_map(const Image& image, const SegmentationMap& map,
                       const ExplanationReport& report) {
  if (!report.result.errors) fail(ErrorCode::MissingErrors, "report carries no bootstrap errors");
  const auto& errors = *report.result.errors;
  if (static_cast<std::size_t>(errors.size()) != report.parts.size()) {
    fail(ErrorCode::PartMismatch, "error count does not match part count");
  }
  RelevanceMap out;
  if (errors.size() > 0) {
    out.lower = errors.minCoeff();
    out.upper = errors.maxCoeff();
  }
  const double scale = std::max(out.upper, kErrorScaleFloor);
  std::vector<Rgb8> colors;
  for (Eigen::Index k = 0; k < errors.size(); ++k) {
    colors.push_back(kSequentialTable[sequential_index(errors[k], scale)]);
  }
  out.image = overlay(image, map, report, colors);
  return out;
}

std::vector<std::uint8_t> render_error_map(const Image& image, const SegmentationMap& map,
                                           const ExplanationReport& report) {
  return encode_png_rgb(error_map(image, map, report).image);
}

std::vector<PartAggregate> aggregate_global(const std::vector<ExplanationReport>& reports,
                                            const std::vector<std::string>& vocabulary) {
  if (reports.empty()) fail(ErrorCode::EmptyInput, "no reports to aggregate");
  const int level = reports.front().abstraction;
  std::map<std::string, std::pair<double, std::size_t>> sums;
  for (const auto& r : reports) {
    if (r.abstraction != level) {
      fail(ErrorCode::MixedAbstraction, "reports mix abstraction levels " + std::to_string(level) +
                                            " and " + std::to_string(r.abstraction));
    }
    for (std::size_t k = 0; k < r.parts.size(); ++k) {
      auto& [sum, count] = sums[r.parts[k].name];
      sum += r.result.scores[static_cast<Eigen::Index>(k)];
      ++count;
    }
  }
  std::vector<PartAggregate> out;
  for (const auto& name : vocabulary) {
    PartAggregate a{name, std::nullopt, 0};
    if (const auto it = sums.find(name); it != sums.end()) {
      a.count = it->second.second;
      a.mean = it->second.first / static_cast<double>(a.count);
    }
    out.push_back(std::move(a));
  }
  for (const auto& [name, entry] : sums) {
    if (std::find(vocabulary.begin(), vocabulary.end(), name) == vocabulary.end()) {
      fail(ErrorCode::PartMismatch, "part '" + name + "' is not in the level vocabulary");
    }
  }
  return out;
}

std::string aggregate_json(const std::vector<PartAggregate>& aggregates, int level) {
  nlohmann::ordered_json parts = nlohmann::ordered_json::array();
  for (const auto& a : aggregates) {
    nlohmann::ordered_json p;
    p["name"] = a.name;
    p["mean"] = a.mean ? nlohmann::ordered_json(*a.mean) : nlohmann::ordered_json();
    p["count"] = a.count;
    parts.push_back(std::move(p));
  }
  nlohmann::ordered_json doc;
  doc["abstraction"] = level;
  doc["parts"] = std::move(parts);
  return doc.dump(2) + "\n";
}

std::string render_pictogram(const std::vector<PartAggregate>& aggregates, int level) {
  if (level < 1 || level > 3) {
    fail(ErrorCode::UnsupportedLevel, "no pictogram for abstraction level " + std::to_string(level));
  }
  std::string svg = kPictogramTemplates[level - 1];

  double lo = 0;
  double hi = 0;
  double bound = 0;
  bool any = false;
  for (const auto& a : aggregates) {
    if (!a.mean) continue;
    lo = any ? std::min(lo, *a.mean) : *a.mean;
    hi = any ? std::max(hi, *a.mean) : *a.mean;
    bound = std::max(bound, std::abs(*a.mean));
    any = true;
  }

  for (const auto& a : aggregates) {
    const std::string placeholder = "{{" + a.name + "}}";
    const auto pos = svg.find(placeholder);
    if (pos == std::string::npos) {
      fail(ErrorCode::PartMismatch, "pictogram has no region '" + a.name + "'");
    }
    const std::string fill =
        a.mean ? hex_color(kDivergingTable[diverging_index(*a.mean, bound)]) : "url(#hatch)";
    svg.replace(pos, placeholder.size(), fill);
  }
  // Regions without an aggregate entry are drawn as never observed.
  for (auto pos = svg.find("{{"); pos != std::string::npos; pos = svg.find("{{")) {
    const auto end = svg.find("}}", pos);
    svg.replace(pos, end + 2 - pos, "url(#hatch)");
  }

  std::ostringstream legend;
  legend << "  <defs>\n    <linearGradient id=\"legend\" x1=\"0\" x2=\"1\" y1=\"0\" y2=\"0\">\n";
  for (int i = 0; i <= 8; ++i) {
    const double t = any ? -bound + 2.0 * bound * i / 8.0 : 0.0;
    legend << "      <stop offset=\"" << i * 12.5 << "%\" stop-color=\""
           << hex_color(kDivergingTable[diverging_index(t, bound)]) << "\"/>\n";
  }
  legend << "    </linearGradient>\n  </defs>\n"
         << "  <rect x=\"20\" y=\"395\" width=\"160\" height=\"12\" fill=\"url(#legend)\" "
            "stroke=\"#404040\"/>\n"
         << "  <text x=\"20\" y=\"422\" font-size=\"11\" font-family=\"sans-serif\">"
         << format_number(-bound) << "</text>\n"
         << "  <text x=\"180\" y=\"422\" font-size=\"11\" font-family=\"sans-serif\" "
            "text-anchor=\"end\">"
         << format_number(bound) << "</text>\n"
         << "  <text x=\"100\" y=\"436\" font-size=\"10\" font-family=\"sans-serif\" "
            "text-anchor=\"middle\">min "
         << format_number(lo) << " / max " << format_number(hi) << "</text>";
  const std::string marker = "<!--LEGEND-->";
  svg.replace(svg.find(marker), marker.size(), legend.str());
  return svg;
}

// ---------------------------------------------------------------------------

Band parse_band(std::string_view name) {
  if (name == "instances") return Band::Instances;
  if (name == "seeds") return Band::Seeds;
  fail(ErrorCode::ConfigError, "unknown band '" + std::string(name) + "'");
}

std::vector<std::size_t> default_ladder() {
  std::vector<std::size_t> ladder;
  for (std::size_t n = 8; n <= 4096; n *= 2) ladder.push_back(n);
  return ladder;
}

void validate_ladder(const std::vector<std::size_t>& ladder) {
  if (ladder.empty()) fail(ErrorCode::ConfigError, "sample ladder is empty");
  for (std::size_t i = 0; i < ladder.size(); ++i) {
    const auto n = ladder[i];
    if (n < 2 || (n & (n - 1)) != 0) {
      fail(ErrorCode::ConfigError, "ladder entry " + std::to_string(n) + " is not a power of two");
    }
    if (i > 0 && n <= ladder[i - 1]) {
      fail(ErrorCode::ConfigError, "sample ladder must be strictly increasing");
    }
  }
}

namespace {

double mean_of(const std::vector<double>& v) {
  double s = 0;
  for (const double x : v) s += x;
  return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

double population_std(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  const double m = mean_of(v);
  double s = 0;
  for (const double x : v) s += (x - m) * (x - m);
  return std::sqrt(s / static_cast<double>(v.size()));
}

}  // namespace

ConvergenceTable run_convergence(const std::vector<Instance>& instances,
                                 const DetectorFactory& detector, const ConvergenceConfig& config) {
  validate_ladder(config.ladder);
  if (instances.empty()) fail(ErrorCode::EmptyInput, "no instances for the convergence run");
  if (config.seeds.empty()) fail(ErrorCode::ConfigError, "no seeds for the convergence run");

  ConvergenceTable table;
  const std::size_t n_inst = instances.size();
  const std::size_t n_seed = config.seeds.size();
  const int workers = std::max(1, config.base.workers);

  for (const auto method : config.methods) {
    for (const auto masking : config.maskings) {
      for (const auto level : config.levels) {
        for (const auto budget : config.ladder) {
          // reports[s * n_inst + i]
          std::vector<ExplanationReport> reports(n_seed * n_inst);
          std::vector<std::exception_ptr> errors(reports.size());
          auto work = [&](std::size_t worker) {
            for (std::size_t job = worker; job < reports.size(); job += static_cast<std::size_t>(workers)) {
              const std::size_t s = job / n_inst;
              const std::size_t i = job % n_inst;
              ExplainConfig cfg = config.base;
              cfg.method = method;
              cfg.masking = masking;
              cfg.abstraction = level;
              cfg.n_samples = budget;
              cfg.workers = 1;
              cfg.seed = derive_seed(config.seeds[s], {i});
              try {
                reports[job] = explain_instance(instances[i], detector, cfg);
              } catch (...) {
                errors[job] = std::current_exception();
              }
            }
          };
          if (workers == 1) {
            work(0);
          } else {
            std::vector<std::jthread> pool;
            for (int w = 0; w < workers; ++w) pool.emplace_back(work, static_cast<std::size_t>(w));
          }
          std::optional<std::string> underdetermined;
          for (const auto& e : errors) {
            if (!e) continue;
            try {
              std::rethrow_exception(e);
            } catch (const Error& err) {
              if (err.code() != ErrorCode::Underdetermined) throw;
              if (!underdetermined) underdetermined = err.what();
            }
          }
          if (underdetermined) {
            table.skipped.push_back({method, masking, level, budget, *underdetermined});
            continue;
          }

          // part id -> [seed][instance] score, NaN where inactive
          std::map<std::uint8_t, std::string> names;
          std::map<std::uint8_t, std::vector<double>> grid;
          for (std::size_t job = 0; job < reports.size(); ++job) {
            const auto& r = reports[job];
            for (std::size_t k = 0; k < r.parts.size(); ++k) {
              const auto id = r.parts[k].id;
              names.emplace(id, r.parts[k].name);
              auto& g = grid[id];
              if (g.empty()) g.assign(reports.size(), std::nan(""));
              g[job] = r.result.scores[static_cast<Eigen::Index>(k)];
            }
          }

          for (const auto& [id, g] : grid) {
            std::vector<double> means;
            std::vector<double> bands;
            std::vector<double> all;
            if (config.band == Band::Instances) {
              for (std::size_t s = 0; s < n_seed; ++s) {
                std::vector<double> v;
                for (std::size_t i = 0; i < n_inst; ++i) {
                  const double x = g[s * n_inst + i];
                  if (!std::isnan(x)) v.push_back(x);
                }
                if (v.empty()) continue;
                means.push_back(mean_of(v));
                bands.push_back(population_std(v));
              }
            } else {
              for (std::size_t i = 0; i < n_inst; ++i) {
                std::vector<double> v;
                for (std::size_t s = 0; s < n_seed; ++s) {
                  const double x = g[s * n_inst + i];
                  if (!std::isnan(x)) v.push_back(x);
                }
                if (v.empty()) continue;
                means.push_back(mean_of(v));
                bands.push_back(population_std(v));
              }
            }
            table.rows.push_back({method, masking, level, budget, id, names[id], mean_of(means),
                                  mean_of(bands)});
          }
        }
      }
    }
  }

  std::stable_sort(table.rows.begin(), table.rows.end(),
                   [](const ConvergenceRow& a, const ConvergenceRow& b) {
                     return std::tie(a.method, a.masking, a.level, a.n_samples, a.part_id) <
                            std::tie(b.method, b.masking, b.level, b.n_samples, b.part_id);
                   });
  return table;
}

std::string convergence_csv(const ConvergenceTable& table) {
  std::ostringstream out;
  out << "method,masking,level,n_samples,part_id,part_name,mean_score,std\n";
  char buf[64];
  for (const auto& r : table.rows) {
    out << method_name(r.method) << ',' << masking_name(r.masking) << ',' << r.level << ','
        << r.n_samples << ',' << static_cast<int>(r.part_id) << ',' << r.part_name << ',';
    std::snprintf(buf, sizeof(buf), "%.17g", r.mean_score);
    out << buf << ',';
    std::snprintf(buf, sizeof(buf), "%.17g", r.std);
    out << buf << '\n';
  }
  return out.str();
}

ConvergenceTable parse_convergence_csv(const std::string& text) {
  ConvergenceTable table;
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) ||
      line != "method,masking,level,n_samples,part_id,part_name,mean_score,std") {
    fail(ErrorCode::IoError, "unexpected convergence CSV header");
  }
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ls(line);
    for (std::string cell; std::getline(ls, cell, ',');) f.push_back(cell);
    if (f.size() != 8) fail(ErrorCode::IoError, "convergence CSV row needs 8 fields: " + line);
    try {
      ConvergenceRow r;
      r.method = parse_method(f[0]);
      r.masking = parse_masking(f[1]);
      r.level = std::stoi(f[2]);
      r.n_samples = std::stoull(f[3]);
      r.part_id = static_cast<std::uint8_t>(std::stoi(f[4]));
      r.part_name = f[5];
      r.mean_score = std::stod(f[6]);
      r.std = std::stod(f[7]);
      table.rows.push_back(std::move(r));
    } catch (const std::logic_error&) {
      fail(ErrorCode::IoError, "malformed convergence CSV row: " + line);
    }
  }
  return table;
}

std::string convergence_summary_json(const ConvergenceTable& table) {
  std::map<std::pair<Method, std::size_t>, std::vector<double>> bands;
  for (const auto& r : table.rows) bands[{r.method, r.n_samples}].push_back(r.std);

  nlohmann::ordered_json entries = nlohmann::ordered_json::array();
  bool beta_monotone = true;
  bool beta_seen = false;
  double previous = 0;
  for (const auto& [key, values] : bands) {
    const double band = mean_of(values);
    nlohmann::ordered_json e;
    e["method"] = method_name(key.first);
    e["n_samples"] = key.second;
    e["mean_band"] = band;
    entries.push_back(std::move(e));
    if (key.first == Method::BetaSampling) {
      if (beta_seen && band > previous) beta_monotone = false;
      previous = band;
      beta_seen = true;
    }
  }
  nlohmann::ordered_json skipped = nlohmann::ordered_json::array();
  for (const auto& c : table.skipped) {
    nlohmann::ordered_json e;
    e["method"] = method_name(c.method);
    e["masking"] = masking_name(c.masking);
    e["level"] = c.level;
    e["n_samples"] = c.n_samples;
    e["reason"] = c.reason;
    skipped.push_back(std::move(e));
  }
  nlohmann::ordered_json doc;
  doc["bands"] = std::move(entries);
  doc["beta_bands_non_increasing"] = beta_seen && beta_monotone;
  doc["skipped"] = std::move(skipped);
  return doc.dump(2) + "\n";
}

}  // namespace spx
