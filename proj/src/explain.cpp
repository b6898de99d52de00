#include "spx/explain.hpp"

#include <algorithm>
#include <exception>
#include <nlohmann/json.hpp>
#include <thread>

#include "spx/error.hpp"
#include "spx/random.hpp"

namespace spx {

using nlohmann::ordered_json;

std::filesystem::path sidecar_path(const std::filesystem::path& segmentation) {
  auto p = segmentation;
  return p.replace_extension(".json");
}

Instance load_instance(const std::filesystem::path& image, const std::filesystem::path& segmentation,
                       const std::filesystem::path& gt) {
  Instance inst;
  inst.name = image.filename().string();
  inst.image = read_png_rgb(image);
  inst.map = read_segmentation(segmentation, sidecar_path(segmentation));
  const auto gt_bytes = read_file(gt);
  inst.gt = parse_ground_truth(std::string(gt_bytes.begin(), gt_bytes.end()));
  if (inst.image.width() != inst.map.width() || inst.image.height() != inst.map.height()) {
    fail(ErrorCode::DimensionMismatch, "image and segmentation of " + inst.name + " differ in size");
  }
  return inst;
}

std::vector<Instance> load_instance_dir(const std::filesystem::path& dir) {
  std::vector<std::filesystem::path> images;
  std::error_code ec;
  for (const auto& entry : std::filesystem::directory_iterator(dir, ec)) {
    const auto& p = entry.path();
    if (p.extension() != ".png" || p.stem().extension() == ".seg") continue;
    images.push_back(p);
  }
  if (ec) fail(ErrorCode::IoError, "cannot list " + dir.string() + ": " + ec.message());
  std::sort(images.begin(), images.end());

  std::vector<Instance> out;
  for (const auto& img : images) {
    const auto stem = img.stem().string();
    const auto seg = dir / (stem + ".seg.png");
    const auto gt = dir / (stem + ".gt.json");
    if (!std::filesystem::exists(seg) || !std::filesystem::exists(gt)) continue;
    out.push_back(load_instance(img, seg, gt));
  }
  return out;
}

void write_instance(const std::filesystem::path& dir, const Instance& instance) {
  std::filesystem::create_directories(dir);
  const auto stem = std::filesystem::path(instance.name).stem().string();
  write_png_rgb(dir / (stem + ".png"), instance.image);
  write_segmentation(instance.map, dir / (stem + ".seg.png"), dir / (stem + ".seg.json"));
  write_file(dir / (stem + ".gt.json"), ground_truth_json(instance.gt));
}

std::vector<Instance> select_largest(std::vector<Instance> instances, std::size_t count) {
  std::stable_sort(instances.begin(), instances.end(), [](const Instance& a, const Instance& b) {
    if (a.gt.area() != b.gt.area()) return a.gt.area() > b.gt.area();
    return a.name < b.name;
  });
  if (instances.size() > count) instances.resize(count);
  return instances;
}

namespace {

/// Evaluates q for every presence row, one detector per worker. Results are
/// indexed by row so they do not depend on the worker count.
class SampleEvaluator {
 public:
  SampleEvaluator(const Instance& instance, const SegmentationMap& map,
                  const DetectorFactory& factory, const ExplainConfig& config)
      : instance_(instance), map_(map), config_(config) {
    const int workers = std::max(1, config.workers);
    for (int w = 0; w < workers; ++w) detectors_.push_back(factory(instance.gt));
    needs_pixels_ = detectors_.front()->needs_pixels();
    if (needs_pixels_) {
      layers_ = build_mask_layers(instance.image, map, masking_method(config.seed));
    }
  }

  /// `rows` presence rows; `render` says whether row r is masked (false renders
  /// the untouched image).
  std::vector<double> evaluate(const Eigen::MatrixXd& rows, const std::vector<bool>& render) {
    const auto n = static_cast<std::size_t>(rows.rows());
    std::vector<double> q(n, 0.0);
    std::vector<std::exception_ptr> errors(n);
    auto work = [&](std::size_t worker) {
      auto& detector = *detectors_[worker];
      for (std::size_t r = worker; r < n; r += detectors_.size()) {
        try {
          q[r] = evaluate_row(detector, rows.row(static_cast<Eigen::Index>(r)), render[r], r);
        } catch (...) {
          errors[r] = std::current_exception();
        }
      }
    };
    if (detectors_.size() == 1) {
      work(0);
    } else {
      std::vector<std::jthread> pool;
      for (std::size_t w = 0; w < detectors_.size(); ++w) pool.emplace_back(work, w);
    }
    for (const auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
    return q;
  }

 private:
  MaskingMethod masking_method(std::uint64_t seed) const {
    const auto noise_seed = derive_seed(seed, {kStreamNoise});
    switch (config_.masking) {
      case MaskingKind::RemainingNoise: return MaskingMethod::remaining_noise(noise_seed);
      case MaskingKind::NeighborNoise: return MaskingMethod::neighbor_noise(noise_seed);
      case MaskingKind::Inpaint: break;
    }
    return MaskingMethod::inpaint();
  }

  double evaluate_row(Detector& detector, const Eigen::RowVectorXd& row, bool render,
                      std::size_t index) const {
    const std::vector<double> presence(row.data(), row.data() + row.size());
    std::vector<Detection> dets;
    if (!needs_pixels_ || !render) {
      dets = detector.detect(instance_.image, presence);
    } else if (config_.resample_noise && config_.masking != MaskingKind::Inpaint) {
      const auto layers = build_mask_layers(
          instance_.image, map_,
          masking_method(derive_seed(config_.seed, {kStreamResample, index})));
      dets = detector.detect(apply_presence(instance_.image, map_, layers, presence), presence);
    } else {
      dets = detector.detect(apply_presence(instance_.image, map_, layers_, presence), presence);
    }
    return match_and_score(dets, instance_.gt, config_.match).value;
  }

  const Instance& instance_;
  const SegmentationMap& map_;
  const ExplainConfig& config_;
  std::vector<std::unique_ptr<Detector>> detectors_;
  std::vector<MaskLayer> layers_;
  bool needs_pixels_ = true;
};

}  // namespace

ExplanationReport explain_instance(const Instance& instance, const DetectorFactory& detector,
                                   const ExplainConfig& config, const std::string& config_hash) {
  if (instance.image.width() != instance.map.width() ||
      instance.image.height() != instance.map.height()) {
    fail(ErrorCode::DimensionMismatch, "image and segmentation dimensions differ");
  }
  if (config.method == Method::ExactOracle) {
    fail(ErrorCode::ConfigError, "the exact oracle is not a sampling method");
  }
  const auto map = remap_abstraction(instance.map, AbstractionLevel(config.abstraction));
  const auto active = active_parts(map);
  if (active.empty()) fail(ErrorCode::EmptyInput, "instance has no visible parts");
  const int parts = static_cast<int>(active.size());

  ExplanationReport report;
  report.abstraction = config.abstraction;
  report.masking = config.masking;
  report.n_samples = config.n_samples;
  report.seed = config.seed;
  report.config_hash = config_hash;
  for (const auto& p : active) report.parts.push_back({p.label.id, p.label.name, p.area});

  SampleSet samples;
  if (config.method == Method::KernelShap) {
    auto design = sample_coalitions(parts, config.n_samples, config.seed);
    samples.presence = std::move(design.presence);
    samples.weights = std::move(design.weights);
  } else {
    if (config.n_samples < static_cast<std::size_t>(parts) + 1) {
      fail(ErrorCode::Underdetermined, "beta regression needs at least " +
                                           std::to_string(parts + 1) + " samples for " +
                                           std::to_string(parts) + " parts");
    }
    samples.presence = sample_beta(parts, config.n_samples, config.beta, config.seed);
    samples.weights = Eigen::VectorXd::Ones(samples.presence.rows());
  }

  // Sample rows, then full, empty and unperturbed reference evaluations.
  const auto n = samples.presence.rows();
  Eigen::MatrixXd rows(n + 3, parts);
  rows.topRows(n) = samples.presence;
  rows.row(n).setOnes();
  rows.row(n + 1).setZero();
  rows.row(n + 2).setOnes();
  std::vector<bool> render(static_cast<std::size_t>(n + 3), true);
  render.back() = false;

  SampleEvaluator evaluator(instance, map, detector, config);
  const auto q = evaluator.evaluate(rows, render);
  samples.quality = Eigen::Map<const Eigen::VectorXd>(q.data(), n);
  report.q_full = q[static_cast<std::size_t>(n)];
  report.q_empty = q[static_cast<std::size_t>(n + 1)];
  report.q_unperturbed = q[static_cast<std::size_t>(n + 2)];

  if (config.method == Method::KernelShap) {
    report.result = solve_kernelshap(samples, report.q_full, report.q_empty);
  } else {
    report.result = bootstrap_errors(samples, Method::BetaSampling, config.seed, config.bootstrap);
  }
  report.result.seed = config.seed;
  report.result.n_samples = static_cast<std::size_t>(n);
  return report;
}

std::string report_json(const ExplanationReport& report) {
  ordered_json parts = ordered_json::array();
  for (std::size_t i = 0; i < report.parts.size(); ++i) {
    const auto k = static_cast<Eigen::Index>(i);
    ordered_json p;
    p["id"] = report.parts[i].id;
    p["name"] = report.parts[i].name;
    p["score"] = report.result.scores[k];
    p["error"] = report.result.errors ? ordered_json((*report.result.errors)[k]) : ordered_json();
    parts.push_back(std::move(p));
  }
  ordered_json doc;
  doc["method"] = method_name(report.result.method);
  doc["abstraction"] = report.abstraction;
  doc["masking"] = masking_name(report.masking);
  doc["n_samples"] = report.n_samples;
  doc["seed"] = report.seed;
  doc["parts"] = std::move(parts);
  doc["intercept"] = report.result.intercept;
  doc["q_full"] = report.q_full;
  doc["q_empty"] = report.q_empty;
  doc["q_unperturbed"] = report.q_unperturbed;
  doc["regularized"] = report.result.regularized;
  doc["config_hash"] = report.config_hash;
  return doc.dump(2) + "\n";
}

ExplanationReport parse_report_json(const std::string& text) {
  try {
    const auto doc = ordered_json::parse(text);
    ExplanationReport r;
    r.result.method = parse_method(doc.at("method").get<std::string>());
    r.abstraction = doc.at("abstraction").get<int>();
    r.masking = parse_masking(doc.at("masking").get<std::string>());
    r.n_samples = doc.at("n_samples").get<std::size_t>();
    r.seed = doc.at("seed").get<std::uint64_t>();
    r.result.n_samples = r.n_samples;
    r.result.seed = r.seed;
    const auto& parts = doc.at("parts");
    const auto m = static_cast<Eigen::Index>(parts.size());
    r.result.scores.resize(m);
    bool has_errors = m > 0;
    Eigen::VectorXd errors(m);
    for (Eigen::Index i = 0; i < m; ++i) {
      const auto& p = parts[static_cast<std::size_t>(i)];
      r.parts.push_back({p.at("id").get<std::uint8_t>(), p.at("name").get<std::string>(), 0});
      r.result.scores[i] = p.at("score").get<double>();
      if (p.at("error").is_null()) {
        has_errors = false;
      } else {
        errors[i] = p.at("error").get<double>();
      }
    }
    if (has_errors) r.result.errors = errors;
    r.result.intercept = doc.at("intercept").get<double>();
    r.q_full = doc.at("q_full").get<double>();
    r.q_empty = doc.at("q_empty").get<double>();
    r.q_unperturbed = doc.value("q_unperturbed", r.q_full);
    r.result.regularized = doc.value("regularized", false);
    r.config_hash = doc.value("config_hash", "");
    return r;
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::IoError, std::string("malformed report: ") + e.what());
  }
}

}  // namespace spx
