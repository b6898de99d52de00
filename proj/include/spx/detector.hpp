#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "spx/image.hpp"
#include "spx/quality.hpp"

namespace spx {

/// Black-box object detector. `presence` is a side channel carrying the
/// presence vector that produced `image`; only synthetic detectors read it.
class Detector {
 public:
  virtual ~Detector() = default;
  virtual std::vector<Detection> detect(const Image& image, std::span<const double> presence) = 0;
  /// False when the output never depends on pixels, letting callers skip rendering.
  virtual bool needs_pixels() const { return true; }
};

// ---------------------------------------------------------------------------
// Synthetic detectors

struct LinearForm {
  std::vector<double> weights;
  double bias = 0;
};

struct ProductTerm {
  double coefficient = 1;
  std::vector<std::size_t> parts;
};

/// bias + sum_t coefficient_t * prod_{i in parts_t} presence_i
struct ProductForm {
  std::vector<ProductTerm> terms;
  double bias = 0;
};

/// Score = mean brightness inside the ground-truth box, in [0, 1].
struct PixelMeanForm {};

struct SyntheticDetectorSpec {
  std::variant<LinearForm, ProductForm, PixelMeanForm> form;
  BBox gt_bbox;
  std::string label = "pedestrian";
};

/// Value of a presence-driven form before clamping.
double synthetic_value(const LinearForm& form, std::span<const double> presence);
double synthetic_value(const ProductForm& form, std::span<const double> presence);

/// Mean of (r+g+b)/3/255 over pixels whose centres lie inside `box`.
double mean_brightness(const Image& image, const BBox& box);

class SyntheticDetector final : public Detector {
 public:
  explicit SyntheticDetector(SyntheticDetectorSpec spec);

  std::vector<Detection> detect(const Image& image, std::span<const double> presence) override;
  bool needs_pixels() const override;

  /// Clamped score for a presence vector (presence-driven forms only).
  double score(std::span<const double> presence) const;
  const SyntheticDetectorSpec& spec() const noexcept { return spec_; }

 private:
  SyntheticDetectorSpec spec_;
};

/// Parses the body of a `synthetic:` detector argument:
///   linear:w=0.3,0.7;b=0.1
///   product:terms=1@0+1/0.5@2;b=0
///   pixelmean
///   file=<path.json>
SyntheticDetectorSpec parse_synthetic_spec(std::string_view text, const BBox& gt);
SyntheticDetectorSpec synthetic_spec_from_json(const std::string& json_text, const BBox& gt);

// ---------------------------------------------------------------------------
// External detectors, wire protocol spx/1

inline constexpr std::string_view kProtocolVersion = "spx/1";
inline constexpr std::chrono::milliseconds kDefaultDetectorTimeout{30000};

std::string base64_encode(std::span<const std::uint8_t> bytes);
std::vector<std::uint8_t> base64_decode(std::string_view text);

std::string encode_request(std::uint64_t id, const Image& image);
std::string encode_response(std::uint64_t id, std::span<const Detection> detections);
/// Throws ProtocolError on malformed JSON, schema violations, or id mismatch.
std::vector<Detection> parse_response(std::string_view line, std::uint64_t expected_id);
/// Returns the announced version; throws VersionMismatch on a different major.
std::string parse_handshake(std::string_view line);

/// Child process speaking newline-delimited JSON over stdin/stdout.
class ChildProcess {
 public:
  explicit ChildProcess(const std::string& command);
  ~ChildProcess();
  ChildProcess(const ChildProcess&) = delete;
  ChildProcess& operator=(const ChildProcess&) = delete;

  void write_line(const std::string& line);
  /// Throws Timeout, or DetectorCrash when the child closes its output.
  std::string read_line(std::chrono::milliseconds timeout);

 private:
  int pid_ = -1;
  int to_child_ = -1;
  int from_child_ = -1;
  std::string buffer_;
};

class ExternalDetector final : public Detector {
 public:
  ExternalDetector(const std::string& command,
                   std::chrono::milliseconds timeout = kDefaultDetectorTimeout);

  /// Reads the child's first line; must be called before detect().
  std::string handshake();
  std::vector<Detection> detect(const Image& image, std::span<const double> presence) override;

 private:
  ChildProcess process_;
  std::chrono::milliseconds timeout_;
  std::uint64_t next_id_ = 0;
  bool ready_ = false;
};

/// Builds a detector per worker for a given instance ground truth.
using DetectorFactory = std::function<std::unique_ptr<Detector>(const BBox& gt)>;

/// `synthetic:<spec>` or a shell command line for an spx/1 adapter.
DetectorFactory make_detector_factory(const std::string& spec,
                                      std::chrono::milliseconds timeout = kDefaultDetectorTimeout);

}  // namespace spx
