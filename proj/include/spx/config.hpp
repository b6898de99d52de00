#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "spx/explain.hpp"
#include "spx/reporting.hpp"

namespace spx {

/// Everything a CLI command needs, validated before any work starts.
struct RunConfig {
  std::string command;
  std::string image;
  std::string segmentation;
  std::string gt;
  std::string detector = "synthetic:pixelmean";
  std::string method = "kernelshap";
  std::string masking = "inpaint";
  int abstraction = 0;
  std::size_t samples = 2048;
  std::uint64_t seed = 0;
  std::string out = ".";
  int workers = 1;
  double min_score = 0.0;
  std::string match_label;
  bool resample_noise = false;
  std::string band = "instances";
  int bootstrap_rounds = 4;
  double bootstrap_fraction = 0.75;
  double alpha = 0.2;
  double beta = 0.1;
  double timeout_s = 30.0;
};

/// Throws ConfigError on any invalid enumeration or range.
void validate(const RunConfig& config);

/// Canonical JSON of the fields that affect results (output directory and
/// worker count excluded), keys sorted.
std::string canonical_config(const RunConfig& config);

/// First 16 hex digits of the SHA-256 of the canonical config.
std::string config_hash(const RunConfig& config);

ExplainConfig to_explain_config(const RunConfig& config);

std::string sha256_hex(const std::string& data);

}  // namespace spx
