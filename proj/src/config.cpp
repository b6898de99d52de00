#include "spx/config.hpp"

#include <openssl/evp.h>

#include <cstdio>
#include <nlohmann/json.hpp>

#include "spx/error.hpp"

namespace spx {

void validate(const RunConfig& c) {
  auto bad = [](const std::string& why) { fail(ErrorCode::ConfigError, why); };
  const auto method = parse_method(c.method);
  if (method == Method::ExactOracle) bad("--method must be kernelshap or beta");
  parse_masking(c.masking);
  parse_band(c.band);
  AbstractionLevel{c.abstraction};
  if (c.samples < 2) bad("--samples must be at least 2");
  if (c.workers < 1) bad("--workers must be at least 1");
  if (!(c.min_score >= 0.0 && c.min_score <= 1.0)) bad("--min-score must lie in [0, 1]");
  if (c.bootstrap_rounds < 1) bad("--bootstrap-rounds must be at least 1");
  if (!(c.bootstrap_fraction > 0.0 && c.bootstrap_fraction <= 1.0)) {
    bad("--bootstrap-fraction must lie in (0, 1]");
  }
  if (!(c.alpha > 0.0) || !(c.beta > 0.0)) bad("--alpha and --beta must be positive");
  if (!(c.timeout_s > 0.0)) bad("--timeout must be positive");
}

std::string canonical_config(const RunConfig& c) {
  // nlohmann::json objects keep keys sorted.
  const nlohmann::json doc = {
      {"command", c.command},
      {"image", c.image},
      {"segmentation", c.segmentation},
      {"gt", c.gt},
      {"detector", c.detector},
      {"method", c.method},
      {"masking", c.masking},
      {"abstraction", c.abstraction},
      {"samples", c.samples},
      {"seed", c.seed},
      {"min_score", c.min_score},
      {"match_label", c.match_label},
      {"resample_noise", c.resample_noise},
      {"band", c.band},
      {"bootstrap_rounds", c.bootstrap_rounds},
      {"bootstrap_fraction", c.bootstrap_fraction},
      {"alpha", c.alpha},
      {"beta", c.beta},
  };
  return doc.dump();
}

std::string sha256_hex(const std::string& data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    fail(ErrorCode::IoError, "sha256 digest failed");
  }
  std::string hex;
  char buf[3];
  for (unsigned int i = 0; i < len; ++i) {
    std::snprintf(buf, sizeof(buf), "%02x", digest[i]);
    hex += buf;
  }
  return hex;
}

std::string config_hash(const RunConfig& config) {
  return sha256_hex(canonical_config(config)).substr(0, 16);
}

ExplainConfig to_explain_config(const RunConfig& c) {
  ExplainConfig e;
  e.method = parse_method(c.method);
  e.masking = parse_masking(c.masking);
  e.abstraction = c.abstraction;
  e.n_samples = c.samples;
  e.seed = c.seed;
  e.beta = {c.alpha, c.beta};
  e.bootstrap = {c.bootstrap_rounds, c.bootstrap_fraction};
  e.match.min_score = c.min_score;
  if (!c.match_label.empty()) e.match.label = c.match_label;
  e.resample_noise = c.resample_noise;
  e.workers = c.workers;
  return e;
}

}  // namespace spx
