#include "spx/detector.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <cmath>
#include <nlohmann/json.hpp>
#include <sstream>

#include "spx/error.hpp"

namespace spx {

using nlohmann::json;

double synthetic_value(const LinearForm& form, std::span<const double> presence) {
  if (presence.size() != form.weights.size()) {
    fail(ErrorCode::LengthMismatch, "linear detector has " + std::to_string(form.weights.size()) +
                                        " weights for " + std::to_string(presence.size()) +
                                        " parts");
  }
  double v = form.bias;
  for (std::size_t i = 0; i < presence.size(); ++i) v += form.weights[i] * presence[i];
  return v;
}

double synthetic_value(const ProductForm& form, std::span<const double> presence) {
  double v = form.bias;
  for (const auto& term : form.terms) {
    double prod = term.coefficient;
    for (const auto i : term.parts) {
      if (i >= presence.size()) {
        fail(ErrorCode::LengthMismatch, "product term references part " + std::to_string(i) +
                                            " of " + std::to_string(presence.size()));
      }
      prod *= presence[i];
    }
    v += prod;
  }
  return v;
}

double mean_brightness(const Image& image, const BBox& box) {
  const int x0 = std::max(0, static_cast<int>(std::ceil(box.x1 - 0.5)));
  const int y0 = std::max(0, static_cast<int>(std::ceil(box.y1 - 0.5)));
  const int x1 = std::min(image.width(), static_cast<int>(std::ceil(box.x2 - 0.5)));
  const int y1 = std::min(image.height(), static_cast<int>(std::ceil(box.y2 - 0.5)));
  double sum = 0;
  std::size_t n = 0;
  for (int y = y0; y < y1; ++y) {
    for (int x = x0; x < x1; ++x) {
      const auto c = image.at(x, y);
      sum += (c.r + c.g + c.b) / 3.0;
      ++n;
    }
  }
  return n == 0 ? 0.0 : sum / (255.0 * static_cast<double>(n));
}

SyntheticDetector::SyntheticDetector(SyntheticDetectorSpec spec) : spec_(std::move(spec)) {
  if (!spec_.gt_bbox.well_formed()) {
    fail(ErrorCode::ConfigError, "synthetic detector needs a well-formed ground-truth box");
  }
}

bool SyntheticDetector::needs_pixels() const {
  return std::holds_alternative<PixelMeanForm>(spec_.form);
}

double SyntheticDetector::score(std::span<const double> presence) const {
  const double v = std::visit(
      [&](const auto& form) -> double {
        using T = std::decay_t<decltype(form)>;
        if constexpr (std::is_same_v<T, PixelMeanForm>) {
          fail(ErrorCode::ConfigError, "pixel-mean detector has no presence form");
        } else {
          return synthetic_value(form, presence);
        }
      },
      spec_.form);
  return std::clamp(v, 0.0, 1.0);
}

std::vector<Detection> SyntheticDetector::detect(const Image& image,
                                                 std::span<const double> presence) {
  const double s = needs_pixels() ? mean_brightness(image, spec_.gt_bbox) : score(presence);
  return {Detection{spec_.gt_bbox, std::clamp(s, 0.0, 1.0), spec_.label}};
}

namespace {

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(s.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

double to_double(std::string_view s) {
  std::string str(s);
  std::size_t used = 0;
  try {
    const double v = std::stod(str, &used);
    if (used == str.size() && std::isfinite(v)) return v;
  } catch (const std::exception&) {
  }
  fail(ErrorCode::ConfigError, "invalid number '" + str + "' in detector spec");
}

std::size_t to_index(std::string_view s) {
  const double v = to_double(s);
  if (v < 0 || v != std::floor(v)) {
    fail(ErrorCode::ConfigError, "invalid part index '" + std::string(s) + "'");
  }
  return static_cast<std::size_t>(v);
}

}  // namespace

SyntheticDetectorSpec parse_synthetic_spec(std::string_view text, const BBox& gt) {
  if (text == "pixelmean") return {PixelMeanForm{}, gt};
  if (text.starts_with("file=")) {
    const auto bytes = read_file(std::string(text.substr(5)));
    return synthetic_spec_from_json(std::string(bytes.begin(), bytes.end()), gt);
  }
  const auto colon = text.find(':');
  const auto kind = text.substr(0, colon);
  if (colon == std::string_view::npos || (kind != "linear" && kind != "product")) {
    fail(ErrorCode::ConfigError, "unknown synthetic detector '" + std::string(text) + "'");
  }

  double bias = 0;
  std::vector<double> weights;
  std::vector<ProductTerm> terms;
  for (const auto field : split(text.substr(colon + 1), ';')) {
    if (field.empty()) continue;
    const auto eq = field.find('=');
    if (eq == std::string_view::npos) {
      fail(ErrorCode::ConfigError, "expected key=value in '" + std::string(field) + "'");
    }
    const auto key = field.substr(0, eq);
    const auto value = field.substr(eq + 1);
    if (key == "b") {
      bias = to_double(value);
    } else if (key == "w" && kind == "linear") {
      for (const auto w : split(value, ',')) weights.push_back(to_double(w));
    } else if (key == "terms" && kind == "product") {
      for (const auto t : split(value, '/')) {
        const auto at = t.find('@');
        if (at == std::string_view::npos) {
          fail(ErrorCode::ConfigError, "product term needs coef@i+j: '" + std::string(t) + "'");
        }
        ProductTerm term{to_double(t.substr(0, at)), {}};
        for (const auto i : split(t.substr(at + 1), '+')) term.parts.push_back(to_index(i));
        terms.push_back(std::move(term));
      }
    } else {
      fail(ErrorCode::ConfigError, "unknown field '" + std::string(key) + "' for " +
                                       std::string(kind) + " detector");
    }
  }
  if (kind == "linear") return {LinearForm{std::move(weights), bias}, gt};
  return {ProductForm{std::move(terms), bias}, gt};
}

SyntheticDetectorSpec synthetic_spec_from_json(const std::string& json_text, const BBox& gt) {
  try {
    const auto doc = json::parse(json_text);
    const auto form = doc.at("form").get<std::string>();
    const double bias = doc.value("bias", 0.0);
    if (form == "linear") {
      return {LinearForm{doc.at("weights").get<std::vector<double>>(), bias}, gt};
    }
    if (form == "product") {
      ProductForm p{{}, bias};
      for (const auto& t : doc.at("terms")) {
        p.terms.push_back({t.at("coef").get<double>(), t.at("parts").get<std::vector<std::size_t>>()});
      }
      return {std::move(p), gt};
    }
    if (form == "pixelmean") return {PixelMeanForm{}, gt};
    fail(ErrorCode::ConfigError, "unknown synthetic form '" + form + "'");
  } catch (const json::exception& e) {
    fail(ErrorCode::ConfigError, std::string("malformed synthetic spec: ") + e.what());
  }
}

// ---------------------------------------------------------------------------

std::string base64_encode(std::span<const std::uint8_t> bytes) {
  std::string out(4 * ((bytes.size() + 2) / 3), '\0');
  const int n = EVP_EncodeBlock(reinterpret_cast<unsigned char*>(out.data()), bytes.data(),
                                static_cast<int>(bytes.size()));
  out.resize(static_cast<std::size_t>(n));
  return out;
}

std::vector<std::uint8_t> base64_decode(std::string_view text) {
  if (text.size() % 4 != 0) fail(ErrorCode::ProtocolError, "base64 length not a multiple of 4");
  std::vector<std::uint8_t> out(3 * text.size() / 4);
  const int n = EVP_DecodeBlock(out.data(), reinterpret_cast<const unsigned char*>(text.data()),
                                static_cast<int>(text.size()));
  if (n < 0) fail(ErrorCode::ProtocolError, "invalid base64 payload");
  std::size_t padding = 0;
  if (!text.empty() && text.back() == '=') ++padding;
  if (text.size() > 1 && text[text.size() - 2] == '=') ++padding;
  out.resize(static_cast<std::size_t>(n) - padding);
  return out;
}

std::string encode_request(std::uint64_t id, const Image& image) {
  return json{{"id", id}, {"image_png_b64", base64_encode(encode_png_rgb(image))}}.dump();
}

std::string encode_response(std::uint64_t id, std::span<const Detection> detections) {
  json dets = json::array();
  for (const auto& d : detections) {
    dets.push_back({{"bbox", {d.bbox.x1, d.bbox.y1, d.bbox.x2, d.bbox.y2}},
                    {"score", d.score},
                    {"label", d.label}});
  }
  return json{{"id", id}, {"detections", dets}}.dump();
}

std::vector<Detection> parse_response(std::string_view line, std::uint64_t expected_id) {
  json doc;
  try {
    doc = json::parse(line);
  } catch (const json::exception& e) {
    fail(ErrorCode::ProtocolError, std::string("response is not JSON: ") + e.what());
  }
  auto bad = [](const std::string& why) { fail(ErrorCode::ProtocolError, why); };
  if (!doc.is_object()) bad("response is not an object");
  if (!doc.contains("id") || !doc["id"].is_number_unsigned()) bad("response lacks numeric id");
  if (doc["id"].get<std::uint64_t>() != expected_id) {
    bad("response id " + doc["id"].dump() + " does not match request " +
        std::to_string(expected_id));
  }
  if (!doc.contains("detections") || !doc["detections"].is_array()) {
    bad("response lacks detections array");
  }
  std::vector<Detection> out;
  for (const auto& d : doc["detections"]) {
    if (!d.is_object()) bad("detection is not an object");
    const auto bbox = d.find("bbox");
    const auto score = d.find("score");
    const auto label = d.find("label");
    if (bbox == d.end() || !bbox->is_array() || bbox->size() != 4) bad("bbox must be [x1,y1,x2,y2]");
    for (const auto& c : *bbox) {
      if (!c.is_number()) bad("bbox coordinates must be numbers");
    }
    if (score == d.end() || !score->is_number()) bad("detection score must be a number");
    if (label == d.end() || !label->is_string()) bad("detection label must be a string");
    Detection det{{(*bbox)[0].get<double>(), (*bbox)[1].get<double>(), (*bbox)[2].get<double>(),
                   (*bbox)[3].get<double>()},
                  score->get<double>(),
                  label->get<std::string>()};
    if (!det.bbox.well_formed()) bad("bbox requires x1 < x2 and y1 < y2");
    if (!(det.score >= 0.0 && det.score <= 1.0)) bad("score outside [0, 1]");
    out.push_back(std::move(det));
  }
  return out;
}

std::string parse_handshake(std::string_view line) {
  std::string version;
  try {
    const auto doc = json::parse(line);
    version = doc.at("protocol").get<std::string>();
  } catch (const json::exception& e) {
    fail(ErrorCode::ProtocolError, std::string("invalid handshake: ") + e.what());
  }
  auto major = [](std::string_view v) { return v.substr(0, v.find('.')); };
  if (!version.starts_with("spx/")) {
    fail(ErrorCode::ProtocolError, "unknown protocol '" + version + "'");
  }
  if (major(version) != major(kProtocolVersion)) {
    fail(ErrorCode::VersionMismatch, "detector speaks " + version + ", expected " +
                                         std::string(kProtocolVersion));
  }
  return version;
}

ExternalDetector::ExternalDetector(const std::string& command, std::chrono::milliseconds timeout)
    : process_(command), timeout_(timeout) {}

std::string ExternalDetector::handshake() {
  auto version = parse_handshake(process_.read_line(timeout_));
  ready_ = true;
  return version;
}

std::vector<Detection> ExternalDetector::detect(const Image& image, std::span<const double>) {
  if (!ready_) handshake();
  const auto id = next_id_++;
  process_.write_line(encode_request(id, image));
  return parse_response(process_.read_line(timeout_), id);
}

DetectorFactory make_detector_factory(const std::string& spec, std::chrono::milliseconds timeout) {
  constexpr std::string_view prefix = "synthetic:";
  if (spec.starts_with(prefix)) {
    const std::string body = spec.substr(prefix.size());
    // Validate eagerly so configuration errors surface before any work.
    parse_synthetic_spec(body, BBox{0, 0, 1, 1});
    return [body](const BBox& gt) -> std::unique_ptr<Detector> {
      return std::make_unique<SyntheticDetector>(parse_synthetic_spec(body, gt));
    };
  }
  if (spec.empty()) fail(ErrorCode::ConfigError, "empty detector command");
  return [spec, timeout](const BBox&) -> std::unique_ptr<Detector> {
    auto det = std::make_unique<ExternalDetector>(spec, timeout);
    det->handshake();
    return det;
  };
}

}  // namespace spx
