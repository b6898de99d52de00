#include <doctest.h>

#include <algorithm>
#include <chrono>
#include <nlohmann/json.hpp>
#include <random>

#include "helpers.hpp"
#include "spx/detector.hpp"
#include "spx/error.hpp"
#include "spx/fixtures.hpp"

using namespace spx;
using namespace std::chrono_literals;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an spx::Error");
  return ErrorCode::ConfigError;
}

std::string adapter(const std::string& mode) { return std::string(SPX_TEST_ADAPTER) + " " + mode; }

const BBox kGt{2, 3, 20, 40};

}  // namespace

TEST_CASE("synthetic linear detector is clamp(w.pi + b)") {
  const LinearForm form{{0.3, -0.2, 0.5, 0.1}, 0.1};
  SyntheticDetector det({form, kGt});
  CHECK_FALSE(det.needs_pixels());
  std::mt19937 rng(1);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const Image img(4, 4);
  for (int t = 0; t < 200; ++t) {
    std::vector<double> pi(4);
    for (auto& p : pi) p = u(rng);
    double expected = form.bias;
    for (std::size_t i = 0; i < 4; ++i) expected += form.weights[i] * pi[i];
    expected = std::clamp(expected, 0.0, 1.0);
    const auto dets = det.detect(img, pi);
    REQUIRE(dets.size() == 1);
    CHECK(dets[0].score == doctest::Approx(expected).epsilon(1e-15));
    CHECK(dets[0].bbox == kGt);
    CHECK(dets[0].label == "pedestrian");
    CHECK(det.detect(img, pi) == dets);
  }
  const std::vector<double> big = {1, 0, 1, 1};
  CHECK(SyntheticDetector({LinearForm{{1, 1, 1, 1}, 0.5}, kGt}).score(big) == 1.0);
  CHECK(SyntheticDetector({LinearForm{{-1, 0, 0, 0}, 0}, kGt}).score(big) == 0.0);
}

TEST_CASE("synthetic product detector") {
  const ProductForm form{{{0.5, {0, 1}}, {0.25, {2}}}, 0.1};
  SyntheticDetector det({form, kGt});
  const std::vector<double> pi = {0.5, 0.8, 1.0};
  CHECK(det.score(pi) == doctest::Approx(0.1 + 0.5 * 0.4 + 0.25));
}

TEST_CASE("pixel-mean detector reads the box interior") {
  Image img(10, 10, {0, 0, 0});
  for (int y = 0; y < 5; ++y) {
    for (int x = 0; x < 10; ++x) img.set(x, y, {255, 255, 255});
  }
  CHECK(mean_brightness(img, {0, 0, 10, 10}) == doctest::Approx(0.5));
  CHECK(mean_brightness(img, {0, 0, 10, 5}) == doctest::Approx(1.0));
  SyntheticDetector det({PixelMeanForm{}, {0, 0, 10, 10}});
  CHECK(det.needs_pixels());
  CHECK(det.detect(img, {})[0].score == doctest::Approx(0.5));
}

TEST_CASE("parse_synthetic_spec") {
  const auto lin = parse_synthetic_spec("linear:w=0.3,0.7;b=0.1", kGt);
  const auto& l = std::get<LinearForm>(lin.form);
  CHECK(l.weights == std::vector<double>{0.3, 0.7});
  CHECK(l.bias == 0.1);
  CHECK(lin.gt_bbox == kGt);

  const auto prod = parse_synthetic_spec("product:terms=1@0+1/0.5@2;b=0.2", kGt);
  const auto& p = std::get<ProductForm>(prod.form);
  REQUIRE(p.terms.size() == 2);
  CHECK(p.terms[0].parts == std::vector<std::size_t>{0, 1});
  CHECK(p.terms[1].coefficient == 0.5);
  CHECK(p.bias == 0.2);

  CHECK(std::holds_alternative<PixelMeanForm>(parse_synthetic_spec("pixelmean", kGt).form));
  CHECK(code_of([] { parse_synthetic_spec("cubic:w=1", kGt); }) == ErrorCode::ConfigError);
  CHECK(code_of([] { parse_synthetic_spec("linear:w=a,b", kGt); }) == ErrorCode::ConfigError);

  const auto dir = test::scratch_dir("detector_spec");
  write_file(dir / "d.json", std::string(R"({"form": "linear", "weights": [0.5], "bias": 0.25})"));
  const auto from_file = parse_synthetic_spec("file=" + (dir / "d.json").string(), kGt);
  CHECK(std::get<LinearForm>(from_file.form).weights == std::vector<double>{0.5});
}

TEST_CASE("base64") {
  const std::vector<std::uint8_t> empty;
  CHECK(base64_encode(empty).empty());
  const std::string s = "Man";
  CHECK(base64_encode({reinterpret_cast<const std::uint8_t*>(s.data()), s.size()}) == "TWFu");
  std::mt19937 rng(2);
  for (std::size_t n = 0; n < 40; ++n) {
    std::vector<std::uint8_t> bytes(n);
    for (auto& b : bytes) b = static_cast<std::uint8_t>(rng());
    CHECK(base64_decode(base64_encode(bytes)) == bytes);
  }
  CHECK_THROWS_AS(base64_decode("@@@@"), Error);
}

TEST_CASE("protocol encoding") {
  SUBCASE("request carries the image") {
    const auto inst = fixtures::pedestrian(1);
    const auto line = encode_request(7, inst.image);
    CHECK(line.find('\n') == std::string::npos);
    const auto doc = nlohmann::json::parse(line);
    CHECK(doc.at("id") == 7);
    const auto png = base64_decode(doc.at("image_png_b64").get<std::string>());
    CHECK(decode_png_rgb(png) == inst.image);
  }
  SUBCASE("response round-trip is the identity") {
    std::mt19937 rng(4);
    std::uniform_real_distribution<double> u(0.0, 100.0);
    for (int t = 0; t < 30; ++t) {
      std::vector<Detection> dets;
      for (int k = 0; k < t % 4; ++k) {
        const double x = u(rng), y = u(rng);
        dets.push_back({{x, y, x + 1 + u(rng), y + 1 + u(rng)}, u(rng) / 100.0, "pedestrian"});
      }
      CHECK(parse_response(encode_response(t, dets), t) == dets);
    }
  }
  SUBCASE("schema violations") {
    const auto bad = [](const char* line) { return code_of([&] { parse_response(line, 1); }); };
    CHECK(bad("{not json") == ErrorCode::ProtocolError);
    CHECK(bad(R"({"id":2,"detections":[]})") == ErrorCode::ProtocolError);
    CHECK(bad(R"({"id":1})") == ErrorCode::ProtocolError);
    CHECK(bad(R"({"id":1,"detections":[{"bbox":[0,0,1],"score":0.5,"label":"p"}]})") ==
          ErrorCode::ProtocolError);
    CHECK(bad(R"({"id":1,"detections":[{"bbox":[2,0,1,1],"score":0.5,"label":"p"}]})") ==
          ErrorCode::ProtocolError);
    CHECK(bad(R"({"id":1,"detections":[{"bbox":[0,0,1,1],"score":1.5,"label":"p"}]})") ==
          ErrorCode::ProtocolError);
    CHECK(bad(R"({"id":1,"detections":[{"bbox":[0,0,1,1],"score":0.5}]})") ==
          ErrorCode::ProtocolError);
  }
  SUBCASE("handshake") {
    CHECK(parse_handshake(R"({"protocol":"spx/1"})") == "spx/1");
    CHECK(parse_handshake(R"({"protocol":"spx/1.3"})") == "spx/1.3");
    CHECK(code_of([] { parse_handshake(R"({"protocol":"spx/2"})"); }) ==
          ErrorCode::VersionMismatch);
    CHECK(code_of([] { parse_handshake("hello"); }) == ErrorCode::ProtocolError);
  }
}

TEST_CASE("external detector over a child process") {
  const Image img(8, 8, {40, 50, 60});
  SUBCASE("echo") {
    ExternalDetector det(adapter("echo"), 5000ms);
    CHECK(det.handshake() == "spx/1");
    for (int k = 0; k < 3; ++k) {
      const auto dets = det.detect(img, {});
      REQUIRE(dets.size() == 1);
      CHECK(dets[0].bbox == BBox{1.5, 2.25, 30.125, 40.0});
      CHECK(dets[0].score == 0.875);
      CHECK(dets[0].label == "pedestrian");
    }
  }
  SUBCASE("version mismatch") {
    ExternalDetector det(adapter("v2"), 5000ms);
    CHECK(code_of([&] { det.handshake(); }) == ErrorCode::VersionMismatch);
  }
  SUBCASE("invalid json") {
    ExternalDetector det(adapter("badjson"), 5000ms);
    det.handshake();
    CHECK(code_of([&] { det.detect(img, {}); }) == ErrorCode::ProtocolError);
  }
  SUBCASE("wrong id") {
    ExternalDetector det(adapter("wrongid"), 5000ms);
    det.handshake();
    CHECK(code_of([&] { det.detect(img, {}); }) == ErrorCode::ProtocolError);
  }
  SUBCASE("silent child times out") {
    ExternalDetector det(adapter("silent"), 300ms);
    const auto start = std::chrono::steady_clock::now();
    CHECK(code_of([&] { det.handshake(); }) == ErrorCode::Timeout);
    CHECK(std::chrono::steady_clock::now() - start < 5s);
  }
  SUBCASE("crash") {
    ExternalDetector det(adapter("crash"), 5000ms);
    det.handshake();
    CHECK(code_of([&] { det.detect(img, {}); }) == ErrorCode::DetectorCrash);
  }
  SUBCASE("missing executable") {
    ExternalDetector det("/nonexistent/adapter", 5000ms);
    CHECK(code_of([&] { det.handshake(); }) == ErrorCode::DetectorCrash);
  }
  SUBCASE("factory builds external detectors") {
    const auto factory = make_detector_factory(adapter("echo"), 5000ms);
    const auto det = factory(kGt);
    CHECK(det->detect(img, {}).size() == 1);
  }
}

TEST_CASE("factory builds synthetic detectors") {
  const auto factory = make_detector_factory("synthetic:linear:w=0.5,0.25;b=0");
  const auto det = factory(kGt);
  const std::vector<double> pi = {1.0, 1.0};
  CHECK(det->detect(Image(2, 2), pi)[0].score == doctest::Approx(0.75));
  CHECK(det->detect(Image(2, 2), pi)[0].bbox == kGt);
}
