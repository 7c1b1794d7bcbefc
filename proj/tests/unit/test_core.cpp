#include <cmath>
#include <cstring>
#include <limits>
#include <set>

#include "doctest.h"
#include "oracles.hpp"
#include "spk/error.hpp"
#include "spk/image.hpp"
#include "spk/image_io.hpp"
#include "spk/seed.hpp"
#include "tempdir.hpp"

using spk::ErrorCode;
using spk::ImageGrid;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const spk::Error& e) {
    return e.code();
  }
  FAIL("expected spk::Error");
  return ErrorCode::Format;
}

std::string message_of(auto&& fn) {
  try {
    fn();
  } catch (const spk::Error& e) {
    return e.what();
  }
  return {};
}

std::string header(const std::string& body) {
  std::string h = body;
  h.resize(spk::kImageHeaderSize, ' ');
  return h;
}

std::string payload(std::initializer_list<double> values) {
  std::string out;
  for (double v : values) {
    char b[8];
    std::memcpy(b, &v, 8);  // host is little-endian
    out.append(b, 8);
  }
  return out;
}

ImageGrid ramp(std::size_t w, std::size_t h) {
  ImageGrid g(w, h, 1.0);
  for (std::size_t i = 0; i < g.size(); ++i) g.samples()[i] = static_cast<double>(i);
  return g;
}

}  // namespace

TEST_CASE("image grid rejects empty or unphysical shapes") {
  CHECK(code_of([] { ImageGrid(0, 3, 1.0); }) == ErrorCode::Dimension);
  CHECK(code_of([] { ImageGrid(3, 3, 0.0); }) == ErrorCode::Range);
  CHECK(code_of([] { ImageGrid(2, 2, 1.0, {1, 2, 3}); }) == ErrorCode::Dimension);
  ImageGrid g(2, 2, 1.0, {0, 1, -1, 0});
  CHECK_FALSE(g.is_intensity());
  CHECK(code_of([&] { g.require_intensity("frame"); }) == ErrorCode::Range);
}

TEST_CASE("read 2x2 file") {
  TempDir tmp;
  spit(tmp / "a.spk", header("SPKIMG1\nw=2\nh=2\npitch=1e-05\n") + payload({0, 1, 2, 3}));
  const ImageGrid g = spk::read_image(tmp / "a.spk");
  CHECK(g == ImageGrid(2, 2, 1e-5, {0, 1, 2, 3}));
}

TEST_CASE("image file round trip is byte identical") {
  TempDir tmp;
  const double tiny = std::numeric_limits<double>::denorm_min();
  ImageGrid g(3, 2, 7.7e-6, {0.0, -0.0, tiny, std::numeric_limits<double>::max(), 1.0 / 3.0, 1e-300});
  spk::write_image(g, tmp / "a.spk");
  const ImageGrid back = spk::read_image(tmp / "a.spk");
  CHECK(std::memcmp(back.samples().data(), g.samples().data(), g.size() * sizeof(double)) == 0);
  CHECK(back.pitch() == g.pitch());
  spk::write_image(back, tmp / "b.spk");
  CHECK(slurp(tmp / "a.spk") == slurp(tmp / "b.spk"));
  CHECK(slurp(tmp / "a.spk").size() == spk::kImageHeaderSize + 6 * 8);
}

TEST_CASE("payload size mismatch is a truncation error") {
  TempDir tmp;
  spit(tmp / "short.spk", header("SPKIMG1\nw=4\nh=4\npitch=1\n") + payload({0, 1, 2, 3, 4, 5, 6, 7}));
  CHECK(code_of([&] { spk::read_image(tmp / "short.spk"); }) == ErrorCode::Truncated);
  spit(tmp / "long.spk", header("SPKIMG1\nw=1\nh=1\npitch=1\n") + payload({0, 1}));
  CHECK(code_of([&] { spk::read_image(tmp / "long.spk"); }) == ErrorCode::Truncated);
  spit(tmp / "stub.spk", "SPKIMG1\nw=1");
  CHECK(code_of([&] { spk::read_image(tmp / "stub.spk"); }) == ErrorCode::Truncated);
}

TEST_CASE("malformed header names the field") {
  TempDir tmp;
  spit(tmp / "magic.spk", header("SPKIMG2\nw=1\nh=1\npitch=1\n") + payload({0}));
  CHECK(code_of([&] { spk::read_image(tmp / "magic.spk"); }) == ErrorCode::Format);
  spit(tmp / "w.spk", header("SPKIMG1\nw=x\nh=1\npitch=1\n") + payload({0}));
  CHECK(message_of([&] { spk::read_image(tmp / "w.spk"); }).find("w") != std::string::npos);
  spit(tmp / "pitch.spk", header("SPKIMG1\nw=1\nh=1\npitch=-2\n") + payload({0}));
  const std::string msg = message_of([&] { spk::read_image(tmp / "pitch.spk"); });
  CHECK(msg.find("pitch") != std::string::npos);
  CHECK(code_of([&] { spk::read_image(tmp / "pitch.spk"); }) == ErrorCode::Format);
  CHECK(code_of([&] { spk::read_image(tmp / "missing.spk"); }) == ErrorCode::Io);
}

TEST_CASE("pgm export and import") {
  TempDir tmp;
  ImageGrid g(3, 1, 2e-6, {1.0, 2.0, 3.0});
  spk::write_pgm(g, tmp / "a.pgm");
  const ImageGrid back = spk::read_pgm(tmp / "a.pgm", 2e-6);
  CHECK(back == ImageGrid(3, 1, 2e-6, {0.0, 32768.0, 65535.0}));  // 32767.5 rounds away from zero
  CHECK(slurp(tmp / "a.pgm").substr(0, 13) == "P5\n3 1\n65535\n");
}

TEST_CASE("8-bit pgm is promoted without rescaling") {
  TempDir tmp;
  spit(tmp / "b.pgm", std::string("P5\n# comment\n2 1\n255\n") + '\x07' + '\xff');
  CHECK(spk::read_pgm(tmp / "b.pgm", 1.0) == ImageGrid(2, 1, 1.0, {7.0, 255.0}));
  spit(tmp / "bad.pgm", "P2\n1 1\n255\n0");
  CHECK(code_of([&] { spk::read_pgm(tmp / "bad.pgm", 1.0); }) == ErrorCode::Format);
}

TEST_CASE("crop_center index arithmetic") {
  const ImageGrid g = ramp(4, 4);
  CHECK(spk::crop_center(g, 2) == ImageGrid(2, 2, 1.0, {5, 6, 9, 10}));
  CHECK(spk::crop_center(g, 4) == g);
  // odd difference: extra row/column dropped on the high side
  CHECK(spk::crop_center(ramp(5, 5), 2) == ImageGrid(2, 2, 1.0, {6, 7, 11, 12}));
  CHECK(code_of([&] { spk::crop_center(g, 5); }) == ErrorCode::Dimension);
  CHECK(code_of([&] { spk::crop_center(g, 0); }) == ErrorCode::Dimension);
}

TEST_CASE("crop_center of a camera frame") {
  const ImageGrid frame(2560, 2160, 6.5e-6);
  const ImageGrid c = spk::crop_center(frame, 600);
  CHECK(c.width() == 600);
  CHECK(c.height() == 600);
  CHECK(c.pitch() == frame.pitch());
}

TEST_CASE("crop_center is idempotent") {
  const ImageGrid g = oracle::random_image(9, 7, 3);
  const ImageGrid once = spk::crop_center(g, 4);
  CHECK(spk::crop_center(once, 4) == once);
}

TEST_CASE("rotate180, circular_shift and crop_circular") {
  const ImageGrid g = ramp(3, 2);
  CHECK(spk::rotate180(g) == ImageGrid(3, 2, 1.0, {5, 4, 3, 2, 1, 0}));
  CHECK(spk::circular_shift(g, 1, -1) == ImageGrid(3, 2, 1.0, {4, 5, 3, 1, 2, 0}));
  const ImageGrid c = spk::crop_circular(ramp(4, 4), 0, 0, 3);
  CHECK(c == ImageGrid(3, 3, 1.0, {15, 12, 13, 3, 0, 1, 7, 4, 5}));
}

TEST_CASE("derive_seed contract") {
  const spk::SeedSpec s{42, {"frame", "window"}};
  CHECK(spk::derive_seed(s, "frame", 0) == spk::derive_seed(s, "frame", 0));
  CHECK(spk::derive_seed(s, "frame", 0) != spk::derive_seed(s, "frame", 1));
  CHECK(spk::derive_seed(s, "frame", 0) != spk::derive_seed(s, "window", 0));
  CHECK(spk::derive_seed(s, "frame", 0) == spk::derive_seed(42, "frame", 0));
  CHECK(spk::derive_seed(1, "frame", 0) != spk::derive_seed(2, "frame", 0));
  std::set<std::uint64_t> seen;
  for (std::uint64_t i = 0; i < 10000; ++i) seen.insert(spk::derive_seed(7, "restart", i));
  CHECK(seen.size() == 10000);
}

TEST_CASE("rng distributions") {
  spk::Rng a(5), b(5);
  for (int i = 0; i < 100; ++i) CHECK(a.next() == b.next());
  spk::Rng rng(11);
  double s = 0, s2 = 0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double x = rng.normal();
    s += x;
    s2 += x * x;
  }
  CHECK(std::abs(s / n) < 0.01);
  CHECK(std::abs(s2 / n - 1.0) < 0.02);
  std::vector<int> counts(7, 0);
  for (int i = 0; i < 70000; ++i) ++counts[rng.index(7)];
  for (int c : counts) CHECK(std::abs(c - 10000) < 500);
  for (int i = 0; i < 1000; ++i) {
    const double u = rng.uniform();
    CHECK((u >= 0.0 && u < 1.0));
  }
}
