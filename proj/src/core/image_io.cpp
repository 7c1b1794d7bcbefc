#include "spk/image_io.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <charconv>
#include <cmath>
#include <cctype>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>
#include <string_view>

#include "spk/error.hpp"

namespace spk {

namespace {

constexpr std::string_view kMagic = "SPKIMG1\n";

std::vector<char> slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open '" + path.string() + "' for reading");
  return std::vector<char>(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

void spill(const std::filesystem::path& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::Io, "cannot open '" + path.string() + "' for writing");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorCode::Io, "short write to '" + path.string() + "'");
}

// Consumes "<key>=<value>\n" at `pos`; returns the value text.
std::string_view take_field(std::string_view header, std::size_t& pos, std::string_view key) {
  const std::string prefix = std::string(key) + "=";
  if (header.substr(pos, prefix.size()) != prefix) {
    throw Error(ErrorCode::Format, "image header: expected field '" + std::string(key) + "'");
  }
  pos += prefix.size();
  const std::size_t end = header.find('\n', pos);
  if (end == std::string_view::npos) {
    throw Error(ErrorCode::Format, "image header: field '" + std::string(key) + "' is not newline-terminated");
  }
  std::string_view value = header.substr(pos, end - pos);
  pos = end + 1;
  if (value.empty()) throw Error(ErrorCode::Format, "image header: field '" + std::string(key) + "' is empty");
  return value;
}

std::size_t parse_dimension(std::string_view text, std::string_view key) {
  std::size_t value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || value == 0) {
    throw Error(ErrorCode::Format, "image header: field '" + std::string(key) + "' is not a positive integer");
  }
  return value;
}

double parse_pitch(std::string_view text) {
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || !(value > 0.0) || !std::isfinite(value)) {
    throw Error(ErrorCode::Format, "image header: field 'pitch' is not a positive decimal");
  }
  return value;
}

std::string format_double(double v) {
  std::array<char, 64> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), ptr);
}

}  // namespace

ImageGrid read_image(const std::filesystem::path& path) {
  const std::vector<char> bytes = slurp(path);
  if (bytes.size() < kImageHeaderSize) {
    throw Error(ErrorCode::Truncated, "image file shorter than the 64-byte header");
  }
  const std::string_view header(bytes.data(), kImageHeaderSize);
  if (header.substr(0, kMagic.size()) != kMagic) throw Error(ErrorCode::Format, "image header: bad magic");
  std::size_t pos = kMagic.size();
  const std::size_t width = parse_dimension(take_field(header, pos, "w"), "w");
  const std::size_t height = parse_dimension(take_field(header, pos, "h"), "h");
  const double pitch = parse_pitch(take_field(header, pos, "pitch"));
  if (header.find_first_not_of(' ', pos) != std::string_view::npos) {
    throw Error(ErrorCode::Format, "image header: padding must be spaces");
  }

  const std::size_t count = width * height;
  const std::size_t payload = bytes.size() - kImageHeaderSize;
  if (payload != count * sizeof(double)) {
    throw Error(ErrorCode::Truncated, "image payload has " + std::to_string(payload) + " bytes, header " +
                                          std::to_string(width) + "x" + std::to_string(height) + " needs " +
                                          std::to_string(count * sizeof(double)));
  }

  std::vector<double> samples(count);
  const auto* src = reinterpret_cast<const unsigned char*>(bytes.data() + kImageHeaderSize);
  for (std::size_t i = 0; i < count; ++i) {
    std::uint64_t bits = 0;
    for (int b = 7; b >= 0; --b) bits = (bits << 8) | src[i * 8 + static_cast<std::size_t>(b)];
    samples[i] = std::bit_cast<double>(bits);
  }
  return ImageGrid(width, height, pitch, std::move(samples));
}

void write_image(const ImageGrid& img, const std::filesystem::path& path) {
  std::string out = std::string(kMagic) + "w=" + std::to_string(img.width()) + "\nh=" +
                    std::to_string(img.height()) + "\npitch=" + format_double(img.pitch()) + "\n";
  if (out.size() > kImageHeaderSize) throw Error(ErrorCode::Format, "image header exceeds 64 bytes");
  out.resize(kImageHeaderSize, ' ');
  out.reserve(kImageHeaderSize + img.size() * sizeof(double));
  for (double v : img.samples()) {
    std::uint64_t bits = std::bit_cast<std::uint64_t>(v);
    for (int b = 0; b < 8; ++b) {
      out.push_back(static_cast<char>(bits & 0xffU));
      bits >>= 8;
    }
  }
  spill(path, out);
}

void write_pgm(const ImageGrid& img, const std::filesystem::path& path) {
  const auto [lo_it, hi_it] = std::minmax_element(img.samples().begin(), img.samples().end());
  const double lo = *lo_it;
  const double span = *hi_it - lo;
  std::string out = "P5\n" + std::to_string(img.width()) + " " + std::to_string(img.height()) + "\n65535\n";
  out.reserve(out.size() + 2 * img.size());
  for (double v : img.samples()) {
    const double t = span > 0.0 ? (v - lo) / span : 0.0;
    const auto q = static_cast<unsigned>(std::lround(std::clamp(t, 0.0, 1.0) * 65535.0));
    out.push_back(static_cast<char>((q >> 8) & 0xffU));
    out.push_back(static_cast<char>(q & 0xffU));
  }
  spill(path, out);
}

ImageGrid read_pgm(const std::filesystem::path& path, double pitch) {
  const std::vector<char> bytes = slurp(path);
  std::size_t pos = 0;

  auto skip_space_and_comments = [&] {
    while (pos < bytes.size()) {
      if (bytes[pos] == '#') {
        while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
      } else if (std::isspace(static_cast<unsigned char>(bytes[pos]))) {
        ++pos;
      } else {
        break;
      }
    }
  };
  auto read_uint = [&](const char* field) {
    skip_space_and_comments();
    std::size_t value = 0;
    auto [ptr, ec] = std::from_chars(bytes.data() + pos, bytes.data() + bytes.size(), value);
    if (ec != std::errc() || value == 0) {
      throw Error(ErrorCode::Format, std::string("pgm header: bad field '") + field + "'");
    }
    pos = static_cast<std::size_t>(ptr - bytes.data());
    return value;
  };

  if (bytes.size() < 2 || bytes[0] != 'P' || bytes[1] != '5') {
    throw Error(ErrorCode::Format, "pgm header: bad magic (only binary P5 is supported)");
  }
  pos = 2;
  const std::size_t width = read_uint("width");
  const std::size_t height = read_uint("height");
  const std::size_t maxval = read_uint("maxval");
  if (maxval > 65535) throw Error(ErrorCode::Format, "pgm header: field 'maxval' exceeds 65535");
  if (pos >= bytes.size() || !std::isspace(static_cast<unsigned char>(bytes[pos]))) {
    throw Error(ErrorCode::Format, "pgm header: missing separator before raster");
  }
  ++pos;

  const std::size_t depth = maxval < 256 ? 1 : 2;
  const std::size_t count = width * height;
  if (bytes.size() - pos != count * depth) {
    throw Error(ErrorCode::Truncated, "pgm raster size does not match header");
  }
  std::vector<double> samples(count);
  const auto* src = reinterpret_cast<const unsigned char*>(bytes.data() + pos);
  for (std::size_t i = 0; i < count; ++i) {
    samples[i] = depth == 1 ? src[i] : static_cast<double>((src[2 * i] << 8) | src[2 * i + 1]);
  }
  return ImageGrid(width, height, pitch, std::move(samples));
}

}  // namespace spk
