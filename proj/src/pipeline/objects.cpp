#include <algorithm>
#include <array>
#include <cctype>
#include <string_view>

#include "spk/error.hpp"
#include "spk/image_io.hpp"
#include "spk/pipeline.hpp"

namespace spk::pipeline {

namespace {

struct Glyph {
  char letter;
  std::array<std::string_view, 7> rows;
};

// clang-format off
constexpr std::array<Glyph, 14> kFont = {{
    {'A', {".###.", "#...#", "#...#", "#####", "#...#", "#...#", "#...#"}},
    {'C', {".###.", "#...#", "#....", "#....", "#....", "#...#", ".###."}},
    {'E', {"#####", "#....", "#....", "####.", "#....", "#....", "#####"}},
    {'F', {"#####", "#....", "#....", "####.", "#....", "#....", "#...."}},
    {'H', {"#...#", "#...#", "#...#", "#####", "#...#", "#...#", "#...#"}},
    {'K', {"#...#", "#..#.", "#.#..", "##...", "#.#..", "#..#.", "#...#"}},
    {'L', {"#....", "#....", "#....", "#....", "#....", "#....", "#####"}},
    {'P', {"####.", "#...#", "#...#", "####.", "#....", "#....", "#...."}},
    {'R', {"####.", "#...#", "#...#", "####.", "#.#..", "#..#.", "#...#"}},
    {'T', {"#####", "..#..", "..#..", "..#..", "..#..", "..#..", "..#.."}},
    {'U', {"#...#", "#...#", "#...#", "#...#", "#...#", "#...#", ".###."}},
    {'X', {"#...#", "#...#", ".#.#.", "..#..", ".#.#.", "#...#", "#...#"}},
    {'Y', {"#...#", "#...#", ".#.#.", "..#..", "..#..", "..#..", "..#.."}},
    {'Z', {"#####", "....#", "...#.", "..#..", ".#...", "#....", "#####"}},
}};
// clang-format on

void paste_centered(ImageGrid& dst, const ImageGrid& src) {
  if (src.width() > dst.width() || src.height() > dst.height()) {
    throw Error(ErrorCode::Dimension, "object does not fit the simulation grid");
  }
  const std::size_t r0 = (dst.height() - src.height()) / 2;
  const std::size_t c0 = (dst.width() - src.width()) / 2;
  for (std::size_t r = 0; r < src.height(); ++r) {
    for (std::size_t c = 0; c < src.width(); ++c) dst(r0 + r, c0 + c) = src(r, c);
  }
}

}  // namespace

ImageGrid letter_glyph(char letter, std::size_t rows, std::size_t cols, double pitch) {
  const char key = static_cast<char>(std::toupper(static_cast<unsigned char>(letter)));
  const auto it = std::find_if(kFont.begin(), kFont.end(), [&](const Glyph& g) { return g.letter == key; });
  if (it == kFont.end()) throw Error(ErrorCode::Config, std::string("no glyph for letter '") + letter + "'");
  ImageGrid out(cols, rows, pitch);
  for (std::size_t r = 0; r < rows; ++r) {
    const auto& line = it->rows[r * 7 / rows];
    for (std::size_t c = 0; c < cols; ++c) out(r, c) = line[c * 5 / cols] == '#' ? 1.0 : 0.0;
  }
  return out;
}

ImageGrid make_object(const ObjectParams& params, std::size_t grid_size, double pitch) {
  ImageGrid grid(grid_size, grid_size, pitch);
  if (params.kind == "two_point") {
    if (params.separation < 1 || params.separation >= grid_size) {
      throw Error(ErrorCode::Config, "object.separation must lie in [1, grid_size)");
    }
    const std::size_t mid = grid_size / 2;
    const std::size_t left = mid - params.separation / 2;
    grid(mid, left) = 1.0;
    grid(mid, left + params.separation) = 1.0;
  } else if (params.kind == "letter") {
    if (params.letter.size() != 1) throw Error(ErrorCode::Config, "object.letter must be a single character");
    if (params.height < 7 || params.height > grid_size) {
      throw Error(ErrorCode::Config, "object.height must lie in [7, grid_size]");
    }
    const std::size_t width = std::max<std::size_t>(5, (params.height * 5 + 3) / 7);
    paste_centered(grid, letter_glyph(params.letter[0], params.height, width, pitch));
  } else if (params.kind == "pgm") {
    if (params.path.empty()) throw Error(ErrorCode::Config, "object.path is required for object.kind = pgm");
    paste_centered(grid, read_pgm(params.path, pitch));
  } else {
    throw Error(ErrorCode::Config, "unknown object.kind '" + params.kind + "'");
  }
  return grid;
}

ImageGrid fit_truth(const ImageGrid& truth, std::size_t size) {
  if (truth.width() == size && truth.height() == size) return truth;
  std::size_t rmin = truth.height(), rmax = 0, cmin = truth.width(), cmax = 0;
  for (std::size_t r = 0; r < truth.height(); ++r) {
    for (std::size_t c = 0; c < truth.width(); ++c) {
      if (truth(r, c) != 0.0) {
        rmin = std::min(rmin, r);
        rmax = std::max(rmax, r);
        cmin = std::min(cmin, c);
        cmax = std::max(cmax, c);
      }
    }
  }
  if (rmin > rmax) throw Error(ErrorCode::Degenerate, "ground-truth image is empty");
  if (rmax - rmin + 1 > size || cmax - cmin + 1 > size) {
    throw Error(ErrorCode::Dimension, "ground-truth object is larger than the reconstruction window");
  }
  if (size > truth.width() || size > truth.height()) {
    ImageGrid padded(size, size, truth.pitch());
    paste_centered(padded, truth);
    return padded;
  }
  return crop_circular(truth, (rmin + rmax) / 2, (cmin + cmax) / 2, size);
}

ImageGrid load_image_any(const std::filesystem::path& path, double pitch) {
  if (path.extension() == ".pgm") return read_pgm(path, pitch);
  return read_image(path);
}

}  // namespace spk::pipeline
