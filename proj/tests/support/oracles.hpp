#pragma once
// Slow, literal reference implementations. Nothing here calls into the FFT
// code under test.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <numbers>
#include <vector>

#include "spk/correlation.hpp"
#include "spk/image.hpp"
#include "spk/seed.hpp"

namespace oracle {

using cplx = std::complex<double>;

// Direct 2-D DFT; sign -1 forward, +1 inverse (unnormalized).
inline std::vector<cplx> dft2(const std::vector<cplx>& in, std::size_t rows, std::size_t cols, int sign) {
  std::vector<cplx> out(rows * cols);
  const double tau = 2.0 * std::numbers::pi;
  for (std::size_t kr = 0; kr < rows; ++kr)
    for (std::size_t kc = 0; kc < cols; ++kc) {
      cplx acc = 0.0;
      for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cols; ++c) {
          const double ph = sign * tau *
                            (static_cast<double>((kr * r) % rows) / rows + static_cast<double>((kc * c) % cols) / cols);
          acc += in[r * cols + c] * cplx(std::cos(ph), std::sin(ph));
        }
      out[kr * cols + kc] = acc;
    }
  return out;
}

inline std::vector<cplx> to_complex(const spk::ImageGrid& g) {
  return {g.samples().begin(), g.samples().end()};
}

// Mean-removed circular autocorrelation by shift-and-multiply, normalized by
// zero lag, averaged over frames, zero lag moved to (out/2, out/2).
inline spk::ImageGrid autocorrelation(const std::vector<spk::ImageGrid>& frames, std::size_t out) {
  const std::size_t h = frames[0].height(), w = frames[0].width();
  std::vector<double> avg(h * w, 0.0);
  for (const auto& f : frames) {
    const double mean = f.mean();
    std::vector<double> a(h * w, 0.0);
    for (std::size_t dr = 0; dr < h; ++dr)
      for (std::size_t dc = 0; dc < w; ++dc) {
        double s = 0.0;
        for (std::size_t r = 0; r < h; ++r)
          for (std::size_t c = 0; c < w; ++c)
            s += (f(r, c) - mean) * (f((r + dr) % h, (c + dc) % w) - mean);
        a[dr * w + dc] = s;
      }
    for (std::size_t i = 0; i < a.size(); ++i) avg[i] += a[i] / a[0] / static_cast<double>(frames.size());
  }
  spk::ImageGrid res(out, out, frames[0].pitch());
  for (std::size_t r = 0; r < out; ++r)
    for (std::size_t c = 0; c < out; ++c) {
      const std::size_t sr = (r + h - out / 2 % h) % h;
      const std::size_t sc = (c + w - out / 2 % w) % w;
      res(r, c) = avg[sr * w + sc];
    }
  return res;
}

// Circular convolution with the kernel origin at its center pixel.
inline spk::ImageGrid convolve(const spk::ImageGrid& obj, const spk::ImageGrid& psf) {
  const std::size_t h = obj.height(), w = obj.width();
  spk::ImageGrid out(w, h, obj.pitch());
  for (std::size_t r = 0; r < h; ++r)
    for (std::size_t c = 0; c < w; ++c) {
      double s = 0.0;
      for (std::size_t rr = 0; rr < h; ++rr)
        for (std::size_t cc = 0; cc < w; ++cc)
          s += obj(rr, cc) * psf((r + h - rr + h / 2) % h, (c + w - cc + w / 2) % w);
      out(r, c) = s;
    }
  return out;
}

// Window selection written straight from the procedure description.
inline std::vector<spk::WindowCenter> select(const spk::ImageGrid& f, const spk::SubRegionSpec& spec,
                                             std::size_t frame_index, std::size_t* redraws = nullptr) {
  const std::size_t L = spec.effective_window(), half = L / 2;
  spk::Rng rng(spk::derive_seed(spec.seed, "window", frame_index));
  std::vector<spk::WindowCenter> out;
  std::size_t rejected = 0;
  while (out.size() < spec.windows_per_frame) {
    const std::size_t top = rng.index(f.height() - L + 1);
    const std::size_t left = rng.index(f.width() - L + 1);
    std::size_t br = top, bc = left;
    for (std::size_t i = 0; i < L * L; ++i) {
      const std::size_t r = top + i / L, c = left + i % L;
      if (f(r, c) > f(br, bc)) br = r, bc = c;
    }
    const bool inside = br >= half && bc >= half && br + half < f.height() && bc + half < f.width();
    if (inside)
      out.push_back({br, bc, frame_index});
    else
      ++rejected;
  }
  if (redraws) *redraws = rejected;
  return out;
}

// R(x, y) = sum_m S_m(x - x_m, y - y_m) / count, looping window by window.
inline spk::ImageGrid shift_and_add(const std::vector<spk::ImageGrid>& frames,
                                    const std::vector<std::vector<spk::WindowCenter>>& centers, std::size_t L) {
  spk::ImageGrid out(L, L, frames[0].pitch());
  std::size_t count = 0;
  const long half = static_cast<long>(L / 2);
  for (std::size_t m = 0; m < frames.size(); ++m)
    for (const auto& wc : centers[m]) {
      for (long dy = -half; dy <= half; ++dy)
        for (long dx = -half; dx <= half; ++dx)
          out(static_cast<std::size_t>(dy + half), static_cast<std::size_t>(dx + half)) +=
              frames[m](static_cast<std::size_t>(static_cast<long>(wc.row) + dy),
                        static_cast<std::size_t>(static_cast<long>(wc.col) + dx));
      ++count;
    }
  for (double& v : out.samples()) v /= static_cast<double>(count);
  return out;
}

// One HIO update with direct DFTs.
inline std::vector<double> hio_step(const std::vector<double>& g, const std::vector<double>& prev,
                                    const std::vector<double>& mag, const std::vector<unsigned char>& support,
                                    std::size_t rows, std::size_t cols, double beta) {
  std::vector<cplx> G = dft2({g.begin(), g.end()}, rows, cols, -1);
  for (std::size_t i = 0; i < G.size(); ++i) {
    const double a = std::abs(G[i]);
    G[i] = a > 0.0 ? G[i] / a * mag[i] : cplx(mag[i], 0.0);
  }
  const std::vector<cplx> p = dft2(G, rows, cols, +1);
  std::vector<double> out(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double v = p[i].real() / static_cast<double>(rows * cols);
    const bool ok = v >= 0.0 && (support.empty() || support[i]);
    out[i] = ok ? v : prev[i] - beta * v;
  }
  return out;
}

// Best zero-normalized correlation over every circular shift of b and of b
// rotated by 180 degrees.
inline double aligned_ncc(const spk::ImageGrid& a, const spk::ImageGrid& b) {
  const std::size_t h = a.height(), w = a.width();
  const double ma = a.mean(), mb = b.mean();
  double ea = 0.0, eb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ea += (a.samples()[i] - ma) * (a.samples()[i] - ma);
    eb += (b.samples()[i] - mb) * (b.samples()[i] - mb);
  }
  double best = -std::numeric_limits<double>::infinity();
  for (int flip = 0; flip < 2; ++flip)
    for (std::size_t sr = 0; sr < h; ++sr)
      for (std::size_t sc = 0; sc < w; ++sc) {
        double s = 0.0;
        for (std::size_t r = 0; r < h; ++r)
          for (std::size_t c = 0; c < w; ++c) {
            std::size_t br = (r + sr) % h, bc = (c + sc) % w;
            if (flip) br = h - 1 - br, bc = w - 1 - bc;
            s += (a(r, c) - ma) * (b(br, bc) - mb);
          }
        best = std::max(best, s / std::sqrt(ea * eb));
      }
  return best;
}

inline double max_abs_diff(std::span<const double> a, std::span<const double> b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

inline double max_abs(std::span<const double> a) {
  double d = 0.0;
  for (double v : a) d = std::max(d, std::abs(v));
  return d;
}

inline spk::ImageGrid random_image(std::size_t w, std::size_t h, std::uint64_t seed) {
  spk::Rng rng(seed);
  spk::ImageGrid g(w, h, 1e-6);
  for (double& v : g.samples()) v = rng.uniform();
  return g;
}

}  // namespace oracle
