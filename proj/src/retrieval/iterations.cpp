#include "retrieval/iterations.hpp"

#include <cmath>

#include "spk/error.hpp"

namespace spk {

namespace detail {

Projector::Projector(const MagnitudeConstraint& c)
    : rows_(c.magnitude.height()),
      cols_(c.magnitude.width()),
      magnitude_(c.magnitude.samples()),
      support_(c.support),
      magnitude_norm_(0.0),
      buf_(c.magnitude.size()) {
  for (double m : magnitude_) magnitude_norm_ += m * m;
  magnitude_norm_ = std::sqrt(magnitude_norm_);
  if (!(magnitude_norm_ > 0.0)) throw Error(ErrorCode::Degenerate, "Fourier magnitude is identically zero");
  if (!support_.empty() && support_.size() != magnitude_.size()) {
    throw Error(ErrorCode::Dimension, "support mask does not match the magnitude grid");
  }
}

double Projector::project(std::span<const double> in, std::span<double> out) {
  for (std::size_t i = 0; i < buf_.size(); ++i) buf_[i] = in[i];
  fft::forward(buf_, rows_, cols_);
  double err = 0.0;
  for (std::size_t i = 0; i < buf_.size(); ++i) {
    const double mod = std::sqrt(std::norm(buf_[i]));
    const double d = mod - magnitude_[i];
    err += d * d;
    buf_[i] = mod > 0.0 ? buf_[i] * (magnitude_[i] / mod) : fft::cplx(magnitude_[i], 0.0);
  }
  fft::inverse(buf_, rows_, cols_);
  for (std::size_t i = 0; i < buf_.size(); ++i) out[i] = buf_[i].real();
  return std::sqrt(err) / magnitude_norm_;
}

double Projector::residual(std::span<const double> in) {
  for (std::size_t i = 0; i < buf_.size(); ++i) buf_[i] = in[i];
  fft::forward(buf_, rows_, cols_);
  double err = 0.0;
  for (std::size_t i = 0; i < buf_.size(); ++i) {
    const double d = std::sqrt(std::norm(buf_[i])) - magnitude_[i];
    err += d * d;
  }
  return std::sqrt(err) / magnitude_norm_;
}

}  // namespace detail

namespace {

void check_grid(const ImageGrid& img, const MagnitudeConstraint& c) {
  if (!img.same_shape(c.magnitude)) throw Error(ErrorCode::Dimension, "estimate does not match the magnitude grid");
}

}  // namespace

ImageGrid project_magnitude(const ImageGrid& estimate, const MagnitudeConstraint& c) {
  check_grid(estimate, c);
  detail::Projector proj(c);
  ImageGrid out(estimate.width(), estimate.height(), estimate.pitch());
  proj.project(estimate.samples(), out.samples());
  return out;
}

ImageGrid er_step(const ImageGrid& estimate, const MagnitudeConstraint& c) {
  check_grid(estimate, c);
  detail::Projector proj(c);
  ImageGrid out(estimate.width(), estimate.height(), estimate.pitch());
  auto g = out.samples();
  proj.project(estimate.samples(), g);
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (!(g[i] >= 0.0) || !proj.allowed(i)) g[i] = 0.0;
  }
  return out;
}

ImageGrid hio_step(const ImageGrid& estimate, const ImageGrid& previous, const MagnitudeConstraint& c,
                   double beta) {
  check_grid(estimate, c);
  check_grid(previous, c);
  detail::Projector proj(c);
  ImageGrid out(estimate.width(), estimate.height(), estimate.pitch());
  auto g = out.samples();
  proj.project(estimate.samples(), g);
  const auto prev = previous.samples();
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (!(g[i] >= 0.0) || !proj.allowed(i)) g[i] = prev[i] - beta * g[i];
  }
  return out;
}

double fourier_residual(const ImageGrid& image, const MagnitudeConstraint& c) {
  check_grid(image, c);
  detail::Projector proj(c);
  return proj.residual(image.samples());
}

}  // namespace spk
