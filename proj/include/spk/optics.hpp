#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "spk/image.hpp"

namespace spk {

/// Geometry of the hidden-object / diffuser / camera arrangement. All
/// lengths in meters. The simulation grid is grid_size x grid_size pixels of
/// pixel_pitch, shared by the diffuser plane and the camera plane.
struct OpticsConfig {
  double object_distance = 0.60;   // object -> diffuser
  double camera_distance = 0.12;   // diffuser -> camera
  double iris_diameter = 3.3e-3;
  double pixel_pitch = 7.7e-6;
  std::size_t grid_size = 512;
  double refractive_index_minus_one = 0.5;

  /// Throws Error(Range) naming the first offending field.
  void validate() const;
};

/// Random surface-height map of a thin diffuser. The phase delay at
/// wavelength lambda is 2*pi*(n-1)*h/lambda, so different wavelengths see
/// different phase screens.
struct DiffuserScreen {
  ImageGrid heights;
  double correlation_length;
};

/// Sampled spectrum: strictly increasing wavelengths (m), weights summing to 1.
struct SpectralWeights {
  std::vector<double> wavelengths;
  std::vector<double> weights;

  void validate() const;
};

/// Zero-mean Gaussian height field with the requested RMS and a Gaussian
/// correlation of 1/e length `correlation_length`. A correlation length of
/// one pixel gives independent pixels; rms_height = 0 gives a flat screen.
DiffuserScreen make_diffuser(const OpticsConfig& cfg, double rms_height, double correlation_length,
                             std::uint64_t seed);

/// Scalar free-space propagation with the angular-spectrum transfer function
/// exp(i*2*pi*z*sqrt(1/lambda^2 - fx^2 - fy^2)); evanescent bins are zeroed.
/// Negative distance back-propagates.
ComplexField angular_spectrum_propagate(const ComplexField& field, double distance, double wavelength);

/// Camera-plane intensity of an on-axis point source seen through the
/// diffuser and the circular iris, normalized to unit sum.
ImageGrid psf_at_wavelength(const OpticsConfig& cfg, const DiffuserScreen& screen, double wavelength);

/// Incoherent image O * PSF (circular, FFT based). The PSF origin is its
/// center pixel (H/2, W/2), so a centered delta PSF reproduces the object.
ImageGrid monochromatic_speckle(const ImageGrid& object, const ImageGrid& psf);

/// Gaussian spectral weights sampled at lo, lo+step, ... <= hi.
SpectralWeights gaussian_weights(double center, double fwhm, double lo, double hi, double step);

/// Sum over the spectrum of alpha * PSF(lambda), all wavelengths sharing one
/// screen. Wavelengths are evaluated in parallel and summed in order.
ImageGrid broadband_psf(const OpticsConfig& cfg, const DiffuserScreen& screen, const SpectralWeights& weights,
                        unsigned workers = 1);

/// Broadband camera frame sum_lambda alpha * [O * PSF(lambda)].
ImageGrid broadband_speckle(const ImageGrid& object, const OpticsConfig& cfg, const DiffuserScreen& screen,
                            const SpectralWeights& weights, unsigned workers = 1);

}  // namespace spk
