// SPDX-License-Identifier: Apache-2.0
// Part of rfscene, a monostatic OFDM sensing and 3D reconstruction toolkit.
//
// Frequency-domain channel synthesis and channel impulse response (CIR)
// estimation. One OFDM symbol per antenna pair per frame; the receive signal
// is modeled directly on the subcarrier grid, so there is no time-domain
// waveform stage.

#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <vector>

#include "rfscene/array.hpp"
#include "rfscene/geometry.hpp"
#include "rfscene/scene.hpp"

namespace rfscene {

struct OfdmConfig {
  int fft_size = 1024;            // subcarrier count K
  int valid_subcarriers = 900;    // populated bins; the rest are guards
  double bandwidth_hz = 1.2288e9; // sample rate = occupied bandwidth
  double carrier_hz = 60e9;
  std::optional<double> noise_snr_db = 20.0;  // nullopt disables noise

  double wavelength() const { return kSpeedOfLight / carrier_hz; }
  double subcarrier_spacing() const { return bandwidth_hz / fft_size; }

  // Baseband frequency of bin k; the upper half of the FFT grid holds
  // negative frequencies.
  double subcarrier_frequency(int k) const {
    int idx = (k < fft_size / 2) ? k : k - fft_size;
    return idx * subcarrier_spacing();
  }

  // Valid bins sit symmetrically around DC: {1..ceil(V/2)} and the mirror
  // negative bins. When every bin is valid (V == K) DC is included too.
  bool is_valid_subcarrier(int k) const;
  std::vector<int> valid_indices() const;
};

// Complex spectra or impulse responses per antenna pair: (tx, rx, bin).
using PairSpectrum = Array3<std::complex<double>>;
using CirTensor = Array3<std::complex<double>>;

// Unit-magnitude QPSK symbols on valid bins, zero on guards, one vector per
// antenna pair, drawn from the "symbols" sub-stream of `seed`.
PairSpectrum gen_symbols(std::size_t n_tx, std::size_t n_rx, const OfdmConfig& cfg,
                         std::uint64_t seed);

// Received spectrum per antenna pair:
//   Y_ij(k) = sum_p a_p X_ij(k) exp(-i 2 pi (f_c + f_k) tau_p,ij) + noise.
// Delays use exact element positions (sensor pose applied to the array), so
// inter-element carrier phase differences carry the direction information.
// Noise is circular complex Gaussian per valid bin, scaled so that mean
// signal power / noise power = 10^(snr/10) per pair, drawn from the "noise"
// sub-stream of `seed` independently per pair.
PairSpectrum synthesize_rx(const std::vector<PropagationPath>& paths, const AntennaArray& array,
                           const Pose& sensor_pose, const PairSpectrum& symbols,
                           const OfdmConfig& cfg, std::uint64_t seed);

// Least-squares channel estimate H(k) = Y(k)/X(k) on valid bins, zero on
// guards. Throws if X is zero on a valid bin, naming the bin.
PairSpectrum estimate_channel(const PairSpectrum& y, const PairSpectrum& x,
                              const OfdmConfig& cfg);

// Impulse response per pair: length-K inverse DFT of H with 1/K scaling.
// Tap n corresponds to round-trip range n * c / (2 * bandwidth).
CirTensor compute_cir(const PairSpectrum& h_freq, const OfdmConfig& cfg);

// Forward DFT (no scaling), the inverse of compute_cir's transform.
PairSpectrum compute_spectrum(const CirTensor& cir, const OfdmConfig& cfg);

}  // namespace rfscene
