// SPDX-License-Identifier: Apache-2.0
// Part of rfscene, a monostatic OFDM sensing and 3D reconstruction toolkit.

#include "rfscene/ofdm.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

#include "rfscene/parallel.hpp"
#include "rfscene/random.hpp"

namespace rfscene {

namespace {

constexpr double kTwoPi = 2.0 * 3.14159265358979323846;

void check_ofdm(const OfdmConfig& cfg) {
  if (cfg.fft_size <= 0) throw std::invalid_argument("ofdm: fft_size must be > 0");
  if (cfg.valid_subcarriers <= 0 || cfg.valid_subcarriers > cfg.fft_size) {
    throw std::invalid_argument("ofdm: need 0 < valid_subcarriers <= fft_size");
  }
  if (cfg.bandwidth_hz <= 0.0 || cfg.carrier_hz <= 0.0) {
    throw std::invalid_argument("ofdm: bandwidth and carrier must be > 0");
  }
}

// FFTW planning is not thread safe; executing a cached plan on private
// buffers is. Plans are created unaligned so any buffer works.
class PlanCache {
 public:
  void run(int n, int sign, const std::complex<double>* in, std::complex<double>* out) {
    fftw_plan plan;
    {
      std::lock_guard<std::mutex> lock(mutex_);
      auto key = std::make_pair(n, sign);
      auto it = plans_.find(key);
      if (it == plans_.end()) {
        std::vector<std::complex<double>> a(n), b(n);
        plan = fftw_plan_dft_1d(n, reinterpret_cast<fftw_complex*>(a.data()),
                                reinterpret_cast<fftw_complex*>(b.data()), sign,
                                FFTW_ESTIMATE | FFTW_UNALIGNED);
        plans_.emplace(key, plan);
      } else {
        plan = it->second;
      }
    }
    // Out-of-place c2c transforms leave the input intact.
    fftw_execute_dft(plan, reinterpret_cast<fftw_complex*>(const_cast<std::complex<double>*>(in)),
                     reinterpret_cast<fftw_complex*>(out));
  }

 private:
  std::mutex mutex_;
  std::map<std::pair<int, int>, fftw_plan> plans_;
};

PlanCache& plan_cache() {
  static PlanCache cache;
  return cache;
}

}  // namespace

bool OfdmConfig::is_valid_subcarrier(int k) const {
  if (k < 0 || k >= fft_size) return false;
  if (valid_subcarriers == fft_size) return true;
  const int n_pos = (valid_subcarriers + 1) / 2;
  const int n_neg = valid_subcarriers / 2;
  return (k >= 1 && k <= n_pos) || k >= fft_size - n_neg;
}

std::vector<int> OfdmConfig::valid_indices() const {
  std::vector<int> idx;
  idx.reserve(valid_subcarriers);
  if (valid_subcarriers == fft_size) {
    for (int k = 0; k < fft_size; ++k) idx.push_back(k);
    return idx;
  }
  const int n_pos = (valid_subcarriers + 1) / 2;
  const int n_neg = valid_subcarriers / 2;
  for (int k = 1; k <= n_pos; ++k) idx.push_back(k);
  for (int k = fft_size - n_neg; k < fft_size; ++k) idx.push_back(k);
  return idx;
}

PairSpectrum gen_symbols(std::size_t n_tx, std::size_t n_rx, const OfdmConfig& cfg,
                         std::uint64_t seed) {
  check_ofdm(cfg);
  if (n_tx == 0 || n_rx == 0) throw std::invalid_argument("gen_symbols: empty array");
  PairSpectrum x(n_tx, n_rx, cfg.fft_size);
  const auto valid = cfg.valid_indices();
  const double amp = 1.0 / std::sqrt(2.0);
  for (std::size_t i = 0; i < n_tx; ++i) {
    for (std::size_t j = 0; j < n_rx; ++j) {
      Rng rng(derive_seed(seed, "symbols", i, j));
      for (int k : valid) {
        const std::uint64_t u = rng.next_u64();
        x(i, j, k) = {(u & 1) ? amp : -amp, (u & 2) ? amp : -amp};
      }
    }
  }
  return x;
}

PairSpectrum synthesize_rx(const std::vector<PropagationPath>& paths, const AntennaArray& array,
                           const Pose& sensor_pose, const PairSpectrum& symbols,
                           const OfdmConfig& cfg, std::uint64_t seed) {
  check_ofdm(cfg);
  const std::size_t n_tx = array.tx_positions.size();
  const std::size_t n_rx = array.rx_positions.size();
  if (n_tx == 0 || n_rx == 0) throw std::invalid_argument("synthesize_rx: empty array");
  if (symbols.dim0() != n_tx || symbols.dim1() != n_rx ||
      symbols.dim2() != static_cast<std::size_t>(cfg.fft_size)) {
    throw std::invalid_argument("synthesize_rx: symbol tensor shape mismatch");
  }
  if (!is_rigid(sensor_pose)) throw std::invalid_argument("synthesize_rx: pose is not rigid");

  std::vector<Eigen::Vector3d> tx_world(n_tx), rx_world(n_rx);
  for (std::size_t i = 0; i < n_tx; ++i) tx_world[i] = sensor_pose.apply(array.tx_positions[i]);
  for (std::size_t j = 0; j < n_rx; ++j) rx_world[j] = sensor_pose.apply(array.rx_positions[j]);

  const auto valid = cfg.valid_indices();
  PairSpectrum y(n_tx, n_rx, cfg.fft_size);

  parallel_for(0, n_tx * n_rx, [&](std::size_t pair) {
    const std::size_t i = pair / n_rx;
    const std::size_t j = pair % n_rx;
    for (const auto& path : paths) {
      const double tau = path.delay_seconds(tx_world[i], rx_world[j]);
      for (int k : valid) {
        const double phase = -kTwoPi * (cfg.carrier_hz + cfg.subcarrier_frequency(k)) * tau;
        y(i, j, k) += path.amplitude * symbols(i, j, k) * std::polar(1.0, phase);
      }
    }
    if (cfg.noise_snr_db) {
      double signal_power = 0.0;
      for (int k : valid) signal_power += std::norm(y(i, j, k));
      signal_power /= static_cast<double>(valid.size());
      if (signal_power > 0.0) {
        const double noise_power = signal_power / std::pow(10.0, *cfg.noise_snr_db / 10.0);
        const double sigma = std::sqrt(noise_power / 2.0);
        Rng rng(derive_seed(seed, "noise", i, j));
        for (int k : valid) {
          const double re = rng.gaussian();
          const double im = rng.gaussian();
          y(i, j, k) += std::complex<double>(sigma * re, sigma * im);
        }
      }
    }
  });
  return y;
}

PairSpectrum estimate_channel(const PairSpectrum& y, const PairSpectrum& x,
                              const OfdmConfig& cfg) {
  check_ofdm(cfg);
  if (!y.same_shape(x)) throw std::invalid_argument("estimate_channel: Y/X shape mismatch");
  if (y.dim2() != static_cast<std::size_t>(cfg.fft_size)) {
    throw std::invalid_argument("estimate_channel: tensor bin count != fft_size");
  }
  const auto valid = cfg.valid_indices();
  PairSpectrum h(y.dim0(), y.dim1(), y.dim2());
  for (std::size_t i = 0; i < y.dim0(); ++i) {
    for (std::size_t j = 0; j < y.dim1(); ++j) {
      for (int k : valid) {
        const std::complex<double> xv = x(i, j, k);
        if (xv == std::complex<double>(0.0, 0.0)) {
          throw std::invalid_argument("estimate_channel: zero symbol on valid subcarrier k=" +
                                      std::to_string(k) + " (tx=" + std::to_string(i) +
                                      ", rx=" + std::to_string(j) + ")");
        }
        h(i, j, k) = y(i, j, k) / xv;
      }
    }
  }
  return h;
}

CirTensor compute_cir(const PairSpectrum& h_freq, const OfdmConfig& cfg) {
  check_ofdm(cfg);
  const int k_bins = cfg.fft_size;
  if (h_freq.dim2() != static_cast<std::size_t>(k_bins)) {
    throw std::invalid_argument("compute_cir: tensor bin count != fft_size");
  }
  CirTensor cir(h_freq.dim0(), h_freq.dim1(), h_freq.dim2());
  const double scale = 1.0 / k_bins;
  parallel_for(0, h_freq.dim0() * h_freq.dim1(), [&](std::size_t pair) {
    const std::complex<double>* in = h_freq.data() + pair * k_bins;
    std::complex<double>* out = cir.data() + pair * k_bins;
    plan_cache().run(k_bins, FFTW_BACKWARD, in, out);
    for (int n = 0; n < k_bins; ++n) out[n] *= scale;
  });
  return cir;
}

PairSpectrum compute_spectrum(const CirTensor& cir, const OfdmConfig& cfg) {
  check_ofdm(cfg);
  const int k_bins = cfg.fft_size;
  if (cir.dim2() != static_cast<std::size_t>(k_bins)) {
    throw std::invalid_argument("compute_spectrum: tensor bin count != fft_size");
  }
  PairSpectrum h(cir.dim0(), cir.dim1(), cir.dim2());
  parallel_for(0, cir.dim0() * cir.dim1(), [&](std::size_t pair) {
    const std::complex<double>* in = cir.data() + pair * k_bins;
    std::complex<double>* out = h.data() + pair * k_bins;
    plan_cache().run(k_bins, FFTW_FORWARD, in, out);
  });
  return h;
}

}  // namespace rfscene
