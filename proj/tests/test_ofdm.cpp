// SPDX-License-Identifier: Apache-2.0
// Subcarrier bookkeeping, channel synthesis, estimation, and impulse
// responses.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>

#include "rfscene/ofdm.hpp"
#include "rfscene/random.hpp"

using namespace rfscene;
using cd = std::complex<double>;

namespace {

constexpr double kTau = 2.0 * 3.14159265358979323846;

AntennaArray single_element_array() {
  AntennaArray a;
  a.tx_positions = {{0, 0, 0}};
  a.rx_positions = {{0, 0, 0}};
  a.wavelength = kSpeedOfLight / 60e9;
  return a;
}

// Reference inverse transform, quadratic in K on purpose.
std::vector<cd> naive_idft(const std::vector<cd>& h, double scale_by_k) {
  const std::size_t k_total = h.size();
  std::vector<cd> out(k_total);
  for (std::size_t n = 0; n < k_total; ++n) {
    cd acc{0, 0};
    for (std::size_t k = 0; k < k_total; ++k) {
      acc += h[k] * std::polar(1.0, kTau * static_cast<double>(k * n % k_total) /
                                        static_cast<double>(k_total));
    }
    out[n] = acc / scale_by_k;
  }
  return out;
}

}  // namespace

TEST_CASE("valid subcarriers straddle DC symmetrically") {
  OfdmConfig cfg;
  cfg.fft_size = 8;

  cfg.valid_subcarriers = 4;
  CHECK(cfg.valid_indices() == std::vector<int>{1, 2, 6, 7});
  CHECK_FALSE(cfg.is_valid_subcarrier(0));
  CHECK_FALSE(cfg.is_valid_subcarrier(3));
  CHECK(cfg.is_valid_subcarrier(6));

  cfg.valid_subcarriers = 5;  // odd count: the extra bin goes to the positive side
  CHECK(cfg.valid_indices() == std::vector<int>{1, 2, 3, 6, 7});

  cfg.valid_subcarriers = 8;  // fully loaded grid includes DC
  CHECK(cfg.valid_indices() == std::vector<int>{0, 1, 2, 3, 4, 5, 6, 7});

  OfdmConfig dflt;
  CHECK(dflt.valid_indices().size() == 900);
}

TEST_CASE("upper half of the FFT grid carries negative frequencies") {
  OfdmConfig cfg;
  cfg.fft_size = 8;
  cfg.bandwidth_hz = 8e8;  // 1e8 spacing
  CHECK(cfg.subcarrier_spacing() == doctest::Approx(1e8).epsilon(1e-12));
  CHECK(cfg.subcarrier_frequency(0) == 0.0);
  CHECK(cfg.subcarrier_frequency(3) == doctest::Approx(3e8).epsilon(1e-12));
  CHECK(cfg.subcarrier_frequency(4) == doctest::Approx(-4e8).epsilon(1e-12));
  CHECK(cfg.subcarrier_frequency(7) == doctest::Approx(-1e8).epsilon(1e-12));
}

TEST_CASE("generated symbols are unit QPSK on valid bins and zero on guards") {
  OfdmConfig cfg;
  cfg.fft_size = 64;
  cfg.valid_subcarriers = 40;
  const auto x = gen_symbols(2, 3, cfg, 99);
  REQUIRE(x.dim0() == 2);
  REQUIRE(x.dim1() == 3);
  REQUIRE(x.dim2() == 64);

  const double q = 1.0 / std::sqrt(2.0);
  for (std::size_t i = 0; i < 2; ++i) {
    for (std::size_t j = 0; j < 3; ++j) {
      for (int k = 0; k < 64; ++k) {
        const cd v = x(i, j, k);
        if (cfg.is_valid_subcarrier(k)) {
          CHECK(std::abs(std::abs(v.real()) - q) < 1e-15);
          CHECK(std::abs(std::abs(v.imag()) - q) < 1e-15);
        } else {
          CHECK(v == cd{0, 0});
        }
      }
    }
  }

  // Seeded: identical draw, and distinct pairs get distinct sequences.
  const auto y = gen_symbols(2, 3, cfg, 99);
  bool same = true, pairs_differ = false;
  for (std::size_t f = 0; f < x.size(); ++f) same = same && x[f] == y[f];
  CHECK(same);
  for (int k = 0; k < 64 && !pairs_differ; ++k) {
    pairs_differ = x(0, 0, k) != x(1, 2, k);
  }
  CHECK(pairs_differ);
}

TEST_CASE("no echoes and no noise leave an empty receive spectrum") {
  OfdmConfig cfg;
  cfg.fft_size = 64;
  cfg.valid_subcarriers = 40;
  cfg.noise_snr_db.reset();
  const auto array = single_element_array();
  const auto x = gen_symbols(1, 1, cfg, 5);
  const auto y = synthesize_rx({}, array, Pose{}, x, cfg, 5);
  for (std::size_t f = 0; f < y.size(); ++f) CHECK(y[f] == cd{0, 0});
}

TEST_CASE("single echo has flat magnitude across valid bins") {
  OfdmConfig cfg;
  cfg.fft_size = 128;
  cfg.valid_subcarriers = 100;
  cfg.noise_snr_db.reset();
  const auto array = single_element_array();
  const auto x = gen_symbols(1, 1, cfg, 6);

  PropagationPath p;
  p.kind = PathKind::direct;
  p.amplitude = {0.25, 0.0};
  p.apparent_position = {0.4, 2.0, -0.3};
  const auto y = synthesize_rx({p}, array, Pose{}, x, cfg, 6);

  for (int k = 0; k < cfg.fft_size; ++k) {
    if (cfg.is_valid_subcarrier(k)) {
      CHECK(std::abs(y(0, 0, k) / x(0, 0, k)) == doctest::Approx(0.25).epsilon(1e-12));
    } else {
      CHECK(y(0, 0, k) == cd{0, 0});
    }
  }
}

TEST_CASE("channel estimation divides out the symbols") {
  OfdmConfig cfg;
  cfg.fft_size = 32;
  cfg.valid_subcarriers = 20;
  const auto x = gen_symbols(1, 2, cfg, 7);

  PairSpectrum y = x;
  auto h = estimate_channel(y, x, cfg);
  for (int k = 0; k < 32; ++k) {
    if (cfg.is_valid_subcarrier(k)) {
      CHECK(std::abs(h(0, 1, k) - cd{1, 0}) < 1e-12);
    } else {
      CHECK(h(0, 1, k) == cd{0, 0});
    }
  }

  for (std::size_t f = 0; f < y.size(); ++f) y[f] = cd{0, 2} * x[f];
  h = estimate_channel(y, x, cfg);
  for (int k = 0; k < 32; ++k) {
    if (cfg.is_valid_subcarrier(k)) CHECK(std::abs(h(0, 0, k) - cd{0, 2}) < 1e-12);
  }

  PairSpectrum bad = x;
  bad(0, 0, 1) = cd{0, 0};  // bin 1 is valid for this layout
  CHECK_THROWS_WITH_AS(static_cast<void>(estimate_channel(y, bad, cfg)),
                       doctest::Contains("subcarrier k=1"), std::invalid_argument);
}

TEST_CASE("flat spectrum collapses to the zero tap") {
  OfdmConfig cfg;
  cfg.fft_size = 64;
  cfg.valid_subcarriers = 64;  // fully loaded, no guard sidelobes
  PairSpectrum h(1, 1, 64, cd{1, 0});
  const auto cir = compute_cir(h, cfg);
  CHECK(std::abs(cir(0, 0, 0) - cd{1, 0}) < 1e-9);
  for (int n = 1; n < 64; ++n) CHECK(std::abs(cir(0, 0, n)) < 1e-9);
}

TEST_CASE("linear phase ramps shift the impulse") {
  OfdmConfig cfg;
  cfg.fft_size = 64;
  cfg.valid_subcarriers = 64;
  PairSpectrum h(1, 1, 64);
  for (int k = 0; k < 64; ++k) h(0, 0, k) = std::polar(1.0, -kTau * k * 20.0 / 64.0);
  const auto cir = compute_cir(h, cfg);
  int argmax = 0;
  for (int n = 1; n < 64; ++n) {
    if (std::abs(cir(0, 0, n)) > std::abs(cir(0, 0, argmax))) argmax = n;
  }
  CHECK(argmax == 20);
  CHECK(std::abs(cir(0, 0, 20)) == doctest::Approx(1.0).epsilon(1e-9));
  for (int n = 0; n < 64; ++n) {
    if (n != 20) CHECK(std::abs(cir(0, 0, n)) < 1e-9);
  }
}

TEST_CASE("fractional delays land between the bracketing taps") {
  // Frozen reference for an 8-point grid with a 2.5-tap phase ramp.
  OfdmConfig cfg;
  cfg.fft_size = 8;
  cfg.valid_subcarriers = 8;
  PairSpectrum h(1, 1, 8);
  for (int k = 0; k < 8; ++k) h(0, 0, k) = std::polar(1.0, -kTau * k * 2.5 / 8.0);
  const auto cir = compute_cir(h, cfg);
  CHECK(cir(0, 0, 2).real() == doctest::Approx(0.12500000000000028).epsilon(1e-10));
  CHECK(cir(0, 0, 2).imag() == doctest::Approx(-0.6284174365157312).epsilon(1e-10));
  CHECK(std::abs(cir(0, 0, 2)) == doctest::Approx(std::abs(cir(0, 0, 3))).epsilon(1e-12));
  int argmax = 0;
  for (int n = 1; n < 8; ++n) {
    if (std::abs(cir(0, 0, n)) > std::abs(cir(0, 0, argmax))) argmax = n;
  }
  CHECK((argmax == 2 || argmax == 3));
}

TEST_CASE("impulse response matches a quadratic-time reference transform") {
  OfdmConfig cfg;
  cfg.fft_size = 48;
  cfg.valid_subcarriers = 36;
  Rng rng(31);
  PairSpectrum h(2, 1, 48);
  std::vector<cd> flat0(48), flat1(48);
  for (int k = 0; k < 48; ++k) {
    if (!cfg.is_valid_subcarrier(k)) continue;
    h(0, 0, k) = cd{rng.uniform(-1, 1), rng.uniform(-1, 1)};
    h(1, 0, k) = cd{rng.uniform(-1, 1), rng.uniform(-1, 1)};
  }
  for (int k = 0; k < 48; ++k) {
    flat0[k] = h(0, 0, k);
    flat1[k] = h(1, 0, k);
  }

  const auto cir = compute_cir(h, cfg);
  const auto ref0 = naive_idft(flat0, 48.0);
  const auto ref1 = naive_idft(flat1, 48.0);
  for (int n = 0; n < 48; ++n) {
    CHECK(std::abs(cir(0, 0, n) - ref0[n]) < 1e-12);
    CHECK(std::abs(cir(1, 0, n) - ref1[n]) < 1e-12);
  }

  // Forward transform inverts it, and energy is conserved under the chosen
  // scaling.
  const auto back = compute_spectrum(cir, cfg);
  double h_energy = 0, cir_energy = 0;
  for (int k = 0; k < 48; ++k) {
    CHECK(std::abs(back(0, 0, k) - flat0[k]) < 1e-9);
    h_energy += std::norm(flat0[k]);
    cir_energy += std::norm(cir(0, 0, static_cast<std::size_t>(k)));
  }
  CHECK(cir_energy == doctest::Approx(h_energy / 48.0).epsilon(1e-9));
}

TEST_CASE("impulse responses add linearly across echo sets") {
  OfdmConfig cfg;
  cfg.fft_size = 128;
  cfg.valid_subcarriers = 100;
  cfg.noise_snr_db.reset();
  const auto array = single_element_array();
  const auto x = gen_symbols(1, 1, cfg, 8);

  PropagationPath p1, p2;
  p1.apparent_position = {0.1, 1.5, 0.0};
  p1.amplitude = {0.5, 0.0};
  p2.apparent_position = {-0.4, 3.2, 0.2};
  p2.amplitude = {0.2, 0.0};

  const auto h1 = estimate_channel(synthesize_rx({p1}, array, Pose{}, x, cfg, 8), x, cfg);
  const auto h2 = estimate_channel(synthesize_rx({p2}, array, Pose{}, x, cfg, 8), x, cfg);
  const auto h12 = estimate_channel(synthesize_rx({p1, p2}, array, Pose{}, x, cfg, 8), x, cfg);
  const auto c1 = compute_cir(h1, cfg);
  const auto c2 = compute_cir(h2, cfg);
  const auto c12 = compute_cir(h12, cfg);
  for (int n = 0; n < 128; ++n) {
    CHECK(std::abs(c12(0, 0, n) - (c1(0, 0, n) + c2(0, 0, n))) < 1e-9);
  }
}

TEST_CASE("channel estimates do not depend on the transmitted symbols") {
  OfdmConfig cfg;
  cfg.fft_size = 256;
  cfg.valid_subcarriers = 200;
  cfg.noise_snr_db.reset();
  const auto array = single_element_array();

  PropagationPath p;
  p.apparent_position = {0.3, 2.4, -0.1};
  p.amplitude = {0.4, 0.0};

  const auto xa = gen_symbols(1, 1, cfg, 100);
  const auto xb = gen_symbols(1, 1, cfg, 101);
  const auto ha = estimate_channel(synthesize_rx({p}, array, Pose{}, xa, cfg, 1), xa, cfg);
  const auto hb = estimate_channel(synthesize_rx({p}, array, Pose{}, xb, cfg, 2), xb, cfg);
  for (int k = 0; k < 256; ++k) {
    CHECK(std::abs(ha(0, 0, k) - hb(0, 0, k)) < 1e-9);
  }
}

TEST_CASE("tap index tracks range end to end") {
  OfdmConfig cfg;  // defaults: K 1024, V 900, B 1.2288 GHz
  cfg.noise_snr_db.reset();
  const auto array = single_element_array();
  const auto x = gen_symbols(1, 1, cfg, 9);
  const double dr = kSpeedOfLight / (2.0 * cfg.bandwidth_hz);

  Rng rng(32);
  for (int trial = 0; trial < 12; ++trial) {
    const double r = rng.uniform(0.5, 6.0);
    Scene scene;
    scene.scatterers.push_back({{0, r, 0}, 1.0});
    const auto paths = enumerate_paths(scene, Pose{}, PathParams{});
    REQUIRE(paths.size() == 1);
    const auto y = synthesize_rx(paths, array, Pose{}, x, cfg, 9);
    const auto cir = compute_cir(estimate_channel(y, x, cfg), cfg);

    int argmax = 0;
    for (int n = 1; n < cfg.fft_size; ++n) {
      if (std::abs(cir(0, 0, n)) > std::abs(cir(0, 0, argmax))) argmax = n;
    }
    const double exact = r / dr;
    const int lo = static_cast<int>(std::floor(exact));
    const int hi = static_cast<int>(std::ceil(exact));
    CHECK((argmax == lo || argmax == hi));
  }
}

TEST_CASE("noise power tracks the configured SNR and stays seeded") {
  OfdmConfig cfg;
  cfg.noise_snr_db = 20.0;
  OfdmConfig clean = cfg;
  clean.noise_snr_db.reset();
  const auto array = single_element_array();
  const auto x = gen_symbols(1, 1, cfg, 10);

  PropagationPath p;
  p.apparent_position = {0.0, 2.0, 0.0};
  p.amplitude = {1.0, 0.0};

  const auto y_clean = synthesize_rx({p}, array, Pose{}, x, clean, 11);
  const auto y_a = synthesize_rx({p}, array, Pose{}, x, cfg, 11);
  const auto y_b = synthesize_rx({p}, array, Pose{}, x, cfg, 11);
  const auto y_c = synthesize_rx({p}, array, Pose{}, x, cfg, 12);

  double signal = 0, noise = 0;
  int bins = 0;
  bool identical = true, reseeded_differs = false;
  for (int k = 0; k < cfg.fft_size; ++k) {
    if (!cfg.is_valid_subcarrier(k)) {
      CHECK(y_a(0, 0, k) == cd{0, 0});
      continue;
    }
    signal += std::norm(y_clean(0, 0, k));
    noise += std::norm(y_a(0, 0, k) - y_clean(0, 0, k));
    ++bins;
    identical = identical && y_a(0, 0, k) == y_b(0, 0, k);
    reseeded_differs = reseeded_differs || y_a(0, 0, k) != y_c(0, 0, k);
  }
  CHECK(identical);
  CHECK(reseeded_differs);
  const double snr = (signal / bins) / (noise / bins);
  CHECK(snr == doctest::Approx(100.0).epsilon(0.2));
}
