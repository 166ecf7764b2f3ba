// SPDX-License-Identifier: Apache-2.0
//
// Helpers shared by the unit and acceptance suites: scenario generators,
// finite differences and sample-based oracles that go through none of the
// closed-form statistics code.
#pragma once

#include <cmath>
#include <functional>
#include <map>
#include <mutex>

#include "quantmimo/linalg.hpp"
#include "quantmimo/quantization.hpp"
#include "quantmimo/random.hpp"
#include "quantmimo/statistics.hpp"
#include "quantmimo/system_model.hpp"

namespace qm_test {

using namespace quantmimo;

inline const Quantizer& cached_quantizer(int bits) {
  static std::map<int, Quantizer> cache;
  static std::mutex mutex;
  std::lock_guard lock(mutex);
  auto it = cache.find(bits);
  if (it == cache.end()) it = cache.emplace(bits, build_quantizer(bits)).first;
  return it->second;
}

inline SystemConfig small_config(int users, int tx, int rx, double snr_db,
                                 SnrReference ref = SnrReference::ReceivedPerAntenna) {
  ConfigParams p;
  p.users = users;
  p.tx_antennas = tx;
  p.rx_antennas = rx;
  p.snr_db = snr_db;
  p.snr_reference = ref;
  return make_config(p);
}

inline CMatrix random_cmatrix(RandomStream& rng, Eigen::Index rows, Eigen::Index cols) {
  CMatrix m(rows, cols);
  for (Eigen::Index c = 0; c < cols; ++c) {
    for (Eigen::Index r = 0; r < rows; ++r) m(r, c) = rng.complex_normal(1.0);
  }
  return m;
}

inline RVector random_rvector(RandomStream& rng, Eigen::Index n, double lo, double hi) {
  RVector v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = lo + (hi - lo) * rng.uniform();
  return v;
}

struct Scenario {
  SystemConfig cfg;
  ChannelMatrix h;
  int bits = 3;
};

// Random dimensions drawn from the given menus, rx >= streams enforced.
inline Scenario random_scenario(RandomStream& rng, std::initializer_list<int> rx_menu,
                                std::initializer_list<int> stream_menu, std::initializer_list<int> bits_menu,
                                double snr_lo = -5.0, double snr_hi = 15.0) {
  auto pick = [&rng](std::initializer_list<int> menu) {
    const auto idx = static_cast<std::size_t>(rng.uniform() * static_cast<double>(menu.size()));
    return *(menu.begin() + std::min(idx, menu.size() - 1));
  };
  for (;;) {
    const int rx = pick(rx_menu);
    const int streams = pick(stream_menu);
    if (rx < streams) continue;
    const int tx = streams % 2 == 0 && rng.uniform() < 0.5 ? 2 : 1;
    const double snr = snr_lo + (snr_hi - snr_lo) * rng.uniform();
    Scenario s{small_config(streams / tx, tx, rx, snr), {}, pick(bits_menu)};
    s.h = gen_channel(s.cfg, rng);
    return s;
  }
}

inline double rel_frobenius(const CMatrix& a, const CMatrix& b) { return (a - b).norm() / b.norm(); }

inline RVector central_difference(const std::function<double(const RVector&)>& f, const RVector& x, double h) {
  RVector grad(x.size());
  for (Eigen::Index j = 0; j < x.size(); ++j) {
    RVector xp = x;
    RVector xm = x;
    xp(j) += h;
    xm(j) -= h;
    grad(j) = (f(xp) - f(xm)) / (2.0 * h);
  }
  return grad;
}

// Draws from the linear quantization model: y = Hx + n and q = -rho*y + e,
// where e is circular Gaussian with the diagonal covariance rho(1-rho)diag(R_yy)
// and independent of (x, y). Produces R_yq = -rho R_yy and
// R_qq = rho R_yy - rho(1-rho) nondiag(R_yy) with no use of those formulas.
struct ModelDraw {
  CVector x;
  CVector y;
  CVector q;
};

class LinearModelSampler {
 public:
  LinearModelSampler(const ChannelMatrix& h, const SystemConfig& cfg, double rho, std::uint64_t seed)
      : h_(h), cfg_(cfg), rho_(rho), rng_(seed), e_var_(h.rows()) {
    for (Eigen::Index i = 0; i < h.rows(); ++i) {
      const double ryy = cfg.symbol_energy * h.entries.row(i).squaredNorm() + cfg.noise_variance;
      e_var_(i) = rho * (1.0 - rho) * ryy;
    }
  }

  ModelDraw draw() {
    ModelDraw d;
    d.x = CVector(cfg_.streams());
    // Gaussian symbols keep the second-order statistics of any constellation.
    for (Eigen::Index k = 0; k < d.x.size(); ++k) d.x(k) = rng_.complex_normal(cfg_.symbol_energy);
    d.y = h_.entries * d.x;
    for (Eigen::Index i = 0; i < d.y.size(); ++i) d.y(i) += rng_.complex_normal(cfg_.noise_variance);
    d.q = -rho_ * d.y;
    for (Eigen::Index i = 0; i < d.q.size(); ++i) d.q(i) += rng_.complex_normal(e_var_(i));
    return d;
  }

 private:
  ChannelMatrix h_;
  SystemConfig cfg_;
  double rho_;
  RandomStream rng_;
  RVector e_var_;
};

}  // namespace qm_test
