// SPDX-License-Identifier: Apache-2.0
#include "quantmimo/system_model.hpp"

#include <charconv>
#include <cmath>

#include "quantmimo/errors.hpp"

namespace quantmimo {

Modulation parse_modulation(std::string_view name) {
  if (name == "bpsk" || name == "BPSK") return Modulation::Bpsk;
  if (name == "qpsk" || name == "QPSK") return Modulation::Qpsk;
  throw ValidationError("unsupported modulation '" + std::string(name) + "'");
}

std::string_view to_string(Modulation m) { return m == Modulation::Bpsk ? "bpsk" : "qpsk"; }

int bits_per_symbol(Modulation m) { return m == Modulation::Bpsk ? 1 : 2; }

SnrReference parse_snr_reference(std::string_view name) {
  if (name == "rx") return SnrReference::ReceivedPerAntenna;
  if (name == "tx") return SnrReference::TransmitPerAntenna;
  throw ValidationError("unknown SNR reference '" + std::string(name) + "' (expected rx or tx)");
}

std::string_view to_string(SnrReference r) {
  return r == SnrReference::ReceivedPerAntenna ? "rx" : "tx";
}

std::string snr_convention(SnrReference r) {
  if (r == SnrReference::ReceivedPerAntenna) {
    return "SNR_dB = 10*log10(K*N_T*sigma_x^2 / sigma_n^2): average received signal power per BS "
           "antenna over per-antenna noise variance";
  }
  return "SNR_dB = 10*log10(sigma_x^2 / sigma_n^2): per-transmit-antenna symbol energy over "
         "per-receive-antenna noise variance";
}

double noise_variance_for(double snr_db, double symbol_energy, int streams, SnrReference ref) {
  const double signal = ref == SnrReference::ReceivedPerAntenna ? streams * symbol_energy
                                                                : symbol_energy;
  return signal * std::pow(10.0, -snr_db / 10.0);
}

SystemConfig make_config(const ConfigParams& p) {
  auto positive = [](int v, const char* name) {
    if (v <= 0) throw DomainError(std::string(name) + " must be positive, got " + std::to_string(v));
  };
  positive(p.users, "users");
  positive(p.tx_antennas, "tx_antennas");
  positive(p.rx_antennas, "rx_antennas");
  positive(p.bits, "bits");
  positive(p.packet_len, "packet_len");
  positive(p.n_packets, "n_packets");
  if (!(p.symbol_energy > 0.0) || !std::isfinite(p.symbol_energy)) {
    throw DomainError("symbol_energy must be positive and finite");
  }
  if (!std::isfinite(p.snr_db)) throw DomainError("snr_db must be finite");
  if (p.rx_antennas < p.users * p.tx_antennas) {
    throw InvalidDimensionError("rx_antennas (" + std::to_string(p.rx_antennas) +
                                ") must be at least users*tx_antennas (" +
                                std::to_string(p.users * p.tx_antennas) + ")");
  }

  SystemConfig cfg;
  cfg.users = p.users;
  cfg.tx_antennas = p.tx_antennas;
  cfg.rx_antennas = p.rx_antennas;
  cfg.bits = p.bits;
  cfg.snr_db = p.snr_db;
  cfg.symbol_energy = p.symbol_energy;
  cfg.packet_len = p.packet_len;
  cfg.n_packets = p.n_packets;
  cfg.seed = p.seed;
  cfg.modulation = p.modulation;
  cfg.snr_reference = p.snr_reference;
  cfg.noise_variance = noise_variance_for(p.snr_db, p.symbol_energy, cfg.streams(), p.snr_reference);
  return cfg;
}

namespace {

const std::string& require(const ParamMap& raw, const std::string& key) {
  auto it = raw.find(key);
  if (it == raw.end()) throw ValidationError("missing required parameter '" + key + "'");
  return it->second;
}

template <typename T>
T parse_number(const std::string& key, const std::string& text) {
  T value{};
  const auto* first = text.data();
  const auto* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last) {
    throw ValidationError("parameter '" + key + "': cannot parse '" + text + "'");
  }
  return value;
}

}  // namespace

SystemConfig make_config(const ParamMap& raw) {
  ConfigParams p;
  p.users = parse_number<int>("users", require(raw, "users"));
  p.tx_antennas = parse_number<int>("tx_antennas", require(raw, "tx_antennas"));
  p.rx_antennas = parse_number<int>("rx_antennas", require(raw, "rx_antennas"));
  p.snr_db = parse_number<double>("snr_db", require(raw, "snr_db"));
  if (auto it = raw.find("bits"); it != raw.end()) p.bits = parse_number<int>("bits", it->second);
  if (auto it = raw.find("symbol_energy"); it != raw.end()) {
    p.symbol_energy = parse_number<double>("symbol_energy", it->second);
  }
  if (auto it = raw.find("packet_len"); it != raw.end()) {
    p.packet_len = parse_number<int>("packet_len", it->second);
  }
  if (auto it = raw.find("n_packets"); it != raw.end()) {
    p.n_packets = parse_number<int>("n_packets", it->second);
  }
  if (auto it = raw.find("seed"); it != raw.end()) {
    p.seed = parse_number<std::uint64_t>("seed", it->second);
  }
  if (auto it = raw.find("modulation"); it != raw.end()) p.modulation = parse_modulation(it->second);
  if (auto it = raw.find("snr_reference"); it != raw.end()) {
    p.snr_reference = parse_snr_reference(it->second);
  }
  return make_config(p);
}

SystemConfig with_snr(const SystemConfig& cfg, double snr_db) {
  SystemConfig out = cfg;
  out.snr_db = snr_db;
  out.noise_variance = noise_variance_for(snr_db, cfg.symbol_energy, cfg.streams(), cfg.snr_reference);
  return out;
}

SystemConfig with_bits(const SystemConfig& cfg, int bits) {
  if (bits <= 0) throw DomainError("bits must be positive");
  SystemConfig out = cfg;
  out.bits = bits;
  return out;
}

ChannelMatrix gen_channel(const SystemConfig& cfg, RandomStream& rng) {
  ChannelMatrix h{CMatrix(cfg.rx_antennas, cfg.streams())};
  // column-major fill keeps the draw order stable across Eigen versions
  for (Eigen::Index c = 0; c < h.entries.cols(); ++c) {
    for (Eigen::Index r = 0; r < h.entries.rows(); ++r) h.entries(r, c) = rng.complex_normal(1.0);
  }
  return h;
}

namespace {

Complex draw_symbol(Modulation m, double amplitude, RandomStream& rng) {
  if (m == Modulation::Bpsk) return {rng.bit() ? amplitude : -amplitude, 0.0};
  const double a = amplitude / std::sqrt(2.0);
  const double re = rng.bit() ? a : -a;
  const double im = rng.bit() ? a : -a;
  return {re, im};
}

}  // namespace

SymbolVector gen_symbols(const SystemConfig& cfg, RandomStream& rng) {
  const double amplitude = std::sqrt(cfg.symbol_energy);
  SymbolVector x(cfg.streams());
  for (Eigen::Index i = 0; i < x.size(); ++i) x(i) = draw_symbol(cfg.modulation, amplitude, rng);
  return x;
}

CMatrix gen_symbol_block(const SystemConfig& cfg, int n, RandomStream& rng) {
  const double amplitude = std::sqrt(cfg.symbol_energy);
  CMatrix x(cfg.streams(), n);
  for (int t = 0; t < n; ++t) {
    for (Eigen::Index i = 0; i < x.rows(); ++i) x(i, t) = draw_symbol(cfg.modulation, amplitude, rng);
  }
  return x;
}

ReceivedVector propagate(const ChannelMatrix& h, const SymbolVector& x, const SystemConfig& cfg,
                         RandomStream& rng) {
  if (h.cols() != x.size() || h.rows() != cfg.rx_antennas) {
    throw InvalidDimensionError("propagate: H is " + std::to_string(h.rows()) + "x" +
                                std::to_string(h.cols()) + ", x has length " +
                                std::to_string(x.size()));
  }
  ReceivedVector y = h.entries * x;
  for (Eigen::Index i = 0; i < y.size(); ++i) y(i) += rng.complex_normal(cfg.noise_variance);
  return y;
}

CMatrix propagate_block(const ChannelMatrix& h, const CMatrix& x, const SystemConfig& cfg,
                        RandomStream& rng) {
  if (h.cols() != x.rows() || h.rows() != cfg.rx_antennas) {
    throw InvalidDimensionError("propagate_block: dimension mismatch");
  }
  CMatrix y = h.entries * x;
  for (Eigen::Index t = 0; t < y.cols(); ++t) {
    for (Eigen::Index i = 0; i < y.rows(); ++i) y(i, t) += rng.complex_normal(cfg.noise_variance);
  }
  return y;
}

}  // namespace quantmimo
