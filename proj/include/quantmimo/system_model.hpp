// SPDX-License-Identifier: Apache-2.0
//
// Scenario configuration and the unquantized uplink model y = H x + n.
//
// x stacks all users' transmit antennas into one column of length K*N_T;
// H is N_R x K*N_T with i.i.d. CN(0,1) entries.
#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>

#include "quantmimo/random.hpp"
#include "quantmimo/types.hpp"

namespace quantmimo {

enum class Modulation { Bpsk, Qpsk };

// How the SNR axis maps to the noise variance.
//   ReceivedPerAntenna: SNR = K*N_T*sigma_x^2 / sigma_n^2 (average received
//                       signal power over noise power at one BS antenna).
//   TransmitPerAntenna: SNR = sigma_x^2 / sigma_n^2 (one transmit antenna's
//                       symbol energy over the per-antenna noise variance).
enum class SnrReference { ReceivedPerAntenna, TransmitPerAntenna };

Modulation parse_modulation(std::string_view name);
std::string_view to_string(Modulation m);
int bits_per_symbol(Modulation m);

SnrReference parse_snr_reference(std::string_view name);
std::string_view to_string(SnrReference r);
std::string snr_convention(SnrReference r);

struct SystemConfig {
  int users = 0;
  int tx_antennas = 0;
  int rx_antennas = 0;
  int bits = 0;
  double snr_db = 0.0;
  double symbol_energy = 1.0;
  double noise_variance = 1.0;
  int packet_len = 100;
  int n_packets = 1;
  std::uint64_t seed = 0;
  Modulation modulation = Modulation::Bpsk;
  SnrReference snr_reference = SnrReference::ReceivedPerAntenna;

  int streams() const { return users * tx_antennas; }
};

struct ConfigParams {
  int users = 0;
  int tx_antennas = 0;
  int rx_antennas = 0;
  int bits = 3;
  double snr_db = 10.0;
  double symbol_energy = 1.0;
  int packet_len = 100;
  int n_packets = 1;
  std::uint64_t seed = 1;
  Modulation modulation = Modulation::Bpsk;
  SnrReference snr_reference = SnrReference::ReceivedPerAntenna;
};

using ParamMap = std::map<std::string, std::string>;

// Throws InvalidDimensionError when N_R < K*N_T and DomainError on
// non-positive sizes or energies.
SystemConfig make_config(const ConfigParams& params);

// Keys: users, tx_antennas, rx_antennas, snr_db (required); bits,
// symbol_energy, packet_len, n_packets, seed, modulation, snr_reference.
SystemConfig make_config(const ParamMap& raw);

double noise_variance_for(double snr_db, double symbol_energy, int streams, SnrReference ref);

// Same scenario at another operating point; sigma_n^2 is recomputed.
SystemConfig with_snr(const SystemConfig& cfg, double snr_db);
SystemConfig with_bits(const SystemConfig& cfg, int bits);

struct ChannelMatrix {
  CMatrix entries;

  Eigen::Index rows() const { return entries.rows(); }
  Eigen::Index cols() const { return entries.cols(); }
};

using SymbolVector = CVector;
using ReceivedVector = CVector;

ChannelMatrix gen_channel(const SystemConfig& cfg, RandomStream& rng);

// Uniform draws from the constellation, scaled so E[x x^H] = sigma_x^2 I.
SymbolVector gen_symbols(const SystemConfig& cfg, RandomStream& rng);
// K*N_T x n block; column t is the symbol vector of time instant t.
CMatrix gen_symbol_block(const SystemConfig& cfg, int n, RandomStream& rng);

ReceivedVector propagate(const ChannelMatrix& h, const SymbolVector& x, const SystemConfig& cfg,
                         RandomStream& rng);
CMatrix propagate_block(const ChannelMatrix& h, const CMatrix& x, const SystemConfig& cfg,
                        RandomStream& rng);

}  // namespace quantmimo
