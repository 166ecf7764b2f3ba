// SPDX-License-Identifier: Apache-2.0
//
// Monte Carlo driver: per-packet detection chains, BER and sum-rate sweeps,
// CSV rows and the metadata sidecar.
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "quantmimo/agc.hpp"
#include "quantmimo/quantization.hpp"
#include "quantmimo/rate.hpp"
#include "quantmimo/receivers.hpp"
#include "quantmimo/statistics.hpp"
#include "quantmimo/system_model.hpp"

namespace quantmimo {

// Substream paths: BER draws use {snr_index, packet}, rate draws
// {snr_index, channel, kRateStreamTag}.
inline constexpr std::uint64_t kRateStreamTag = 0x7a7e;

enum class ReceiverKind { Zf, Mmse, Lra, LraAgc, FrMmse };

ReceiverKind parse_receiver(std::string_view name);
std::string_view to_string(ReceiverKind kind);
std::vector<ReceiverKind> parse_receiver_list(std::string_view csv);

// Gain stage plus ADC. For antenna i the quantizer sees adc_gain[i] * y_i and
// its output is multiplied by output_gain[i] to return to model units, so
// z = G y + q with G the model gain of the chain.
struct FrontEnd {
  bool quantized = false;
  RVector adc_gain;
  RVector output_gain;
};

FrontEnd full_resolution_front_end(int n_rx);

// Applies the per-antenna gain vector and references the ADC to the mean
// power of the gain-stage output, so that its per-dimension RMS sits at the
// quantizer's reference loading. gain = 1 is the plain clip-level stage.
FrontEnd clip_front_end(const RVector& gain, const CMatrix& r_yy, const Quantizer& q);

CMatrix apply_front_end(const CMatrix& y, const FrontEnd& fe, const Quantizer& q);

struct PacketData {
  CMatrix symbols;   // K*N_T x packet_len
  CMatrix received;  // N_R x packet_len, unquantized
};

// Symbols first, then noise, from the same stream.
PacketData draw_packet(const ChannelMatrix& h, const SystemConfig& cfg, RandomStream& rng);

std::int64_t count_errors(const PacketData& data, const FrontEnd& fe, const ReceiverFilter& filter,
                          const Quantizer& q, Modulation modulation);

// One packet through y = Hx + n -> z = Q(gain stage) -> x_hat = W z -> detect.
// Returns the number of bit errors.
std::int64_t run_packet(const ChannelMatrix& h, const SystemConfig& cfg, const Quantizer& q,
                        const FrontEnd& fe, const ReceiverFilter& filter, RandomStream& rng);
std::int64_t run_packet(const ChannelMatrix& h, const SystemConfig& cfg, const Quantizer& q,
                        const AgcState& agc, const ReceiverFilter& filter, RandomStream& rng);

// Everything a receiver needs for one channel realization.
struct ChainDesign {
  ReceiverKind kind = ReceiverKind::Mmse;
  FrontEnd front_end;
  ReceiverFilter filter;
  RVector model_gain;       // diagonal of G in the linear model
  CorrelationSet model;     // statistics the rate is evaluated with
  std::optional<AgcState> agc;
};

struct DesignOptions {
  int rounds = 1;
  std::optional<double> beta;  // sqrt(b) when empty
};

// quantized is the correlation set at the quantizer's rho_q; full_resolution
// the same channel at rho_q = 0.
ChainDesign design_receiver(ReceiverKind kind, const ChannelMatrix& h, const CorrelationSet& quantized,
                            const CorrelationSet& full_resolution, const Quantizer& q,
                            const DesignOptions& options);
ChainDesign design_receiver(ReceiverKind kind, const ChannelMatrix& h, const SystemConfig& cfg,
                            const Quantizer& q, const DesignOptions& options);

struct EarlyStop {
  bool enabled = false;
  std::int64_t min_errors = 500;
  std::int64_t min_packets = 1000;
};

struct SweepSpec {
  std::vector<double> snr_points;
  std::vector<int> bits_list;
  std::vector<ReceiverKind> receivers;
  SystemConfig base_config;
  std::string output_path;  // empty: no files written
  DesignOptions design;
  int threads = 1;
  int n_channels = 50;  // rate sweeps
  EarlyStop early_stop;
  double max_skip_fraction = 0.01;
};

void validate(const SweepSpec& spec);

struct SimRow {
  ReceiverKind receiver = ReceiverKind::Mmse;
  std::optional<int> bits;  // empty for full-resolution rows
  double snr_db = 0.0;
  std::optional<double> ber;
  std::optional<double> ber_ci95;
  std::optional<double> sum_rate;
  std::optional<std::int64_t> bits_simulated;
  std::optional<std::int64_t> errors;
  std::int64_t packets = 0;  // packets (BER) or channel draws (rate) actually counted
  double wall_time_s = 0.0;
  std::int64_t skipped = 0;
};

struct SweepResult {
  std::vector<SimRow> rows;
  nlohmann::json metadata;
  bool skip_budget_exceeded = false;
};

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

// 95% Wilson score interval for a binomial proportion.
Interval wilson_interval(std::int64_t errors, std::int64_t trials);

std::string csv_header();
std::string csv_row(const SimRow& row);

// Fresh channel per packet; all receivers and resolutions at one SNR share
// the packet's channel, symbols and noise. Rows are appended to the CSV as
// each SNR point finishes; the sidecar is written at the end.
SweepResult run_sweep(const SweepSpec& spec);

// Model sum rate averaged over n_channels draws per (receiver, b, snr).
SweepResult run_rate_sweep(const SweepSpec& spec);

std::string metadata_path(const std::string& csv_path);

// Quantizers for each b, built once.
std::vector<Quantizer> build_quantizers(const std::vector<int>& bits_list);

}  // namespace quantmimo
