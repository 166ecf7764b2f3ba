// SPDX-License-Identifier: Apache-2.0
#include "quantmimo/sim.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include "quantmimo/diagnostics.hpp"
#include "quantmimo/errors.hpp"

#ifndef QUANTMIMO_VERSION
#define QUANTMIMO_VERSION "0.0.0"
#endif

namespace quantmimo {
namespace {

constexpr std::int64_t kBatchPackets = 100;
constexpr double kWilsonZ = 1.959963984540054;

struct Series {
  ReceiverKind kind;
  int bits_index;  // -1 for full resolution
};

std::vector<Series> series_for(const SweepSpec& spec) {
  std::vector<Series> out;
  for (ReceiverKind kind : spec.receivers) {
    if (kind == ReceiverKind::FrMmse) {
      out.push_back({kind, -1});
      continue;
    }
    for (std::size_t b = 0; b < spec.bits_list.size(); ++b) out.push_back({kind, static_cast<int>(b)});
  }
  return out;
}

// Runs fn(i) for i in [begin, end). Callers store results by index, so the
// aggregate does not depend on how work is split between threads.
template <typename Fn>
void parallel_for(std::int64_t begin, std::int64_t end, int threads, Fn&& fn) {
  const std::int64_t count = end - begin;
  if (count <= 0) return;
  const int workers = static_cast<int>(std::min<std::int64_t>(std::max(threads, 1), count));
  if (workers == 1) {
    for (std::int64_t i = begin; i < end; ++i) fn(i);
    return;
  }
  std::atomic<std::int64_t> next{begin};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto body = [&] {
    for (;;) {
      const std::int64_t i = next.fetch_add(1);
      if (i >= end) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(end);
        return;
      }
    }
  };
  std::vector<std::jthread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (int t = 0; t < workers; ++t) pool.emplace_back(body);
  pool.clear();
  if (failure) std::rethrow_exception(failure);
}

struct AlphaStats {
  std::int64_t count = 0;
  double sum = 0.0;
  double min = std::numeric_limits<double>::infinity();
  double max = -std::numeric_limits<double>::infinity();

  void add(double a) {
    ++count;
    sum += a;
    min = std::min(min, a);
    max = std::max(max, a);
  }
};

// One value per series for a single draw; inactive series are not evaluated.
struct DrawOutcome {
  std::vector<double> value;
  std::vector<char> evaluated;
  std::vector<char> failed;
  std::vector<double> alpha;  // per bits index, NaN when no AGC design ran
};

class OutputFiles {
 public:
  explicit OutputFiles(const std::string& path) : path_(path) {
    if (path_.empty()) return;
    csv_.open(path_, std::ios::out | std::ios::trunc);
    if (!csv_) throw Error("cannot open output file '" + path_ + "'");
    csv_ << csv_header() << '\n';
    csv_.flush();
  }

  void append(const std::vector<SimRow>& rows) {
    if (path_.empty()) return;
    std::lock_guard lock(mutex_);
    for (const SimRow& row : rows) csv_ << csv_row(row) << '\n';
    csv_.flush();
    if (!csv_) throw Error("write failed on '" + path_ + "'");
  }

  void write_metadata(const nlohmann::json& meta) const {
    if (path_.empty()) return;
    const std::string meta_path = metadata_path(path_);
    std::ofstream out(meta_path, std::ios::out | std::ios::trunc);
    if (!out) throw Error("cannot open metadata file '" + meta_path + "'");
    out << meta.dump(2) << '\n';
    if (!out) throw Error("write failed on '" + meta_path + "'");
  }

 private:
  std::string path_;
  std::ofstream csv_;
  std::mutex mutex_;
};

std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

nlohmann::json base_metadata(const SweepSpec& spec, const std::vector<Quantizer>& quantizers,
                             std::string_view mode) {
  const SystemConfig& cfg = spec.base_config;
  nlohmann::json meta;
  meta["mode"] = mode;
  meta["version"] = QUANTMIMO_VERSION;
  meta["seed"] = cfg.seed;
  meta["snr_convention"] = snr_convention(cfg.snr_reference);
  meta["csv_columns"] = csv_header();

  nlohmann::json rho = nlohmann::json::object();
  nlohmann::json loading = nlohmann::json::object();
  nlohmann::json beta = nlohmann::json::object();
  for (const Quantizer& q : quantizers) {
    const std::string key = std::to_string(q.bits);
    rho[key] = q.rho_q;
    loading[key] = q.reference_std;
    beta[key] = spec.design.beta.value_or(default_beta(q.bits));
  }
  meta["rho_q"] = rho;
  meta["reference_std"] = loading;
  meta["beta"] = beta;
  meta["beta_rule"] = spec.design.beta ? "fixed" : "sqrt(b)";

  nlohmann::json receivers = nlohmann::json::array();
  for (ReceiverKind k : spec.receivers) receivers.push_back(std::string(to_string(k)));
  meta["config"] = {
      {"users", cfg.users},
      {"tx_antennas", cfg.tx_antennas},
      {"rx_antennas", cfg.rx_antennas},
      {"modulation", std::string(to_string(cfg.modulation))},
      {"symbol_energy", cfg.symbol_energy},
      {"snr_reference", std::string(to_string(cfg.snr_reference))},
      {"packet_len", cfg.packet_len},
      {"packets", cfg.n_packets},
      {"channels", spec.n_channels},
      {"rounds", spec.design.rounds},
      {"threads", spec.threads},
      {"snr_db", spec.snr_points},
      {"bits", spec.bits_list},
      {"receivers", receivers},
      {"max_skip_fraction", spec.max_skip_fraction},
  };
  meta["early_stop"] = {
      {"enabled", spec.early_stop.enabled},
      {"min_errors", spec.early_stop.min_errors},
      {"min_packets", spec.early_stop.min_packets},
  };
  meta["channel_redraw"] = mode == "ber" ? "per packet" : "per channel draw";
  return meta;
}

void finish_metadata(nlohmann::json& meta, const std::vector<Quantizer>& quantizers,
                     const std::vector<AlphaStats>& alpha, std::int64_t skipped, bool exceeded) {
  nlohmann::json stats = nlohmann::json::object();
  for (std::size_t b = 0; b < quantizers.size(); ++b) {
    const AlphaStats& a = alpha[b];
    if (a.count == 0) continue;
    stats[std::to_string(quantizers[b].bits)] = {
        {"count", a.count}, {"mean", a.sum / static_cast<double>(a.count)}, {"min", a.min}, {"max", a.max}};
  }
  meta["alpha"] = stats;
  meta["skipped"] = skipped;
  meta["skip_budget_exceeded"] = exceeded;
  meta["warnings"] = warning_counts();
}

// Evaluates every active series on one draw. rate_mode selects between
// counting bit errors on a packet and evaluating the model rate.
DrawOutcome evaluate_draw(const SweepSpec& spec, const std::vector<Series>& series,
                          const std::vector<char>& active, const std::vector<Quantizer>& quantizers,
                          const SystemConfig& cfg, std::size_t snr_index, std::int64_t draw, bool rate_mode) {
  const std::size_t n_series = series.size();
  DrawOutcome out;
  out.value.assign(n_series, 0.0);
  out.evaluated.assign(n_series, 0);
  out.failed.assign(n_series, 0);
  out.alpha.assign(quantizers.size(), std::numeric_limits<double>::quiet_NaN());

  RandomStream rng = rate_mode
                         ? RandomStream::substream(cfg.seed, {snr_index, static_cast<std::uint64_t>(draw), kRateStreamTag})
                         : RandomStream::substream(cfg.seed, {snr_index, static_cast<std::uint64_t>(draw)});
  const ChannelMatrix h = gen_channel(cfg, rng);
  std::optional<PacketData> data;
  if (!rate_mode) data = draw_packet(h, cfg, rng);

  const CorrelationSet full = correlation_set(h, cfg, 0.0);
  std::vector<std::optional<CorrelationSet>> quantized(quantizers.size());

  for (std::size_t s = 0; s < n_series; ++s) {
    if (!active[s]) continue;
    const Series& sr = series[s];
    const bool fr = sr.bits_index < 0;
    const Quantizer& q = quantizers[fr ? 0 : static_cast<std::size_t>(sr.bits_index)];
    out.evaluated[s] = 1;
    try {
      if (!fr && !quantized[static_cast<std::size_t>(sr.bits_index)]) {
        quantized[static_cast<std::size_t>(sr.bits_index)] = correlation_set(h, cfg, q.rho_q);
      }
      const CorrelationSet& cq = fr ? full : *quantized[static_cast<std::size_t>(sr.bits_index)];
      const ChainDesign chain = design_receiver(sr.kind, h, cq, full, q, spec.design);
      if (chain.agc) out.alpha[static_cast<std::size_t>(sr.bits_index)] = chain.agc->alpha;
      if (rate_mode) {
        out.value[s] = rate_report(chain.filter, chain.model_gain, chain.model).sum_rate;
      } else {
        out.value[s] = static_cast<double>(count_errors(*data, chain.front_end, chain.filter, q, cfg.modulation));
      }
    } catch (const NumericalError& e) {
      out.failed[s] = 1;
      std::ostringstream msg;
      msg << to_string(sr.kind);
      if (!fr) msg << " b=" << q.bits;
      msg << " snr=" << cfg.snr_db << " draw " << draw
          << ": " << e.what();
      record_warning(Warning::PacketSkipped, msg.str());
    }
  }
  return out;
}

struct SeriesTally {
  double sum = 0.0;
  std::int64_t counted = 0;
  std::int64_t skipped = 0;
};

SweepResult run_generic(const SweepSpec& spec, bool rate_mode) {
  validate(spec);
  const std::vector<Quantizer> quantizers = build_quantizers(spec.bits_list);
  const std::vector<Series> series = series_for(spec);
  const std::int64_t draws = rate_mode ? spec.n_channels : spec.base_config.n_packets;
  const std::int64_t bits_per_packet = static_cast<std::int64_t>(spec.base_config.streams()) *
                                       spec.base_config.packet_len * bits_per_symbol(spec.base_config.modulation);

  SweepResult result;
  result.metadata = base_metadata(spec, quantizers, rate_mode ? "rate" : "ber");
  std::vector<AlphaStats> alpha(quantizers.size());
  std::int64_t total_skipped = 0;
  OutputFiles files(spec.output_path);

  for (std::size_t si = 0; si < spec.snr_points.size(); ++si) {
    const auto start = std::chrono::steady_clock::now();
    const SystemConfig cfg = with_snr(spec.base_config, spec.snr_points[si]);
    std::vector<SeriesTally> tally(series.size());
    std::vector<char> active(series.size(), 1);

    for (std::int64_t batch = 0; batch < draws; batch += kBatchPackets) {
      const std::int64_t end = std::min(draws, batch + kBatchPackets);
      std::vector<DrawOutcome> outcomes(static_cast<std::size_t>(end - batch));
      parallel_for(batch, end, spec.threads, [&](std::int64_t d) {
        outcomes[static_cast<std::size_t>(d - batch)] =
            evaluate_draw(spec, series, active, quantizers, cfg, si, d, rate_mode);
      });
      for (const DrawOutcome& o : outcomes) {
        for (std::size_t s = 0; s < series.size(); ++s) {
          if (!o.evaluated[s]) continue;
          if (o.failed[s]) {
            ++tally[s].skipped;
          } else {
            tally[s].sum += o.value[s];
            ++tally[s].counted;
          }
        }
        for (std::size_t b = 0; b < quantizers.size(); ++b) {
          if (!std::isnan(o.alpha[b])) alpha[b].add(o.alpha[b]);
        }
      }
      if (!rate_mode && spec.early_stop.enabled) {
        for (std::size_t s = 0; s < series.size(); ++s) {
          const auto errors = static_cast<std::int64_t>(tally[s].sum);
          if (errors >= spec.early_stop.min_errors && tally[s].counted >= spec.early_stop.min_packets) active[s] = 0;
        }
        if (std::none_of(active.begin(), active.end(), [](char a) { return a != 0; })) break;
      }
    }

    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::vector<SimRow> rows;
    for (std::size_t s = 0; s < series.size(); ++s) {
      const Series& sr = series[s];
      const SeriesTally& t = tally[s];
      SimRow row;
      row.receiver = sr.kind;
      if (sr.bits_index >= 0) row.bits = quantizers[static_cast<std::size_t>(sr.bits_index)].bits;
      row.snr_db = spec.snr_points[si];
      row.packets = t.counted;
      row.wall_time_s = wall;
      row.skipped = t.skipped;
      if (rate_mode) {
        if (t.counted > 0) row.sum_rate = t.sum / static_cast<double>(t.counted);
      } else {
        const auto errors = static_cast<std::int64_t>(t.sum);
        const std::int64_t n_bits = t.counted * bits_per_packet;
        row.errors = errors;
        row.bits_simulated = n_bits;
        if (n_bits > 0) {
          row.ber = static_cast<double>(errors) / static_cast<double>(n_bits);
          const Interval ci = wilson_interval(errors, n_bits);
          row.ber_ci95 = 0.5 * (ci.hi - ci.lo);
        }
      }
      const std::int64_t attempted = t.counted + t.skipped;
      if (attempted > 0 && static_cast<double>(t.skipped) > spec.max_skip_fraction * static_cast<double>(attempted)) {
        result.skip_budget_exceeded = true;
      }
      total_skipped += t.skipped;
      rows.push_back(row);
    }
    files.append(rows);
    result.rows.insert(result.rows.end(), rows.begin(), rows.end());
  }

  finish_metadata(result.metadata, quantizers, alpha, total_skipped, result.skip_budget_exceeded);
  files.write_metadata(result.metadata);
  return result;
}

}  // namespace

ReceiverKind parse_receiver(std::string_view name) {
  if (name == "zf") return ReceiverKind::Zf;
  if (name == "mmse") return ReceiverKind::Mmse;
  if (name == "lra") return ReceiverKind::Lra;
  if (name == "lra-agc") return ReceiverKind::LraAgc;
  if (name == "fr-mmse") return ReceiverKind::FrMmse;
  throw ValidationError("unknown receiver '" + std::string(name) + "' (expected zf, mmse, lra, lra-agc, fr-mmse)");
}

std::string_view to_string(ReceiverKind kind) {
  switch (kind) {
    case ReceiverKind::Zf: return "zf";
    case ReceiverKind::Mmse: return "mmse";
    case ReceiverKind::Lra: return "lra";
    case ReceiverKind::LraAgc: return "lra-agc";
    case ReceiverKind::FrMmse: return "fr-mmse";
  }
  return "?";
}

std::vector<ReceiverKind> parse_receiver_list(std::string_view csv) {
  std::vector<ReceiverKind> out;
  std::size_t pos = 0;
  while (pos <= csv.size()) {
    const std::size_t comma = std::min(csv.find(',', pos), csv.size());
    const std::string_view item = csv.substr(pos, comma - pos);
    if (!item.empty()) {
      const ReceiverKind k = parse_receiver(item);
      if (std::find(out.begin(), out.end(), k) != out.end()) {
        throw ValidationError("receiver '" + std::string(item) + "' listed twice");
      }
      out.push_back(k);
    }
    pos = comma + 1;
  }
  return out;
}

FrontEnd full_resolution_front_end(int n_rx) {
  return {false, RVector::Ones(n_rx), RVector::Ones(n_rx)};
}

FrontEnd clip_front_end(const RVector& gain, const CMatrix& r_yy, const Quantizer& q) {
  if (gain.size() != r_yy.rows() || r_yy.rows() != r_yy.cols()) {
    throw InvalidDimensionError("gain has " + std::to_string(gain.size()) + " entries for " +
                                std::to_string(r_yy.rows()) + " antennas");
  }
  const Eigen::Index n = gain.size();
  double power = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) power += gain(i) * gain(i) * r_yy(i, i).real();
  power /= static_cast<double>(n);
  if (!(power > 0.0) || !std::isfinite(power)) throw NumericalError("gain stage output has no power");
  const double kappa = q.reference_std * std::sqrt(2.0) / std::sqrt(power);
  return {true, kappa * gain, RVector::Constant(n, 1.0 / kappa)};
}

CMatrix apply_front_end(const CMatrix& y, const FrontEnd& fe, const Quantizer& q) {
  if (!fe.quantized) return y;
  if (fe.adc_gain.size() != y.rows() || fe.output_gain.size() != y.rows()) {
    throw InvalidDimensionError("front end sized for " + std::to_string(fe.adc_gain.size()) + " antennas, signal has " +
                                std::to_string(y.rows()));
  }
  CMatrix z(y.rows(), y.cols());
  for (Eigen::Index t = 0; t < y.cols(); ++t) {
    for (Eigen::Index i = 0; i < y.rows(); ++i) {
      z(i, t) = quantize(fe.adc_gain(i) * y(i, t), q) * fe.output_gain(i);
    }
  }
  return z;
}

PacketData draw_packet(const ChannelMatrix& h, const SystemConfig& cfg, RandomStream& rng) {
  PacketData d;
  d.symbols = gen_symbol_block(cfg, cfg.packet_len, rng);
  d.received = propagate_block(h, d.symbols, cfg, rng);
  return d;
}

std::int64_t count_errors(const PacketData& data, const FrontEnd& fe, const ReceiverFilter& filter,
                          const Quantizer& q, Modulation modulation) {
  const CMatrix z = apply_front_end(data.received, fe, q);
  if (filter.matrix.cols() != z.rows() || filter.matrix.rows() != data.symbols.rows()) {
    throw InvalidDimensionError("filter is " + std::to_string(filter.matrix.rows()) + "x" +
                                std::to_string(filter.matrix.cols()) + ", packet needs " +
                                std::to_string(data.symbols.rows()) + "x" + std::to_string(z.rows()));
  }
  const CMatrix est = filter.matrix * z;
  std::int64_t errors = 0;
  for (Eigen::Index t = 0; t < est.cols(); ++t) {
    for (Eigen::Index k = 0; k < est.rows(); ++k) {
      const Complex e = est(k, t);
      const Complex x = data.symbols(k, t);
      errors += (e.real() >= 0.0) != (x.real() >= 0.0);
      if (modulation == Modulation::Qpsk) errors += (e.imag() >= 0.0) != (x.imag() >= 0.0);
    }
  }
  return errors;
}

std::int64_t run_packet(const ChannelMatrix& h, const SystemConfig& cfg, const Quantizer& q, const FrontEnd& fe,
                        const ReceiverFilter& filter, RandomStream& rng) {
  return count_errors(draw_packet(h, cfg, rng), fe, filter, q, cfg.modulation);
}

std::int64_t run_packet(const ChannelMatrix& h, const SystemConfig& cfg, const Quantizer& q, const AgcState& agc,
                        const ReceiverFilter& filter, RandomStream& rng) {
  const BaseCorrelations base = base_correlations(h, cfg);
  const FrontEnd fe = clip_front_end(agc.effective_gain(), base.r_yy, q);
  return run_packet(h, cfg, q, fe, filter, rng);
}

ChainDesign design_receiver(ReceiverKind kind, const ChannelMatrix& h, const CorrelationSet& quantized,
                            const CorrelationSet& full_resolution, const Quantizer& q, const DesignOptions& options) {
  ChainDesign d;
  d.kind = kind;
  const auto n_rx = static_cast<int>(quantized.r_yy.rows());
  d.model_gain = RVector::Ones(n_rx);
  switch (kind) {
    case ReceiverKind::FrMmse:
      d.front_end = full_resolution_front_end(n_rx);
      d.filter = mmse_filter(full_resolution.r_xy, full_resolution.r_yy);
      d.model = full_resolution;
      return d;
    case ReceiverKind::Zf:
      d.filter = zf_filter(h);
      break;
    case ReceiverKind::Mmse:
      d.filter = mmse_filter(quantized.r_xy, quantized.r_yy);
      break;
    case ReceiverKind::Lra:
      d.filter = lra_mmse_filter(quantized.r_xy, quantized.r_yy, quantized.rho_q);
      break;
    case ReceiverKind::LraAgc: {
      JointDesign joint = joint_optimize(quantized, options.rounds, options.beta.value_or(default_beta(q.bits)));
      d.model_gain = joint.agc.effective_gain();
      d.front_end = clip_front_end(d.model_gain, quantized.r_yy, q);
      d.filter = std::move(joint.filter);
      d.model = std::move(joint.correlations);
      d.agc = joint.agc;
      return d;
    }
  }
  d.front_end = clip_front_end(d.model_gain, quantized.r_yy, q);
  d.model = quantized;
  return d;
}

ChainDesign design_receiver(ReceiverKind kind, const ChannelMatrix& h, const SystemConfig& cfg, const Quantizer& q,
                            const DesignOptions& options) {
  const CorrelationSet full = correlation_set(h, cfg, 0.0);
  if (kind == ReceiverKind::FrMmse) return design_receiver(kind, h, full, full, q, options);
  return design_receiver(kind, h, correlation_set(h, cfg, q.rho_q), full, q, options);
}

void validate(const SweepSpec& spec) {
  if (spec.snr_points.empty()) throw ValidationError("no SNR points");
  for (double s : spec.snr_points) {
    if (!std::isfinite(s)) throw ValidationError("SNR points must be finite");
  }
  for (std::size_t i = 1; i < spec.snr_points.size(); ++i) {
    if (!(spec.snr_points[i] > spec.snr_points[i - 1])) throw ValidationError("SNR points must be strictly increasing");
  }
  if (spec.receivers.empty()) throw ValidationError("no receivers");
  if (spec.bits_list.empty()) throw ValidationError("no quantizer resolutions");
  for (std::size_t i = 0; i < spec.bits_list.size(); ++i) {
    const int b = spec.bits_list[i];
    if (b < 1 || b > kMaxQuantizerBits) {
      throw DomainError("resolution " + std::to_string(b) + " outside 1.." + std::to_string(kMaxQuantizerBits));
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (spec.bits_list[j] == b) throw ValidationError("resolution " + std::to_string(b) + " listed twice");
    }
  }
  const SystemConfig& c = spec.base_config;
  if (c.users < 1 || c.tx_antennas < 1 || c.rx_antennas < 1) throw InvalidDimensionError("dimensions must be positive");
  if (c.packet_len < 1) throw ValidationError("packet length must be positive");
  if (c.n_packets < 1) throw ValidationError("packet count must be positive");
  if (spec.n_channels < 1) throw ValidationError("channel count must be positive");
  if (spec.design.rounds < 1) throw ValidationError("rounds must be at least 1");
  if (spec.design.beta && !(*spec.design.beta > 0.0 && std::isfinite(*spec.design.beta))) {
    throw DomainError("beta must be positive");
  }
  if (spec.threads < 1) throw ValidationError("threads must be at least 1");
  if (!(spec.max_skip_fraction >= 0.0 && spec.max_skip_fraction <= 1.0)) {
    throw ValidationError("skip budget must lie in [0, 1]");
  }
  if (spec.early_stop.min_errors < 0 || spec.early_stop.min_packets < 0) {
    throw ValidationError("early-stop thresholds must be non-negative");
  }
}

Interval wilson_interval(std::int64_t errors, std::int64_t trials) {
  if (trials <= 0) throw DomainError("Wilson interval needs at least one trial");
  if (errors < 0 || errors > trials) throw DomainError("error count outside [0, trials]");
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(errors) / n;
  const double z2 = kWilsonZ * kWilsonZ;
  const double denom = 1.0 + z2 / n;
  const double center = (p + z2 / (2.0 * n)) / denom;
  const double half = kWilsonZ * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
  return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

std::string csv_header() { return "receiver,b,snr_db,ber,ber_ci95,sum_rate,bits_simulated,errors,packets,wall_time_s"; }

std::string csv_row(const SimRow& row) {
  std::string out(to_string(row.receiver));
  auto field = [&out](const std::string& v) {
    out += ',';
    out += v;
  };
  field(row.bits ? std::to_string(*row.bits) : "");
  field(format_number(row.snr_db));
  field(row.ber ? format_number(*row.ber) : "");
  field(row.ber_ci95 ? format_number(*row.ber_ci95) : "");
  field(row.sum_rate ? format_number(*row.sum_rate) : "");
  field(row.bits_simulated ? std::to_string(*row.bits_simulated) : "");
  field(row.errors ? std::to_string(*row.errors) : "");
  field(std::to_string(row.packets));
  field(format_number(row.wall_time_s));
  return out;
}

SweepResult run_sweep(const SweepSpec& spec) { return run_generic(spec, false); }

SweepResult run_rate_sweep(const SweepSpec& spec) { return run_generic(spec, true); }

std::string metadata_path(const std::string& csv_path) {
  constexpr std::string_view ext = ".csv";
  if (csv_path.size() >= ext.size() && csv_path.compare(csv_path.size() - ext.size(), ext.size(), ext) == 0) {
    return csv_path.substr(0, csv_path.size() - ext.size()) + ".meta.json";
  }
  return csv_path + ".meta.json";
}

std::vector<Quantizer> build_quantizers(const std::vector<int>& bits_list) {
  std::vector<Quantizer> out;
  out.reserve(bits_list.size());
  for (int b : bits_list) out.push_back(build_quantizer(b));
  return out;
}

}  // namespace quantmimo
