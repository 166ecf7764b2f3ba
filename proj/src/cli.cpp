// SPDX-License-Identifier: Apache-2.0
#include "quantmimo/cli.hpp"

#include <charconv>
#include <cmath>
#include <optional>
#include <thread>

#include "CLI11.hpp"
#include "quantmimo/diagnostics.hpp"
#include "quantmimo/errors.hpp"
#include "quantmimo/sim.hpp"

namespace quantmimo {
namespace {

double parse_double(std::string_view s, std::string_view what) {
  const std::string buf(s);
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(buf, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != buf.size() || !std::isfinite(v)) {
    throw ValidationError("bad " + std::string(what) + " value '" + buf + "'");
  }
  return v;
}

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  for (;;) {
    const std::size_t next = text.find(sep, pos);
    out.push_back(text.substr(pos, next == std::string_view::npos ? std::string_view::npos : next - pos));
    if (next == std::string_view::npos) return out;
    pos = next + 1;
  }
}

// Options whose values may start with '-'.
bool takes_signed_value(const std::string& arg) { return arg == "--snr" || arg == "--beta"; }

struct Options {
  std::string preset;
  std::optional<int> users, tx_antennas, rx_antennas, packets;
  std::string bits = "2,3,4,5";
  std::string snr = "-10:2:14";
  int packet_len = 100;
  std::string modulation = "bpsk";
  std::string receivers = "zf,mmse,lra,lra-agc,fr-mmse";
  int rounds = 1;
  std::string beta = "auto";
  std::uint64_t seed = 1;
  std::string out;
  int channels = 50;
  int threads = 0;
  std::string snr_ref = "rx";
  double symbol_energy = 1.0;
  bool early_stop = false;
  std::int64_t min_errors = 500;
  std::int64_t min_packets = 1000;
  double skip_budget = 0.01;
  bool quiet = false;
};

void add_shared_options(CLI::App& cmd, Options& o) {
  cmd.add_option("--preset", o.preset, "desk (4,2,16), paper (16,2,64) or fig3 (32,2,64)");
  cmd.add_option("--users", o.users, "number of users K");
  cmd.add_option("--tx-ant", o.tx_antennas, "transmit antennas per user");
  cmd.add_option("--rx-ant", o.rx_antennas, "receive antennas");
  cmd.add_option("--bits", o.bits, "quantizer resolutions, comma separated")->capture_default_str();
  cmd.add_option("--snr", o.snr, "SNR points in dB: a:step:b or a comma list")->capture_default_str();
  cmd.add_option("--packets", o.packets, "packets per SNR point");
  cmd.add_option("--packet-len", o.packet_len, "symbols per packet")->capture_default_str();
  cmd.add_option("--mod", o.modulation, "bpsk or qpsk")->capture_default_str();
  cmd.add_option("--receivers", o.receivers, "zf,mmse,lra,lra-agc,fr-mmse")->capture_default_str();
  cmd.add_option("--rounds", o.rounds, "gain/filter alternation rounds")->capture_default_str();
  cmd.add_option("--beta", o.beta, "clip calibration, 'auto' for sqrt(b)")->capture_default_str();
  cmd.add_option("--seed", o.seed, "master seed")->capture_default_str();
  cmd.add_option("--out", o.out, "CSV path; metadata goes to the matching .meta.json");
  cmd.add_option("--threads", o.threads, "worker threads, 0 for all cores")->capture_default_str();
  cmd.add_option("--snr-ref", o.snr_ref, "rx: total received SNR per antenna, tx: sigma_x^2/sigma_n^2")
      ->capture_default_str();
  cmd.add_option("--symbol-energy", o.symbol_energy, "per-antenna symbol energy")->capture_default_str();
  cmd.add_flag("--early-stop", o.early_stop, "stop a point after --min-errors errors and --min-packets packets");
  cmd.add_option("--min-errors", o.min_errors)->capture_default_str();
  cmd.add_option("--min-packets", o.min_packets)->capture_default_str();
  cmd.add_option("--skip-budget", o.skip_budget, "tolerated fraction of failed draws per row")->capture_default_str();
  cmd.add_flag("--quiet", o.quiet, "do not echo warnings");
}

SweepSpec build_spec(const Options& o, bool rate_mode) {
  std::optional<Preset> preset;
  if (!o.preset.empty()) preset = preset_by_name(o.preset);
  auto pick = [&](const std::optional<int>& v, int Preset::*field, const char* flag) {
    if (v) return *v;
    if (preset) return (*preset).*field;
    throw ValidationError(std::string(flag) + " is required without --preset");
  };

  SweepSpec spec;
  spec.snr_points = parse_snr_points(o.snr);
  spec.bits_list = parse_int_list(o.bits);
  spec.receivers = parse_receiver_list(o.receivers);

  ConfigParams p;
  p.users = pick(o.users, &Preset::users, "--users");
  p.tx_antennas = pick(o.tx_antennas, &Preset::tx_antennas, "--tx-ant");
  p.rx_antennas = pick(o.rx_antennas, &Preset::rx_antennas, "--rx-ant");
  if (rate_mode) {
    p.n_packets = o.packets.value_or(1);
  } else if (o.packets) {
    p.n_packets = *o.packets;
  } else if (preset) {
    p.n_packets = preset->packets;
  } else {
    throw ValidationError("--packets is required without --preset");
  }
  p.bits = spec.bits_list.empty() ? 1 : spec.bits_list.front();
  p.snr_db = spec.snr_points.empty() ? 0.0 : spec.snr_points.front();
  p.symbol_energy = o.symbol_energy;
  p.packet_len = o.packet_len;
  p.seed = o.seed;
  p.modulation = parse_modulation(o.modulation);
  p.snr_reference = parse_snr_reference(o.snr_ref);
  spec.base_config = make_config(p);

  spec.output_path = o.out;
  spec.design.rounds = o.rounds;
  if (o.beta != "auto") spec.design.beta = parse_double(o.beta, "--beta");
  spec.threads = o.threads > 0 ? o.threads : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  if (o.threads < 0) throw ValidationError("--threads must be non-negative");
  spec.n_channels = o.channels;
  spec.early_stop = {o.early_stop, o.min_errors, o.min_packets};
  spec.max_skip_fraction = o.skip_budget;
  validate(spec);
  return spec;
}

}  // namespace

std::vector<double> parse_snr_points(std::string_view text) {
  if (text.empty()) throw ValidationError("empty SNR specification");
  const auto parts = split(text, ':');
  if (parts.size() == 3) {
    const double a = parse_double(parts[0], "--snr");
    const double step = parse_double(parts[1], "--snr");
    const double b = parse_double(parts[2], "--snr");
    if (!(step > 0.0)) throw ValidationError("SNR step must be positive");
    if (b < a) throw ValidationError("SNR range end below its start");
    std::vector<double> out;
    const auto n = static_cast<long>(std::floor((b - a) / step + 1e-9));
    for (long i = 0; i <= n; ++i) out.push_back(a + static_cast<double>(i) * step);
    return out;
  }
  if (parts.size() != 1) throw ValidationError("SNR range must be a:step:b");
  std::vector<double> out;
  for (std::string_view item : split(text, ',')) out.push_back(parse_double(item, "--snr"));
  return out;
}

std::vector<int> parse_int_list(std::string_view text) {
  std::vector<int> out;
  for (std::string_view item : split(text, ',')) {
    int v = 0;
    const auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
    if (ec != std::errc() || ptr != item.data() + item.size() || item.empty()) {
      throw ValidationError("bad integer '" + std::string(item) + "'");
    }
    out.push_back(v);
  }
  return out;
}

Preset preset_by_name(std::string_view name) {
  if (name == "desk") return {4, 2, 16, 500};
  if (name == "paper") return {16, 2, 64, 10000};
  if (name == "fig3") return {32, 2, 64, 10000};
  throw ValidationError("unknown preset '" + std::string(name) + "' (expected desk, paper, fig3)");
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Monte Carlo BER and sum-rate sweeps for quantized multiuser MIMO receivers", "quantmimo"};
  app.require_subcommand(1);
  app.set_version_flag("--version", QUANTMIMO_VERSION);
  Options ber_opts;
  Options rate_opts;
  CLI::App* ber = app.add_subcommand("ber", "bit error rate sweep over SNR");
  CLI::App* rate = app.add_subcommand("rate", "model sum rate averaged over channel draws");
  add_shared_options(*ber, ber_opts);
  add_shared_options(*rate, rate_opts);
  rate->add_option("--channels", rate_opts.channels, "channel draws per point")->capture_default_str();

  // "--snr -10:2:14" would otherwise read the value as an option.
  std::vector<std::string> argv_store{"quantmimo"};
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (takes_signed_value(args[i]) && i + 1 < args.size()) {
      argv_store.push_back(args[i] + "=" + args[i + 1]);
      ++i;
    } else {
      argv_store.push_back(args[i]);
    }
  }
  std::vector<char*> argv;
  for (std::string& s : argv_store) argv.push_back(s.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitValidation;
  }

  const bool rate_mode = rate->parsed();
  const Options& o = rate_mode ? rate_opts : ber_opts;
  set_warning_echo(!o.quiet);
  reset_warnings();
  try {
    const SweepSpec spec = build_spec(o, rate_mode);
    const SweepResult result = rate_mode ? run_rate_sweep(spec) : run_sweep(spec);
    if (spec.output_path.empty()) {
      out << csv_header() << '\n';
      for (const SimRow& row : result.rows) out << csv_row(row) << '\n';
    }
    if (result.skip_budget_exceeded) {
      err << "quantmimo: failed draws exceeded the skip budget (" << result.metadata["skipped"].get<std::int64_t>()
          << " skipped)\n";
      return kExitNumerical;
    }
    return kExitOk;
  } catch (const ValidationError& e) {
    err << "quantmimo: " << e.what() << '\n';
    return kExitValidation;
  } catch (const NumericalError& e) {
    err << "quantmimo: numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::exception& e) {
    err << "quantmimo: " << e.what() << '\n';
    return kExitFailure;
  }
}

}  // namespace quantmimo
