// SPDX-License-Identifier: Apache-2.0
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "support.hpp"

#include "quantmimo/diagnostics.hpp"
#include "quantmimo/errors.hpp"
#include "quantmimo/sim.hpp"

using namespace quantmimo;
using qm_test::small_config;

namespace {

SweepSpec desk_spec(int packets) {
  SweepSpec spec;
  spec.snr_points = {10.0};
  spec.bits_list = {3};
  spec.receivers = {ReceiverKind::Zf, ReceiverKind::Mmse, ReceiverKind::Lra, ReceiverKind::LraAgc,
                    ReceiverKind::FrMmse};
  ConfigParams p;
  p.users = 4;
  p.tx_antennas = 2;
  p.rx_antennas = 16;
  p.n_packets = packets;
  p.seed = 2024;
  spec.base_config = make_config(p);
  return spec;
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("quantmimo_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

const SimRow& find_row(const SweepResult& r, ReceiverKind kind, std::optional<int> bits, double snr) {
  for (const SimRow& row : r.rows) {
    if (row.receiver == kind && row.bits == bits && row.snr_db == snr) return row;
  }
  throw std::runtime_error("row not found");
}

}  // namespace

TEST_CASE("receiver names round-trip") {
  for (ReceiverKind k : {ReceiverKind::Zf, ReceiverKind::Mmse, ReceiverKind::Lra, ReceiverKind::LraAgc,
                         ReceiverKind::FrMmse}) {
    CHECK(parse_receiver(to_string(k)) == k);
  }
  CHECK(parse_receiver_list("zf,lra-agc").size() == 2);
  CHECK_THROWS_AS(parse_receiver("mrc"), ValidationError);
  CHECK_THROWS_AS(parse_receiver_list("zf,zf"), ValidationError);
  CHECK(parse_receiver_list("").empty());
}

TEST_CASE("Wilson interval") {
  const Interval half = wilson_interval(5, 10);
  CHECK(half.lo == doctest::Approx(0.2366).epsilon(1e-3));
  CHECK(half.hi == doctest::Approx(0.7634).epsilon(1e-3));
  const Interval none = wilson_interval(0, 10);
  CHECK(none.lo == 0.0);
  CHECK(none.hi == doctest::Approx(3.8415 / 13.8415).epsilon(1e-4));
  CHECK_THROWS_AS(wilson_interval(1, 0), DomainError);
  CHECK_THROWS_AS(wilson_interval(11, 10), DomainError);
}

TEST_CASE("front ends") {
  const Quantizer& q = qm_test::cached_quantizer(3);
  RandomStream rng(1);
  const SystemConfig cfg = small_config(2, 1, 4, 5.0);
  const ChannelMatrix h = gen_channel(cfg, rng);
  const BaseCorrelations b = base_correlations(h, cfg);
  const RVector gain = qm_test::random_rvector(rng, 4, 0.5, 2.0);
  const FrontEnd fe = clip_front_end(gain, b.r_yy, q);
  double power = 0.0;
  for (int i = 0; i < 4; ++i) power += gain(i) * gain(i) * b.r_yy(i, i).real();
  const double kappa = q.reference_std * std::sqrt(2.0 * 4.0 / power);
  CHECK(fe.quantized);
  CHECK((fe.adc_gain - kappa * gain).norm() < 1e-14);
  CHECK((fe.output_gain - RVector::Constant(4, 1.0 / kappa)).norm() < 1e-14);

  const CMatrix y = qm_test::random_cmatrix(rng, 4, 6);
  const CMatrix z = apply_front_end(y, fe, q);
  for (int i = 0; i < 4; ++i) {
    for (int t = 0; t < 6; ++t) CHECK(z(i, t) == quantize(fe.adc_gain(i) * y(i, t), q) * fe.output_gain(i));
  }
  CHECK(apply_front_end(y, full_resolution_front_end(4), q) == y);
  CHECK_THROWS_AS(clip_front_end(RVector::Ones(3), b.r_yy, q), InvalidDimensionError);
  CHECK_THROWS_AS(apply_front_end(CMatrix::Ones(5, 2), fe, q), InvalidDimensionError);
}

TEST_CASE("error counting") {
  SystemConfig cfg = small_config(3, 1, 3, 0.0);
  cfg.noise_variance = 0.0;
  for (Modulation m : {Modulation::Bpsk, Modulation::Qpsk}) {
    cfg.modulation = m;
    RandomStream rng(2);
    const ChannelMatrix h{CMatrix::Identity(3, 3)};
    const PacketData d = draw_packet(h, cfg, rng);
    const Quantizer& q = qm_test::cached_quantizer(3);
    const FrontEnd fr = full_resolution_front_end(3);
    CHECK(count_errors(d, fr, ReceiverFilter{CMatrix::Identity(3, 3), FilterKind::Zf}, q, m) == 0);
    const std::int64_t all = 3LL * cfg.packet_len * bits_per_symbol(m);
    CHECK(count_errors(d, fr, ReceiverFilter{-CMatrix::Identity(3, 3), FilterKind::Zf}, q, m) == all);
  }
}

TEST_CASE("noise-free full-resolution path makes no errors") {
  ConfigParams p;
  p.users = 4;
  p.tx_antennas = 2;
  p.rx_antennas = 16;
  p.snr_db = 80.0;
  const SystemConfig cfg = make_config(p);
  const Quantizer& q = qm_test::cached_quantizer(5);
  std::int64_t fr_errors = 0, agc_errors = 0;
  for (int k = 0; k < 20; ++k) {
    RandomStream rng = RandomStream::substream(5, {static_cast<std::uint64_t>(k)});
    const ChannelMatrix h = gen_channel(cfg, rng);
    const ChainDesign fr = design_receiver(ReceiverKind::FrMmse, h, cfg, q, {});
    RandomStream packet = RandomStream::substream(6, {static_cast<std::uint64_t>(k)});
    fr_errors += run_packet(h, cfg, q, fr.front_end, fr.filter, packet);
    const ChainDesign agc = design_receiver(ReceiverKind::LraAgc, h, cfg, q, {});
    REQUIRE(agc.agc.has_value());
    RandomStream packet2 = RandomStream::substream(6, {static_cast<std::uint64_t>(k)});
    agc_errors += run_packet(h, cfg, q, *agc.agc, agc.filter, packet2);
  }
  CHECK(fr_errors == 0);
  CHECK(agc_errors < 20 * 800 / 1000);
}

TEST_CASE("pure noise gives BER one half") {
  SweepSpec spec = desk_spec(200);
  spec.snr_points = {-80.0};
  const SweepResult r = run_sweep(spec);
  REQUIRE(r.rows.size() == 5);
  for (const SimRow& row : r.rows) {
    REQUIRE(row.ber.has_value());
    const double sigma = std::sqrt(0.25 / static_cast<double>(*row.bits_simulated));
    CHECK(std::abs(*row.ber - 0.5) < 4.0 * sigma);
    CHECK(*row.ber_ci95 == doctest::Approx(1.96 * sigma).epsilon(0.01));
  }
}

TEST_CASE("results do not depend on the thread count") {
  SweepSpec spec = desk_spec(150);
  spec.snr_points = {0.0, 6.0};
  spec.bits_list = {2, 4};
  spec.threads = 1;
  const SweepResult one = run_sweep(spec);
  spec.threads = 3;
  const SweepResult three = run_sweep(spec);
  REQUIRE(one.rows.size() == three.rows.size());
  for (std::size_t i = 0; i < one.rows.size(); ++i) {
    CHECK(one.rows[i].errors == three.rows[i].errors);
    CHECK(one.rows[i].packets == three.rows[i].packets);
  }
  spec.n_channels = 7;
  spec.threads = 1;
  const SweepResult r1 = run_rate_sweep(spec);
  spec.threads = 4;
  const SweepResult r4 = run_rate_sweep(spec);
  for (std::size_t i = 0; i < r1.rows.size(); ++i) CHECK(r1.rows[i].sum_rate == r4.rows[i].sum_rate);
}

TEST_CASE("fixed seed reproduces and resolutions share random numbers") {
  SweepSpec spec = desk_spec(100);
  const SweepResult a = run_sweep(spec);
  const SweepResult b = run_sweep(spec);
  for (std::size_t i = 0; i < a.rows.size(); ++i) CHECK(a.rows[i].errors == b.rows[i].errors);

  spec.bits_list = {3, 5};
  const SweepResult c = run_sweep(spec);
  CHECK(find_row(a, ReceiverKind::FrMmse, std::nullopt, 10.0).errors ==
        find_row(c, ReceiverKind::FrMmse, std::nullopt, 10.0).errors);
  CHECK(find_row(a, ReceiverKind::LraAgc, 3, 10.0).errors == find_row(c, ReceiverKind::LraAgc, 3, 10.0).errors);

  spec.base_config.seed += 1;
  const SweepResult d = run_sweep(spec);
  CHECK(find_row(a, ReceiverKind::Zf, 3, 10.0).errors != find_row(d, ReceiverKind::Zf, 3, 10.0).errors);
}

TEST_CASE("BER does not increase with SNR") {
  SweepSpec spec = desk_spec(300);
  spec.snr_points = {-4.0, 0.0, 4.0, 8.0};
  const SweepResult r = run_sweep(spec);
  for (ReceiverKind k : spec.receivers) {
    const std::optional<int> bits = k == ReceiverKind::FrMmse ? std::nullopt : std::optional<int>(3);
    for (std::size_t i = 1; i < spec.snr_points.size(); ++i) {
      const SimRow& lo = find_row(r, k, bits, spec.snr_points[i - 1]);
      const SimRow& hi = find_row(r, k, bits, spec.snr_points[i]);
      CHECK(*hi.ber <= *lo.ber + *lo.ber_ci95 + *hi.ber_ci95);
    }
  }
}

TEST_CASE("CSV and metadata files") {
  const auto dir = scratch_dir("csv");
  SweepSpec spec = desk_spec(20);
  spec.snr_points = {0.0, 5.0};
  spec.bits_list = {2, 3};
  spec.output_path = (dir / "run.csv").string();
  const SweepResult r = run_sweep(spec);
  CHECK(r.rows.size() == 2 * (4 * 2 + 1));

  std::ifstream in(spec.output_path);
  std::string line;
  REQUIRE(std::getline(in, line));
  CHECK(line == "receiver,b,snr_db,ber,ber_ci95,sum_rate,bits_simulated,errors,packets,wall_time_s");
  int rows = 0;
  while (std::getline(in, line)) {
    const auto f = split_fields(line);
    REQUIRE(f.size() == 10);
    CHECK(f[5].empty());  // no rate in BER mode
    CHECK(!f[3].empty());
    CHECK(f[6] == std::to_string(20 * 8 * 100));
    if (f[0] == "fr-mmse") {
      CHECK(f[1].empty());
    } else {
      CHECK((f[1] == "2" || f[1] == "3"));
    }
    ++rows;
  }
  CHECK(rows == 18);

  CHECK(metadata_path(spec.output_path) == (dir / "run.meta.json").string());
  std::ifstream meta_in(metadata_path(spec.output_path));
  const nlohmann::json meta = nlohmann::json::parse(meta_in);
  CHECK(meta["seed"].get<std::uint64_t>() == 2024);
  CHECK(meta["rho_q"]["2"].get<double>() == qm_test::cached_quantizer(2).rho_q);
  CHECK(meta["rho_q"].contains("3"));
  CHECK(meta["beta"]["3"].get<double>() == doctest::Approx(std::sqrt(3.0)));
  CHECK(meta["alpha"]["3"]["count"].get<int>() == 2 * 20);
  CHECK(meta["snr_convention"].get<std::string>().find("average received signal power per BS antenna") != std::string::npos);
  CHECK(meta["config"]["users"].get<int>() == 4);
  CHECK(meta.contains("version"));
  CHECK(meta["early_stop"]["min_errors"].get<int>() == 500);
  CHECK(meta["skip_budget_exceeded"].get<bool>() == false);
  std::filesystem::remove_all(dir);
}

TEST_CASE("rate sweep rows and aggregation identity") {
  SweepSpec spec = desk_spec(1);
  spec.n_channels = 1;
  spec.snr_points = {5.0};
  const SweepResult r = run_rate_sweep(spec);
  REQUIRE(r.rows.size() == 5);
  for (const SimRow& row : r.rows) {
    CHECK(row.sum_rate.has_value());
    CHECK_FALSE(row.ber.has_value());
    CHECK_FALSE(row.errors.has_value());
    CHECK(row.packets == 1);
    CHECK(csv_row(row).find(",,,") != std::string::npos);
  }
  const SystemConfig cfg = with_snr(spec.base_config, 5.0);
  RandomStream rng = RandomStream::substream(cfg.seed, {0, 0, kRateStreamTag});
  const ChannelMatrix h = gen_channel(cfg, rng);
  const Quantizer& q = qm_test::cached_quantizer(3);
  for (ReceiverKind k : spec.receivers) {
    const ChainDesign d = design_receiver(k, h, cfg, q, {});
    const double direct = rate_report(d.filter, d.model_gain, d.model).sum_rate;
    const std::optional<int> bits = k == ReceiverKind::FrMmse ? std::nullopt : std::optional<int>(3);
    CHECK(*find_row(r, k, bits, 5.0).sum_rate == direct);
  }
}

TEST_CASE("unquantized LRA equals the full-resolution baseline") {
  RandomStream rng(3);
  const SystemConfig cfg = small_config(4, 2, 16, 3.0);
  const ChannelMatrix h = gen_channel(cfg, rng);
  const CorrelationSet full = correlation_set(h, cfg, 0.0);
  const Quantizer& q = qm_test::cached_quantizer(3);
  const ChainDesign lra = design_receiver(ReceiverKind::Lra, h, full, full, q, {});
  const ChainDesign fr = design_receiver(ReceiverKind::FrMmse, h, full, full, q, {});
  CHECK(rate_report(lra.filter, lra.model_gain, lra.model).sum_rate ==
        doctest::Approx(rate_report(fr.filter, fr.model_gain, fr.model).sum_rate).epsilon(1e-12));
  CHECK_FALSE(fr.front_end.quantized);
  CHECK(lra.front_end.quantized);
}

TEST_CASE("FR rate bounds the quantized rates in a sweep") {
  SweepSpec spec = desk_spec(1);
  spec.n_channels = 10;
  spec.snr_points = {0.0, 10.0};
  spec.bits_list = {2, 3, 4, 5};
  spec.receivers = {ReceiverKind::LraAgc, ReceiverKind::FrMmse};
  const SweepResult r = run_rate_sweep(spec);
  for (double snr : spec.snr_points) {
    const double fr = *find_row(r, ReceiverKind::FrMmse, std::nullopt, snr).sum_rate;
    for (int b : spec.bits_list) CHECK(*find_row(r, ReceiverKind::LraAgc, b, snr).sum_rate <= fr);
  }
}

TEST_CASE("early stopping at batch boundaries") {
  SweepSpec spec = desk_spec(2000);
  spec.snr_points = {-4.0};
  spec.receivers = {ReceiverKind::Zf, ReceiverKind::Mmse};
  spec.early_stop = {true, 100, 200};
  const SweepResult r = run_sweep(spec);
  for (const SimRow& row : r.rows) {
    CHECK(row.packets == 200);
    CHECK(*row.errors >= 100);
  }
  spec.early_stop.enabled = false;
  spec.base_config.n_packets = 250;
  for (const SimRow& row : run_sweep(spec).rows) CHECK(row.packets == 250);
}

TEST_CASE("failed draws are skipped and counted against the budget") {
  set_warning_echo(false);
  reset_warnings();
  SweepSpec spec = desk_spec(10);
  spec.snr_points = {300.0};
  spec.receivers = {ReceiverKind::Mmse, ReceiverKind::Zf};
  const SweepResult r = run_sweep(spec);
  CHECK(r.skip_budget_exceeded);
  const SimRow& mmse = find_row(r, ReceiverKind::Mmse, 3, 300.0);
  CHECK(mmse.packets == 0);
  CHECK(mmse.skipped == 10);
  CHECK_FALSE(mmse.ber.has_value());
  CHECK(csv_row(mmse).rfind("mmse,3,300,,,,0,0,0,", 0) == 0);
  CHECK(find_row(r, ReceiverKind::Zf, 3, 300.0).packets == 10);
  CHECK(warning_count(Warning::PacketSkipped) == 10);
  CHECK(r.metadata["skipped"].get<int>() == 10);
  reset_warnings();
}

TEST_CASE("sweep validation") {
  SweepSpec spec = desk_spec(1);
  spec.receivers.clear();
  CHECK_THROWS_AS(run_sweep(spec), ValidationError);
  spec = desk_spec(1);
  spec.snr_points = {5.0, 5.0};
  CHECK_THROWS_AS(validate(spec), ValidationError);
  spec.snr_points = {};
  CHECK_THROWS_AS(validate(spec), ValidationError);
  spec = desk_spec(1);
  spec.bits_list = {0};
  CHECK_THROWS_AS(validate(spec), DomainError);
  spec.bits_list = {3, 3};
  CHECK_THROWS_AS(validate(spec), ValidationError);
  spec = desk_spec(1);
  spec.design.rounds = 0;
  CHECK_THROWS_AS(validate(spec), ValidationError);
  spec = desk_spec(1);
  spec.design.beta = -1.0;
  CHECK_THROWS_AS(validate(spec), DomainError);
  spec = desk_spec(1);
  spec.output_path = "/nonexistent-dir/x.csv";
  CHECK_THROWS_AS(run_sweep(spec), Error);
}
