// SPDX-License-Identifier: Apache-2.0
#include "quantmimo/diagnostics.hpp"

#include <array>
#include <atomic>
#include <cstdio>
#include <mutex>

namespace quantmimo {
namespace {

constexpr std::size_t kKinds = 5;
constexpr std::uint64_t kEchoLimit = 3;

std::array<std::atomic<std::uint64_t>, kKinds> g_counts{};
std::atomic<bool> g_echo{true};
std::mutex g_echo_mutex;

}  // namespace

std::string_view to_string(Warning kind) {
  switch (kind) {
    case Warning::GainRidge: return "gain_ridge";
    case Warning::ErrorCovIndefinite: return "error_cov_indefinite";
    case Warning::EigenvalueClamped: return "eigenvalue_clamped";
    case Warning::RateClamped: return "rate_clamped";
    case Warning::PacketSkipped: return "packet_skipped";
  }
  return "unknown";
}

void record_warning(Warning kind, std::string_view detail) {
  const auto n = g_counts[static_cast<std::size_t>(kind)].fetch_add(1) + 1;
  if (g_echo.load() && n <= kEchoLimit) {
    std::lock_guard lock(g_echo_mutex);
    std::fprintf(stderr, "warning [%.*s]: %.*s%s\n", static_cast<int>(to_string(kind).size()),
                 to_string(kind).data(), static_cast<int>(detail.size()), detail.data(),
                 n == kEchoLimit ? " (further warnings of this kind suppressed)" : "");
  }
}

std::uint64_t warning_count(Warning kind) { return g_counts[static_cast<std::size_t>(kind)].load(); }

std::map<std::string, std::uint64_t> warning_counts() {
  std::map<std::string, std::uint64_t> out;
  for (std::size_t i = 0; i < kKinds; ++i) {
    out.emplace(std::string(to_string(static_cast<Warning>(i))), g_counts[i].load());
  }
  return out;
}

void reset_warnings() {
  for (auto& c : g_counts) c.store(0);
}

void set_warning_echo(bool enabled) { g_echo.store(enabled); }

}  // namespace quantmimo
