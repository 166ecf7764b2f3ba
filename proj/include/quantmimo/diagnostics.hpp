// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>

namespace quantmimo {

// Non-fatal numerical events. Counted process-wide; the first few of each
// kind are echoed to stderr.
enum class Warning {
  GainRidge,           // Hadamard-sum system regularized before solving for g
  ErrorCovIndefinite,  // error covariance had eigenvalues below -1e-10
  EigenvalueClamped,   // log-det clamped eigenvalues at 1e-12
  RateClamped,         // negative sum rate reported as 0
  PacketSkipped,       // a packet or channel draw failed and was skipped
};

void record_warning(Warning kind, std::string_view detail);
std::uint64_t warning_count(Warning kind);
std::map<std::string, std::uint64_t> warning_counts();
void reset_warnings();
void set_warning_echo(bool enabled);
std::string_view to_string(Warning kind);

}  // namespace quantmimo
