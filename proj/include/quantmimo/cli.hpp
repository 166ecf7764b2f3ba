// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace quantmimo {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitNumerical = 3;

// "a:s:b" (inclusive range, s > 0) or a comma-separated list.
std::vector<double> parse_snr_points(std::string_view text);
std::vector<int> parse_int_list(std::string_view text);

struct Preset {
  int users;
  int tx_antennas;
  int rx_antennas;
  int packets;
};

Preset preset_by_name(std::string_view name);

// args excludes the program name. CSV goes to --out (plus the .meta.json
// sidecar) or to `out` when --out is absent.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace quantmimo
