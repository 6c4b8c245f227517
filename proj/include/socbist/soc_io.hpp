// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "socbist/core_model.hpp"
#include "socbist/hybrid_testgen.hpp"

namespace socbist {

// Line-oriented SoC description:
//
//   # comment
//   soc <name>
//   pmax <number>
//   tam_width <int>
//   ate_freq_mhz <number>
//   core <id> pm <number> tvd <number> tvp <number> [fb <MHz>] [acb <int>]
//        [pis <int>] [ppis <int>]
//
// fb defaults to ate_freq_mhz (itself 100 when absent), acb to 1. The
// external clock is ate_freq_mhz and a DTP costs max(1, pis + ppis) cycles.
// Errors carry the offending line.
SocSpec parse_soc(std::string_view text);
// Canonical text; parse_soc(serialize_soc(s)) == s.
std::string serialize_soc(const SocSpec& soc);

// Coverage curve CSV with header `n_prtp,n_dtp_phase1,n_dtp_phase2`.
std::vector<CurveRow> parse_curve(std::string_view text);
std::string serialize_curve(const std::vector<CurveRow>& rows);

// Whole-file read; throws Error(Io).
std::string read_file(const std::string& path);

}  // namespace socbist
