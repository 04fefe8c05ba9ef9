#pragma once

#include "nbpc/harness.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>

namespace nbpc {

// Report file: one JSON object per line. Each trial is
//   {"record":"trial","trial_id":..,"x":"0101..","neg_log_mass":..,"m_light":..,
//    "enc_bits":..,"decode_ok":..,"fallback_used":..,"bound":..,"within_bound":..,"weight":..}
// and the last line is
//   {"record":"summary", <context fields>, <summary fields>}.
// Field order is fixed.

void write_report(std::ostream& out, const ExperimentReport& report);
void emit_report(const ExperimentReport& report, const std::filesystem::path& path);

/// Parses a report written by write_report. Throws ConfigError on any
/// malformed line.
ExperimentReport read_report(std::istream& in);
ExperimentReport load_report(const std::filesystem::path& path);

/// The summary as a single JSON line (used by the CLI).
std::string summary_json(const ExperimentReport& report);

}  // namespace nbpc
