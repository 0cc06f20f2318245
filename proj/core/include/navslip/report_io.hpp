#pragma once

#include <string>
#include <utility>
#include <vector>

#include "navslip/config.hpp"
#include "navslip/dynamics.hpp"
#include "navslip/experiments.hpp"

namespace navslip {

/// Header plus one row per record, 17 significant digits. Throws
/// NonFiniteOutput on NaN or Inf.
std::string ledger_csv(const EnergyLedger& ledger);

/// {config_echo, metrics, fits, k_uniformity, acceptance}. Missing fits are
/// written as null. Throws NonFiniteOutput on NaN or Inf.
std::string sweep_report_json(const SweepReport& report, const RunConfig& cfg);

/// Two numeric columns (k, value) separated by commas; a non-numeric first
/// line is taken as a header.
std::vector<std::pair<double, double>> parse_fit_csv(const std::string& text);

/// "%.17g"
std::string format_double(double v);

}  // namespace navslip
