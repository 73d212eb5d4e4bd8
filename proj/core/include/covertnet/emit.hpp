#pragma once

#include <filesystem>
#include <string>

#include "covertnet/sweep.hpp"

namespace covertnet {

enum class Format { kCsv, kJson };

Format parse_format(std::string_view text);

/// Header line of every CSV result file.
inline constexpr std::string_view kCsvHeader = "n,trial,seed,metric,value";

/// One row per (n, trial, metric); doubles with 17 significant digits.
std::string to_csv(const SweepResult& result);

/// Config echo, sweep spec, powers, fits, medians and per-point data.
std::string to_json(const SweepResult& result);

/// Per-slot metrics of one simulation, one row per slot.
inline constexpr std::string_view kSlotCsvHeader =
    "slot,phase,senders,suppressed,active_pairs,max_warden_power,mean_warden_power,"
    "max_window_kl,sufficient_ok,necessary_ok,exact_kl_ok,aggregate_rate,interference_exceed";
std::string to_csv(const SimulationResult& result);

/// Config echo, transmit power, calibration report, ledger totals and slots.
std::string to_json(const SimulationResult& result, const NetworkConfig& config);

/// Writes the result; throws EmitError for empty results or unwritable paths.
void emit(const SweepResult& result, Format format, const std::filesystem::path& path);

/// 17 significant digits, used for every double in CSV and table output.
std::string format_double(double v);

}  // namespace covertnet
