#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gridpeak/errors.hpp"
#include "gridpeak/grid.hpp"
#include "gridpeak/thermal.hpp"

namespace gridpeak {

/// Hourly energy prices in USD/kWh, index = hour of day.
using PriceSeries = std::vector<double>;

/// Parse a "gridpeak-net/1" document. Ohm and kV quantities are converted to
/// per unit on the file's own base. Schema violations, unknown bus
/// references, and invalid ZIP or thermal parameters raise InputError.
[[nodiscard]] RadialNetwork parse_network(const std::string& json_text);

/// parse_network applied to a file on disk.
[[nodiscard]] RadialNetwork load_network(const std::string& path);

/// CSV with exact header "hour,ambient_c,wind_mps,solar_wm2" covering hours
/// 0 through 23 exactly once each.
[[nodiscard]] WeatherSeries load_weather_csv(const std::string& path);

/// CSV with exact header "hour,usd_per_kwh" covering hours 0 through 23.
[[nodiscard]] PriceSeries load_prices_csv(const std::string& path);

/// FNV-1a content hash used to detect mismatched inputs between runs.
[[nodiscard]] std::uint64_t file_fingerprint(const std::string& path);

} // namespace gridpeak
