#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>

#include "wavebench/series.hpp"

namespace wavebench {

// CSV series files: a header row, a numeric value column (default name
// `value`) and an optional integer label column named `period` or `t`.
// Other columns are ignored. Decimal point, no thousands separators.

TimeSeries read_series_csv(std::istream& in, std::string_view value_column = "value");
TimeSeries read_series_csv(const std::filesystem::path& path, std::string_view value_column = "value");

// Writes `t,value` rows with round-trip precision.
void write_series_csv(std::ostream& out, const TimeSeries& series);
void write_series_csv(const std::filesystem::path& path, const TimeSeries& series);

// Shortest representation that parses back to the same double.
std::string format_double(double value);

} // namespace wavebench
