#pragma once

#include <string>

#include "kapitza/timeseries.hpp"

namespace kapitza::io {

/// Writes the standard columns (standard_columns()) with %.17g values.
/// Columns the series lacks are left empty and undefined values are written
/// as nan. The metadata goes to path + ".json". Throws IoError.
void write_csv(const TimeSeries& series, const std::string& path);

/// Reads a file written by write_csv. Columns that are empty in every row
/// are dropped, isolated empty fields read as NaN. Throws IoError.
TimeSeries read_csv(const std::string& path);

}  // namespace kapitza::io
