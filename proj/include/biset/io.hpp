#pragma once

#include <iosfwd>
#include <string>

#include "biset/recovery.hpp"

namespace biset {

/// Comma-separated rows of numbers. A first row containing a non-numeric cell
/// is taken as a header and skipped. Empty, `NA` and `nan` cells are missing.
/// Throws IoError mentioning `source` on malformed input.
MeasurementTable read_table_csv(std::istream& in, const std::string& source = "<stream>");

/// {"values": [[...], ...]}; `null` entries are missing.
MeasurementTable read_table_json(std::istream& in, const std::string& source = "<stream>");

/// Dispatches on the extension: `.json` is JSON, anything else CSV.
MeasurementTable read_table_file(const std::string& path);

/// Shortest round-trip decimal form.
std::string format_double(double v);

void write_table_csv(std::ostream& out, const MeasurementTable& t);

}  // namespace biset
