#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace mllp {

/// A header plus rows of already formatted cells.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

/// %.17g, so the text parses back to the identical double. Non-finite values print as nan/inf/-inf.
std::string format_double(double v);

/// Quotes a cell when it holds a comma, quote, CR or LF; embedded quotes are doubled.
std::string csv_escape(const std::string& cell);

void write_csv(std::ostream& out, const Table& table);

/// RFC 4180 reader: quoted cells may contain commas, doubled quotes and line breaks.
/// The first record is the header. Throws std::runtime_error on an unterminated quote
/// or a row whose width differs from the header.
Table read_csv(std::istream& in);

/// JSON array of objects keyed by the header; cells that parse completely as finite numbers
/// become JSON numbers, everything else stays a string.
std::string table_to_json(const Table& table);

}  // namespace mllp
