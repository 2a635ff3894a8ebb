#pragma once

#include <string>
#include <vector>

namespace songsieve::csv {

using Row = std::vector<std::string>;

/// Parse RFC-4180 CSV text: quoted fields, "" escapes, CR/LF and LF endings.
/// A trailing newline does not produce an empty final row.
std::vector<Row> parse(const std::string& text);

std::vector<Row> read_file(const std::string& path);

/// Quote a field only when it contains a comma, quote, or newline.
std::string escape_field(const std::string& field);

std::string format_row(const Row& row);

void write_file(const std::string& path, const std::vector<Row>& rows);

}  // namespace songsieve::csv
