#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace feedpipe {

struct CsvRow {
    std::vector<std::string> cells;
    std::size_t row_number = 0;  // 1-based physical row in the input
};

/// RFC 4180-style reader: quoted cells, embedded commas/newlines, CRLF,
/// doubled quotes. A leading UTF-8 BOM is skipped. Rows that are entirely
/// empty are dropped.
std::vector<CsvRow> parse_csv(std::string_view text);

/// Quotes a value for CSV output when it contains a comma, quote or newline.
std::string csv_field(std::string_view value);

}  // namespace feedpipe
