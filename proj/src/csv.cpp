#include "csv.hpp"

namespace feedpipe {

std::vector<CsvRow> parse_csv(std::string_view text) {
    if (text.size() >= 3 && text.substr(0, 3) == "\xEF\xBB\xBF")
        text.remove_prefix(3);

    std::vector<CsvRow> rows;
    std::vector<std::string> cells;
    std::string cell;
    bool in_quotes = false;
    bool cell_started = false;
    std::size_t row_number = 1;

    auto end_cell = [&] {
        cells.push_back(cell);
        cell.clear();
        cell_started = false;
    };
    auto end_row = [&] {
        if (cell_started || !cell.empty() || !cells.empty()) {
            end_cell();
            bool all_empty = true;
            for (const auto& c : cells)
                if (!c.empty())
                    all_empty = false;
            if (!all_empty)
                rows.push_back({cells, row_number});
            cells.clear();
        }
        ++row_number;
    };

    for (std::size_t i = 0; i < text.size(); ++i) {
        char c = text[i];
        if (in_quotes) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    cell.push_back('"');
                    ++i;
                } else {
                    in_quotes = false;
                }
            } else {
                cell.push_back(c);
            }
            continue;
        }
        switch (c) {
        case '"':
            in_quotes = true;
            cell_started = true;
            break;
        case ',':
            cell_started = true;
            end_cell();
            cell_started = true;  // next cell exists even if empty
            break;
        case '\r':
            if (i + 1 < text.size() && text[i + 1] == '\n')
                ++i;
            end_row();
            break;
        case '\n':
            end_row();
            break;
        default:
            cell.push_back(c);
            cell_started = true;
        }
    }
    end_row();
    return rows;
}

std::string csv_field(std::string_view value) {
    bool needs_quotes = value.find_first_of(",\"\r\n") != std::string_view::npos;
    if (!needs_quotes)
        return std::string(value);
    std::string out = "\"";
    for (char c : value) {
        if (c == '"')
            out += "\"\"";
        else
            out.push_back(c);
    }
    out.push_back('"');
    return out;
}

}  // namespace feedpipe
