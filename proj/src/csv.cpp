#include "songsieve/csv.hpp"

#include <fstream>
#include <sstream>

#include "songsieve/error.hpp"

namespace songsieve::csv {

std::vector<Row> parse(const std::string& text) {
    std::vector<Row> rows;
    Row row;
    std::string field;
    bool in_quotes = false;
    bool row_started = false;

    std::size_t i = 0;
    const std::size_t n = text.size();
    while (i < n) {
        const char c = text[i];
        if (in_quotes) {
            if (c == '"') {
                if (i + 1 < n && text[i + 1] == '"') {
                    field.push_back('"');
                    i += 2;
                } else {
                    in_quotes = false;
                    ++i;
                }
            } else {
                field.push_back(c);
                ++i;
            }
            continue;
        }
        switch (c) {
            case '"':
                in_quotes = true;
                row_started = true;
                ++i;
                break;
            case ',':
                row.push_back(std::move(field));
                field.clear();
                row_started = true;
                ++i;
                break;
            case '\r':
                ++i;
                break;
            case '\n':
                if (row_started || !field.empty() || !row.empty()) {
                    row.push_back(std::move(field));
                    field.clear();
                    rows.push_back(std::move(row));
                    row.clear();
                }
                row_started = false;
                ++i;
                break;
            default:
                field.push_back(c);
                row_started = true;
                ++i;
                break;
        }
    }
    if (in_quotes) throw error(errc::malformed_row, "unterminated quoted CSV field");
    if (row_started || !field.empty() || !row.empty()) {
        row.push_back(std::move(field));
        rows.push_back(std::move(row));
    }
    return rows;
}

std::vector<Row> read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw error(errc::io_failure, "cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse(buf.str());
}

std::string escape_field(const std::string& field) {
    if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += "\"\"";
        else out.push_back(c);
    }
    out.push_back('"');
    return out;
}

std::string format_row(const Row& row) {
    std::string out;
    for (std::size_t i = 0; i < row.size(); ++i) {
        if (i) out.push_back(',');
        out += escape_field(row[i]);
    }
    out.push_back('\n');
    return out;
}

void write_file(const std::string& path, const std::vector<Row>& rows) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw error(errc::io_failure, "cannot write " + path);
    for (const Row& row : rows) out << format_row(row);
}

}  // namespace songsieve::csv
