#include "eif/csv.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "eif/error.hpp"
#include "eif/format.hpp"

namespace eif {

std::string csv_field(std::string_view text) {
    if (text.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(text);
    std::string out = "\"";
    for (char c : text) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

std::string csv_row(const std::vector<std::string>& fields) {
    std::string out;
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) out += ',';
        out += csv_field(fields[i]);
    }
    return out + "\n";
}

std::vector<std::vector<double>> read_numeric_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(ErrorKind::input, "cannot open data file '" + path + "'");
    std::vector<std::vector<double>> rows;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (trim(line).empty()) continue;
        const auto fields = split(line, ',');
        if (rows.empty() && line_no == 1) {
            // header when the first field is not numeric
            try {
                parse_number(trim(fields.front()), "field");
            } catch (const Error&) {
                continue;
            }
        }
        std::vector<double> row;
        for (const auto& f : fields) {
            try {
                row.push_back(parse_number(trim(f), "field"));
            } catch (const Error&) {
                fail(ErrorKind::input, path + ": malformed value '" + f + "' on row " + std::to_string(line_no));
            }
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

void write_file_atomic(const std::string& path, const std::string& content) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) fail(ErrorKind::input, "cannot write output file '" + path + "'");
        out << content;
        out.flush();
        if (!out) fail(ErrorKind::input, "failed writing output file '" + path + "'");
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) {
        fs::remove(tmp, ec);
        fail(ErrorKind::input, "cannot move output into place at '" + path + "'");
    }
}

}  // namespace eif
