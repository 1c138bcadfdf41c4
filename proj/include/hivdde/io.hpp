#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace hivdde {

enum class TableFormat { Csv, JsonLines };

/// Shortest round-trippable decimal at 15 significant digits.
inline std::string format_num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.15g", v);
    return buf;
}

/// Writes a rectangular numeric table as CSV or JSON-lines (one object per
/// row, keyed by the column names).
inline void write_table(std::ostream& out, const std::vector<std::string>& columns,
                        const std::vector<std::vector<double>>& rows, TableFormat format) {
    if (format == TableFormat::Csv) {
        for (std::size_t j = 0; j < columns.size(); ++j)
            out << columns[j] << (j + 1 < columns.size() ? ',' : '\n');
        for (const auto& row : rows) {
            for (std::size_t j = 0; j < row.size(); ++j)
                out << format_num(row[j]) << (j + 1 < row.size() ? ',' : '\n');
        }
        return;
    }
    for (const auto& row : rows) {
        nlohmann::ordered_json obj;
        for (std::size_t j = 0; j < row.size() && j < columns.size(); ++j)
            obj[columns[j]] = row[j];
        out << obj.dump() << '\n';
    }
}

inline void write_table(const std::filesystem::path& path, const std::vector<std::string>& columns,
                        const std::vector<std::vector<double>>& rows, TableFormat format) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write output file: " + path.string());
    write_table(out, columns, rows, format);
}

/// Reads back a table written by write_table (either format). Used by the
/// round-trip checks; non-numeric cells are rejected.
inline std::vector<std::vector<double>> read_table(std::istream& in, TableFormat format,
                                                   std::vector<std::string>* columns = nullptr) {
    std::vector<std::vector<double>> rows;
    std::string line;
    if (format == TableFormat::Csv) {
        if (!std::getline(in, line)) return rows;
        if (columns) {
            columns->clear();
            std::string cur;
            for (char ch : line) {
                if (ch == ',') {
                    columns->push_back(cur);
                    cur.clear();
                } else
                    cur += ch;
            }
            columns->push_back(cur);
        }
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            std::vector<double> row;
            std::size_t start = 0;
            while (true) {
                const auto comma = line.find(',', start);
                const std::string cell = line.substr(start, comma - start);
                row.push_back(std::stod(cell));
                if (comma == std::string::npos) break;
                start = comma + 1;
            }
            rows.push_back(std::move(row));
        }
        return rows;
    }
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto obj = nlohmann::ordered_json::parse(line);
        std::vector<double> row;
        if (columns && columns->empty())
            for (const auto& [k, v] : obj.items()) columns->push_back(k);
        for (const auto& [k, v] : obj.items()) row.push_back(v.get<double>());
        rows.push_back(std::move(row));
    }
    return rows;
}

inline const char* table_extension(TableFormat format) {
    return format == TableFormat::Csv ? ".csv" : ".jsonl";
}

}  // namespace hivdde
