#include "fracdn/io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "fracdn/errors.hpp"

namespace fracdn {

namespace {

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

void ensure_directory(const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) {
        throw IoError("cannot create directory " + dir.string() + ": " + ec.message());
    }
}

void write_csv(const std::filesystem::path& path, const CsvTable& table) {
    if (table.columns.empty() ||
        table.values.cols() != static_cast<Index>(table.columns.size())) {
        throw DataError("write_csv: column names do not match the value columns");
    }
    if (!table.values.allFinite()) {
        throw DataError("write_csv: table contains non-finite values");
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    for (size_t c = 0; c < table.columns.size(); ++c) {
        if (c) out << ',';
        out << table.columns[c];
    }
    out << '\n';
    for (Index r = 0; r < table.values.rows(); ++r) {
        for (Index c = 0; c < table.values.cols(); ++c) {
            if (c) out << ',';
            out << format_double(table.values(r, c));
        }
        out << '\n';
    }
    out.flush();
    if (!out) throw IoError("write failed for " + path.string());
}

CsvTable read_csv(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string() + " for reading");
    std::string line;
    if (!std::getline(in, line)) {
        throw DataError("read_csv: " + path.string() + " is empty (no header)");
    }
    if (!line.empty() && line.back() == '\r') line.pop_back();
    CsvTable table;
    {
        std::stringstream header(line);
        std::string name;
        while (std::getline(header, name, ',')) table.columns.push_back(name);
    }
    if (table.columns.empty()) {
        throw DataError("read_csv: " + path.string() + " has an empty header");
    }
    std::vector<double> cells;
    Index rows = 0;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::stringstream row(line);
        std::string cell;
        size_t col = 0;
        while (std::getline(row, cell, ',')) {
            char* end = nullptr;
            const double v = std::strtod(cell.c_str(), &end);
            if (end == cell.c_str() || *end != '\0') {
                throw DataError("read_csv: " + path.string() + " row " +
                                std::to_string(rows + 1) + " has a non-numeric cell '" +
                                cell + "'");
            }
            cells.push_back(v);
            ++col;
        }
        if (col != table.columns.size()) {
            throw DataError("read_csv: " + path.string() + " row " +
                            std::to_string(rows + 1) + " has " + std::to_string(col) +
                            " cells, expected " + std::to_string(table.columns.size()));
        }
        ++rows;
    }
    table.values.resize(rows, static_cast<Index>(table.columns.size()));
    for (Index r = 0; r < rows; ++r) {
        for (Index c = 0; c < table.values.cols(); ++c) {
            table.values(r, c) = cells[static_cast<size_t>(r * table.values.cols() + c)];
        }
    }
    return table;
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out << text;
    out.flush();
    if (!out) throw IoError("write failed for " + path.string());
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string() + " for reading");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

}  // namespace fracdn
