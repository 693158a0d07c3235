#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "fracdn/types.hpp"

namespace fracdn {

// Tabular payload: named columns over shared rows. values may have zero rows
// (header-only table) but always has one column per name.
struct CsvTable {
    std::vector<std::string> columns;
    Mat values;
};

void ensure_directory(const std::filesystem::path& dir);

// CSV with a header row and 17-significant-digit decimal values, enough for
// IEEE-754 doubles to round-trip bit-exactly.
void write_csv(const std::filesystem::path& path, const CsvTable& table);
CsvTable read_csv(const std::filesystem::path& path);

void write_text_file(const std::filesystem::path& path, const std::string& text);
std::string read_text_file(const std::filesystem::path& path);

}  // namespace fracdn
