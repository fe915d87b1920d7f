#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace mmg {

// Shortest decimal form that parses back to the same double.
std::string format_double(double v);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

std::string to_csv(const CsvTable& t);

// Binary PGM (P5, maxval 255); value v in [0,1] maps to round(255 v).
std::string pgm_bytes(uint64_t width, uint64_t height, const std::vector<double>& values);
uint8_t gray_level(double v);

// Writes via a sibling temporary file and rename.
void write_file_atomic(const std::string& path, const std::string& content);
std::string read_file(const std::string& path);

}  // namespace mmg
