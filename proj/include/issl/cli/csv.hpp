#pragma once

#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

namespace issl::cli {

/// Shortest-safe text for a double: 17 significant digits, so parsing the
/// result returns the same bits for every finite value.
std::string format_double(double x);

/// A CSV cell: text is written verbatim, numbers through format_double.
struct Cell {
  std::string text;
  Cell(double x) : text(format_double(x)) {}
  Cell(std::size_t x) : text(std::to_string(x)) {}
  Cell(int x) : text(std::to_string(x)) {}
  Cell(std::string s) : text(std::move(s)) {}
  Cell(const char* s) : text(s) {}
};

/// Comma-separated, Unix newlines, header first.
class CsvWriter {
 public:
  CsvWriter(const std::string& path, const std::vector<std::string>& header);
  void row(const std::vector<Cell>& cells);

 private:
  std::ofstream out_;
  std::size_t columns_;
};

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

CsvTable read_csv(const std::string& path);

}  // namespace issl::cli
