#pragma once

#include <cstdio>
#include <filesystem>
#include <string>

#include "nhqw/errors.hpp"

namespace nhqw {

// Fixed-format float field: 12 significant digits, locale-independent.
std::string csv_double(double v);

class CsvWriter {
 public:
  explicit CsvWriter(const std::filesystem::path& path);
  ~CsvWriter();
  CsvWriter(const CsvWriter&) = delete;
  CsvWriter& operator=(const CsvWriter&) = delete;

  void line(const std::string& text);
  void close();  // throws IoError on flush failure

 private:
  std::FILE* file_ = nullptr;
  std::filesystem::path path_;
};

}  // namespace nhqw
