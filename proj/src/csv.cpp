#include "nhqw/csv.hpp"

#include <cstdio>

namespace nhqw {

std::string csv_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

CsvWriter::CsvWriter(const std::filesystem::path& path) : path_(path) {
  file_ = std::fopen(path.string().c_str(), "wb");
  if (!file_) throw IoError("cannot open '" + path.string() + "' for writing");
}

CsvWriter::~CsvWriter() {
  if (file_) std::fclose(file_);
}

void CsvWriter::line(const std::string& text) {
  if (!file_) throw IoError("writer for '" + path_.string() + "' is closed");
  if (std::fputs(text.c_str(), file_) == EOF || std::fputc('\n', file_) == EOF) {
    throw IoError("write failed for '" + path_.string() + "'");
  }
}

void CsvWriter::close() {
  if (!file_) return;
  const int rc = std::fclose(file_);
  file_ = nullptr;
  if (rc != 0) throw IoError("flush failed for '" + path_.string() + "'");
}

}  // namespace nhqw
