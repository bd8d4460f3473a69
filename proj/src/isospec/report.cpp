#include "isospec/report.hpp"

#include <fstream>

#include "isospec/errors.hpp"

namespace isospec {

Report::Report(const std::string& title) {
  os_.precision(15);
  os_ << title << "\n";
  depth_ = 1;
}

void Report::kv(const std::string& key, const std::string& value) { os_ << indent() << key << " " << value << "\n"; }
void Report::kv(const std::string& key, double value) {
  os_ << indent() << key << " ";
  os_ << value << "\n";
}
void Report::kv(const std::string& key, int value) { os_ << indent() << key << " " << value << "\n"; }
void Report::kv(const std::string& key, bool value) { os_ << indent() << key << " " << (value ? 1 : 0) << "\n"; }

void Report::begin_section(const std::string& name) {
  os_ << indent() << name << "\n";
  ++depth_;
}

void Report::end_section() {
  if (depth_ > 1) --depth_;
}

void Report::raw(const std::string& block) {
  std::istringstream is(block);
  std::string line;
  while (std::getline(is, line)) os_ << indent() << line << "\n";
}

void Report::write_file(const std::string& path) const {
  std::ofstream f(path);
  if (!f) fail(ErrorKind::BadInput, "cannot write " + path);
  f << os_.str();
}

CsvWriter::CsvWriter(std::vector<std::string> columns) : ncols_(columns.size()) {
  os_.precision(15);
  for (size_t i = 0; i < columns.size(); ++i) os_ << (i ? "," : "") << columns[i];
  os_ << "\n";
}

void CsvWriter::row(const std::vector<double>& values) {
  for (size_t i = 0; i < values.size(); ++i) os_ << (i ? "," : "") << values[i];
  os_ << "\n";
}

void CsvWriter::row_mixed(const std::vector<std::string>& values) {
  for (size_t i = 0; i < values.size(); ++i) os_ << (i ? "," : "") << values[i];
  os_ << "\n";
}

void CsvWriter::write_file(const std::string& path) const {
  std::ofstream f(path);
  if (!f) fail(ErrorKind::BadInput, "cannot write " + path);
  f << os_.str();
}

}  // namespace isospec
