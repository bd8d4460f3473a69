#pragma once

#include <sstream>
#include <string>
#include <vector>

namespace isospec {

// Human-readable key-value report with nested sections; diffable output for
// golden tests. Also a small CSV writer for scan data.
class Report {
 public:
  explicit Report(const std::string& title);
  void kv(const std::string& key, const std::string& value);
  void kv(const std::string& key, double value);
  void kv(const std::string& key, int value);
  void kv(const std::string& key, bool value);
  void begin_section(const std::string& name);
  void end_section();
  void raw(const std::string& block);
  std::string str() const { return os_.str(); }
  void write_file(const std::string& path) const;

 private:
  std::ostringstream os_;
  int depth_ = 0;
  std::string indent() const { return std::string(2 * depth_, ' '); }
};

class CsvWriter {
 public:
  explicit CsvWriter(std::vector<std::string> columns);
  void row(const std::vector<double>& values);
  void row_mixed(const std::vector<std::string>& values);
  std::string str() const { return os_.str(); }
  void write_file(const std::string& path) const;

 private:
  std::ostringstream os_;
  size_t ncols_;
};

}  // namespace isospec
