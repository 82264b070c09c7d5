#pragma once

#include <ostream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace tvcons {

/// Ordered flat `key = value` report. Doubles use %.17g; matrices are written
/// row-major as a comma list with a companion `<key>.shape = RxC` line.
class Report {
 public:
  void Add(std::string_view key, double value);
  void Add(std::string_view key, long value);
  void Add(std::string_view key, int value) { Add(key, static_cast<long>(value)); }
  void Add(std::string_view key, bool value);
  void Add(std::string_view key, std::string_view value);
  void Add(std::string_view key, const char* value) { Add(key, std::string_view(value)); }
  void Add(std::string_view key, const Eigen::MatrixXd& value);

  const std::vector<std::pair<std::string, std::string>>& entries() const {
    return entries_;
  }
  /// Value of the last entry named `key`; empty when absent.
  std::string Get(std::string_view key) const;

  void Write(std::ostream& out) const;
  std::string str() const;

 private:
  std::vector<std::pair<std::string, std::string>> entries_;
};

std::string FormatDouble(double value);

}  // namespace tvcons
