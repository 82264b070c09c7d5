#include "tvcons/report.h"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace tvcons {

std::string FormatDouble(double value) {
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  if (std::isnan(value)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

void Report::Add(std::string_view key, double value) {
  entries_.emplace_back(std::string(key), FormatDouble(value));
}

void Report::Add(std::string_view key, long value) {
  entries_.emplace_back(std::string(key), std::to_string(value));
}

void Report::Add(std::string_view key, bool value) {
  entries_.emplace_back(std::string(key), value ? "true" : "false");
}

void Report::Add(std::string_view key, std::string_view value) {
  entries_.emplace_back(std::string(key), std::string(value));
}

void Report::Add(std::string_view key, const Eigen::MatrixXd& value) {
  std::string flat;
  for (Eigen::Index i = 0; i < value.rows(); ++i) {
    for (Eigen::Index j = 0; j < value.cols(); ++j) {
      if (!flat.empty()) flat += ',';
      flat += FormatDouble(value(i, j));
    }
  }
  entries_.emplace_back(std::string(key), flat);
  entries_.emplace_back(std::string(key) + ".shape",
                        std::to_string(value.rows()) + "x" + std::to_string(value.cols()));
}

std::string Report::Get(std::string_view key) const {
  for (auto it = entries_.rbegin(); it != entries_.rend(); ++it) {
    if (it->first == key) return it->second;
  }
  return {};
}

void Report::Write(std::ostream& out) const {
  for (const auto& [k, v] : entries_) out << k << " = " << v << '\n';
}

std::string Report::str() const {
  std::ostringstream out;
  Write(out);
  return out.str();
}

}  // namespace tvcons
