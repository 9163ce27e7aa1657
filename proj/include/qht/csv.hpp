#pragma once

#include <initializer_list>
#include <ostream>
#include <string>
#include <vector>

namespace qht {

/// 12 significant digits in scientific notation ("%.11e").
std::string format_sci(double v);

/// Comma-separated output with a fixed header written on construction.
class CsvWriter {
 public:
  CsvWriter(std::ostream& out, std::vector<std::string> header);

  /// Throws InvalidArgument if the field count differs from the header.
  void row(const std::vector<std::string>& fields);

 private:
  std::ostream& out_;
  std::size_t width_;
};

}  // namespace qht
