#include "qht/csv.hpp"

#include <cmath>
#include <cstdio>

#include "qht/errors.hpp"

namespace qht {

std::string format_sci(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (v == 0.0) v = 0.0;  // drop the sign of negative zero
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.11e", v);
  return buf;
}

CsvWriter::CsvWriter(std::ostream& out, std::vector<std::string> header)
    : out_(out), width_(header.size()) {
  row(header);
}

void CsvWriter::row(const std::vector<std::string>& fields) {
  if (fields.size() != width_) {
    throw Error(ErrorKind::InvalidArgument, "CSV row has " + std::to_string(fields.size()) +
                                                " fields, header has " + std::to_string(width_));
  }
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i > 0) out_ << ',';
    out_ << fields[i];
  }
  out_ << '\n';
}

}  // namespace qht
