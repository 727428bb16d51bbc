#include "spinchaos/csv.hpp"

#include <cmath>
#include <cstdio>

#include "spinchaos/error.hpp"

namespace spinchaos {

std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    if (v == 0.0) v = 0.0;  // drop the sign of -0
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

CsvWriter::CsvWriter(const std::string& path, const std::vector<std::string>& header)
    : out_(path), columns_(header.size()) {
    if (!out_) throw ConfigError("cannot write " + path);
    for (std::size_t i = 0; i < header.size(); ++i) out_ << (i ? "," : "") << header[i];
    out_ << '\n';
}

void CsvWriter::row(std::span<const double> values) {
    if (values.size() != columns_) throw std::logic_error("CSV row width does not match header");
    for (std::size_t i = 0; i < values.size(); ++i) out_ << (i ? "," : "") << format_number(values[i]);
    out_ << '\n';
}

}  // namespace spinchaos
