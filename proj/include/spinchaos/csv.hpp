#pragma once

#include <fstream>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace spinchaos {

/// 12 significant digits, '.' decimal point, locale independent.
std::string format_number(double v);

/// Comma-separated file with a header row.
class CsvWriter {
public:
    CsvWriter(const std::string& path, const std::vector<std::string>& header);

    void row(std::span<const double> values);
    void row(std::initializer_list<double> values) { row(std::span<const double>(values.begin(), values.size())); }

private:
    std::ofstream out_;
    std::size_t columns_;
};

}  // namespace spinchaos
