#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace preb::csv {

std::string number(double x);
std::string number(std::optional<double> x);  // empty field when absent

std::vector<std::string> split(const std::string& line);

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    int column(const std::string& name) const;  // -1 when missing
};

Table read(std::istream& is);

double parse_number(const std::string& field);

} // namespace preb::csv
