#include "preb/csv.hpp"

#include "preb/errors.hpp"

#include <algorithm>
#include <cstdio>
#include <istream>

namespace preb::csv {

std::string number(double x)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.15g", x);
    return buf;
}

std::string number(std::optional<double> x)
{
    return x ? number(*x) : std::string();
}

std::vector<std::string> split(const std::string& line)
{
    std::vector<std::string> out;
    std::string field;
    for (char c : line) {
        if (c == ',') {
            out.push_back(field);
            field.clear();
        } else if (c != '\r') {
            field.push_back(c);
        }
    }
    out.push_back(field);
    return out;
}

int Table::column(const std::string& name) const
{
    auto it = std::find(header.begin(), header.end(), name);
    return it == header.end() ? -1 : static_cast<int>(it - header.begin());
}

Table read(std::istream& is)
{
    Table t;
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty() || line == "\r")
            continue;
        if (t.header.empty()) {
            t.header = split(line);
            continue;
        }
        auto row = split(line);
        if (row.size() != t.header.size())
            throw ConfigError("csv: row has " + std::to_string(row.size()) + " fields, header has "
                              + std::to_string(t.header.size()));
        t.rows.push_back(std::move(row));
    }
    if (t.header.empty())
        throw ConfigError("csv: missing header");
    return t;
}

double parse_number(const std::string& field)
{
    try {
        std::size_t pos = 0;
        double v = std::stod(field, &pos);
        if (pos != field.size())
            throw ConfigError("csv: trailing characters in '" + field + "'");
        return v;
    } catch (const std::logic_error&) {
        throw ConfigError("csv: not a number: '" + field + "'");
    }
}

} // namespace preb::csv
