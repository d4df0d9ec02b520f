#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "qres/cli.hpp"

namespace qres::cli {

double round12(double x)
{
    if (!std::isfinite(x)) return x;
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return std::strtod(buf, nullptr);
}

std::string format12(double x)
{
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", x == 0.0 ? 0.0 : x);
    return buf;
}

Json number(double x)
{
    if (!std::isfinite(x)) return nullptr;
    const double r = round12(x);
    return r == 0.0 ? 0.0 : r;
}

CsvTable::CsvTable(std::vector<std::string> header) : header_(std::move(header))
{
    if (header_.empty()) throw Error("CSV table needs a header");
}

void CsvTable::add_row(const std::vector<double>& row)
{
    std::vector<std::string> cells;
    cells.reserve(row.size());
    for (double x : row) cells.push_back(format12(x));
    add_row(cells);
}

void CsvTable::add_row(const std::vector<std::string>& row)
{
    if (row.size() != header_.size()) throw Error("CSV row width does not match the header");
    rows_.push_back(row);
}

std::string CsvTable::str() const
{
    const auto quote = [](const std::string& s) {
        if (s.find_first_of(",\"\n") == std::string::npos) return s;
        std::string q = "\"";
        for (char c : s) {
            if (c == '"') q += '"';
            q += c;
        }
        return q + "\"";
    };
    std::ostringstream out;
    for (std::size_t i = 0; i < header_.size(); ++i) out << (i ? "," : "") << quote(header_[i]);
    out << "\n";
    for (const auto& r : rows_) {
        for (std::size_t i = 0; i < r.size(); ++i) out << (i ? "," : "") << quote(r[i]);
        out << "\n";
    }
    return out.str();
}

void write_text(const std::string& path, const std::string& text)
{
    const std::filesystem::path p(path);
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
    std::ofstream out(p, std::ios::binary);
    if (!out) throw Error("cannot write " + path);
    out << text;
    if (!out) throw Error("write failed for " + path);
}

void write_json(const std::string& path, const Json& doc)
{
    write_text(path, doc.dump(2) + "\n");
}

}  // namespace qres::cli
