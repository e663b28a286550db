#include "onedyn/report.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace onedyn {

void Report::add(const std::string& name, double value, double bound, bool pass,
                 const std::string& note) {
    checks_.push_back({name, value, bound, pass, note});
}

void Report::check_le(const std::string& name, double value, double bound,
                      const std::string& note) {
    add(name, value, bound, value <= bound, note);
}

void Report::check_true(const std::string& name, bool ok, const std::string& note) {
    add(name, ok ? 1.0 : 0.0, 1.0, ok, note);
}

void Report::meta(const std::string& key, const std::string& value) {
    meta_.emplace_back(key, value);
}

bool Report::all_pass() const {
    for (const auto& c : checks_)
        if (!c.pass) return false;
    return true;
}

void Report::write(std::ostream& os) const {
    for (const auto& m : meta_) os << "# " << m.first << " = " << m.second << "\n";
    for (const auto& c : checks_) {
        os << (c.pass ? "PASS" : "FAIL") << "," << c.name << ","
           << format_double(c.value) << "," << format_double(c.bound);
        if (!c.note.empty()) os << "," << c.note;
        os << "\n";
    }
}

std::string Report::str() const {
    std::ostringstream ss;
    write(ss);
    return ss.str();
}

std::string format_double(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[40];
    // Shortest representation that round-trips.
    for (int prec = 1; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof(buf), "%.*g", prec, x);
        double back = 0.0;
        std::sscanf(buf, "%lf", &back);
        if (back == x) return buf;
    }
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

void csv_row(std::ostream& os, const std::vector<std::string>& cells) {
    for (size_t i = 0; i < cells.size(); ++i) {
        if (cells[i].find(',') != std::string::npos)
            throw std::invalid_argument("csv cell contains comma: " + cells[i]);
        if (i) os << ",";
        os << cells[i];
    }
    os << "\n";
}

} // namespace onedyn
