#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace onedyn {

/// One quantitative check: a measured value against its bound.
struct Check {
    std::string name;
    double value = 0.0;
    double bound = 0.0;
    bool pass = false;
    std::string note;
};

/// A run report: named checks plus free-form key/value metadata.
/// Serializes to a stable line format (one check per line) so that a summary
/// can be diffed between runs.
class Report {
public:
    void add(const std::string& name, double value, double bound, bool pass,
             const std::string& note = "");
    /// value <= bound convenience form.
    void check_le(const std::string& name, double value, double bound,
                  const std::string& note = "");
    void check_true(const std::string& name, bool ok, const std::string& note = "");
    void meta(const std::string& key, const std::string& value);

    bool all_pass() const;
    const std::vector<Check>& checks() const { return checks_; }

    void write(std::ostream& os) const;
    std::string str() const;

private:
    std::vector<Check> checks_;
    std::vector<std::pair<std::string, std::string>> meta_;
};

/// Deterministic float formatting used in every CSV/summary we emit:
/// shortest round-trip representation, locale independent.
std::string format_double(double x);

/// Write one CSV row; cells containing commas are not expected and rejected.
void csv_row(std::ostream& os, const std::vector<std::string>& cells);

} // namespace onedyn
