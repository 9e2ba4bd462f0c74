#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace langesim {

// Shortest form that round-trips: printf %.17g.
std::string format_number(double x);

inline const char* axis_name(int k) {
    static const char* names[] = {"x", "y", "z"};
    return names[k];
}

// Comment-headed CSV: `# key = value` lines, one header row, data rows, then
// trailing `# key = value` summary lines.
class CsvWriter {
public:
    explicit CsvWriter(std::ostream& out) : out_(out) {}

    void comment(const std::string& key, const std::string& value) { out_ << "# " << key << " = " << value << '\n'; }
    void comment(const std::string& key, double value) { comment(key, format_number(value)); }
    void header(const std::vector<std::string>& columns);
    void row(const std::vector<double>& values);

private:
    std::ostream& out_;
    std::size_t columns_ = 0;
};

}  // namespace langesim
