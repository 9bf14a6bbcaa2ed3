#pragma once

#include <charconv>
#include <cmath>
#include <fstream>
#include <string>
#include <vector>

#include "evokan/common.hpp"

namespace evokan {

// Locale-independent shortest round-trip formatting, so CSV output is
// byte-stable across runs and environments.
inline std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

class CsvWriter {
public:
    explicit CsvWriter(const std::string& path) : os_(path) {
        if (!os_) throw io_error("cannot open " + path + " for writing");
        path_ = path;
    }

    void header(const std::vector<std::string>& names) { row_strings(names); }

    void row_strings(const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) os_ << ',';
            os_ << cells[i];
        }
        os_ << "\r\n";
        if (!os_) throw io_error("write failed: " + path_);
    }

    void row(const std::vector<double>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) os_ << ',';
            os_ << format_double(cells[i]);
        }
        os_ << "\r\n";
        if (!os_) throw io_error("write failed: " + path_);
    }

private:
    std::ofstream os_;
    std::string path_;
};

}  // namespace evokan
