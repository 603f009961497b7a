#pragma once

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "mmrelay/geometry.hpp"

namespace mmrelay {

// RFC-4180 CSV writer; numbers use '.' decimal and %.10g.
class CsvWriter {
  public:
    explicit CsvWriter(const std::string& path) {
        if (!path.empty() && path != "-") {
            file_.open(path);
            if (!file_) throw IoError("cannot open output file: " + path);
            out_ = &file_;
        } else {
            out_ = &std::cout;
        }
    }

    void row(const std::vector<std::string>& cells) {
        std::ostringstream line;
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) line << ',';
            line << quote(cells[i]);
        }
        *out_ << line.str() << "\r\n";
    }

    static std::string num(double v) {
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.10g", v);
        return buf;
    }

  private:
    static std::string quote(const std::string& s) {
        if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
        std::string q = "\"";
        for (char c : s) {
            if (c == '"') q += '"';
            q += c;
        }
        return q + "\"";
    }

    std::ofstream file_;
    std::ostream* out_ = nullptr;
};

}  // namespace mmrelay
