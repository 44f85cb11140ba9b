#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "pas/errors.hpp"

namespace pas {

/// Column-oriented CSV writer. Every file starts with a comment block carrying
/// the reproducibility context (config hash, seed, tool version).
class CsvWriter {
public:
    explicit CsvWriter(const std::string& path) : out_(path) {
        if (!out_) throw Error("cannot open output file: " + path);
    }

    void comment(const std::string& key, const std::string& value) {
        out_ << "# " << key << ": " << value << "\n";
    }

    void header(const std::vector<std::string>& names) { line(names); }
    void row(const std::vector<std::string>& cells) { line(cells); }

    static std::string num(double v) {
        std::ostringstream os;
        os.precision(17);
        os << v;
        return os.str();
    }
    static std::string num(int v) { return std::to_string(v); }
    static std::string num(long v) { return std::to_string(v); }

private:
    void line(const std::vector<std::string>& cells) {
        for (size_t i = 0; i < cells.size(); ++i) {
            if (i) out_ << ",";
            out_ << cells[i];
        }
        out_ << "\n";
    }

    std::ofstream out_;
};

} // namespace pas
