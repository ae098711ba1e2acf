#pragma once
// Result tables and their CSV / JSON renderings.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

namespace otto::cli {

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Empty cells stand for undefined values.
using Cell = std::variant<std::monostate, double, std::string>;
using Row = std::vector<Cell>;

struct Table {
    std::vector<std::string> columns;
    std::vector<Row> rows;
};

// 12 significant digits; non-finite values have no rendering.
inline std::string format_number(double x) {
    if (!std::isfinite(x)) return "";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

inline std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

inline std::string cell_text(const Cell& c) {
    if (const double* d = std::get_if<double>(&c)) return format_number(*d);
    if (const std::string* s = std::get_if<std::string>(&c)) return *s;
    return "";
}

inline std::string to_csv(const Table& t) {
    std::string out;
    for (std::size_t k = 0; k < t.columns.size(); ++k) out += (k ? "," : "") + csv_field(t.columns[k]);
    out += '\n';
    for (const Row& r : t.rows) {
        if (r.size() != t.columns.size()) throw std::logic_error("row width does not match the header");
        for (std::size_t k = 0; k < r.size(); ++k) out += (k ? "," : "") + csv_field(cell_text(r[k]));
        out += '\n';
    }
    return out;
}

inline std::string to_json_text(const Table& t) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const Row& r : t.rows) {
        if (r.size() != t.columns.size()) throw std::logic_error("row width does not match the header");
        nlohmann::ordered_json obj = nlohmann::ordered_json::object();
        for (std::size_t k = 0; k < r.size(); ++k) {
            auto& v = obj[t.columns[k]];
            if (const double* d = std::get_if<double>(&r[k])) {
                const std::string s = format_number(*d);
                v = s.empty() ? nlohmann::ordered_json(nullptr) : nlohmann::ordered_json(std::strtod(s.c_str(), nullptr));
            } else if (const std::string* s = std::get_if<std::string>(&r[k])) {
                v = s->empty() ? nlohmann::ordered_json(nullptr) : nlohmann::ordered_json(*s);
            } else {
                v = nullptr;
            }
        }
        arr.push_back(std::move(obj));
    }
    return arr.dump(2) + "\n";
}

inline std::string render(const Table& t, bool as_json) { return as_json ? to_json_text(t) : to_csv(t); }

inline void write_file(const std::string& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError("cannot open " + path + " for writing");
    f << text;
    f.flush();
    if (!f) throw IoError("write to " + path + " failed");
}

inline void write_stream(std::ostream& os, const std::string& text) {
    os << text;
    os.flush();
    if (!os) throw IoError("write to output stream failed");
}

} // namespace otto::cli
