#include "popanchor/csv.hpp"

#include "popanchor/error.hpp"

#include <algorithm>
#include <cerrno>
#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace popanchor::csv {

namespace {

// Splits one logical CSV record. Supports double-quoted fields with "" escapes.
std::vector<std::string> split_record(const std::string& line,
                                      const std::string& path,
                                      std::size_t line_no) {
    std::vector<std::string> out;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cur.push_back('"');
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cur.push_back(c);
            }
        } else if (c == '"') {
            if (!cur.empty())
                throw SchemaError(path, line_no, i + 1, "unexpected quote inside field");
            quoted = true;
        } else if (c == ',') {
            out.push_back(std::move(cur));
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    if (quoted)
        throw SchemaError(path, line_no, line.size(), "unterminated quoted field");
    out.push_back(std::move(cur));
    return out;
}

Table parse(std::istream& in, const std::string& display_name) {
    Table t;
    t.path = display_name;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() && t.header.empty()) continue;
        if (line.empty()) continue;
        auto fields = split_record(line, display_name, line_no);
        if (t.header.empty()) {
            t.header = std::move(fields);
        } else {
            if (fields.size() != t.header.size())
                throw SchemaError(display_name, line_no, 1,
                                  "expected " + std::to_string(t.header.size()) +
                                      " fields, got " + std::to_string(fields.size()));
            t.rows.push_back(std::move(fields));
            t.line.push_back(line_no);
        }
    }
    if (t.header.empty())
        throw SchemaError(display_name, 1, 1, "missing header row");
    return t;
}

} // namespace

std::size_t Table::column(const std::string& name) const {
    auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end())
        throw SchemaError(path, 1, 1, "missing required column '" + name + "'");
    return static_cast<std::size_t>(it - header.begin());
}

bool Table::has_column(const std::string& name) const {
    return std::find(header.begin(), header.end(), name) != header.end();
}

Table read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw ConfigError("cannot open input file: " + path.string());
    return parse(in, path.string());
}

Table read_string(std::string text, const std::string& display_name) {
    std::istringstream in(std::move(text));
    return parse(in, display_name);
}

const std::string& field(const Table& t, std::size_t row, std::size_t col) {
    return t.rows[row][col];
}

long long field_int(const Table& t, std::size_t row, std::size_t col) {
    const std::string& s = t.rows[row][col];
    long long v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size())
        throw SchemaError(t.path, t.line[row], col + 1,
                          "expected integer, got '" + s + "'");
    return v;
}

double field_double(const Table& t, std::size_t row, std::size_t col) {
    const std::string& s = t.rows[row][col];
    if (s.empty())
        throw SchemaError(t.path, t.line[row], col + 1, "expected number, got empty field");
    errno = 0;
    char* end = nullptr;
    double v = std::strtod(s.c_str(), &end);
    if (errno != 0 || end != s.c_str() + s.size())
        throw SchemaError(t.path, t.line[row], col + 1,
                          "expected number, got '" + s + "'");
    return v;
}

Writer::Writer(const std::filesystem::path& path) : path_(path) {}

Writer::~Writer() {
    try {
        close();
    } catch (...) {
        // destructor must not throw; an explicit close() surfaces errors
    }
}

void Writer::row(const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) buf_.push_back(',');
        const std::string& f = fields[i];
        bool needs_quote =
            f.find_first_of(",\"\n\r") != std::string::npos;
        if (needs_quote) {
            buf_.push_back('"');
            for (char c : f) {
                if (c == '"') buf_.push_back('"');
                buf_.push_back(c);
            }
            buf_.push_back('"');
        } else {
            buf_ += f;
        }
    }
    buf_.push_back('\n');
}

void Writer::close() {
    if (closed_) return;
    closed_ = true;
    std::ofstream out(path_, std::ios::binary);
    if (!out)
        throw ConfigError("cannot open output file: " + path_.string());
    out.write(buf_.data(), static_cast<std::streamsize>(buf_.size()));
    if (!out)
        throw ConfigError("failed writing output file: " + path_.string());
}

std::string format_double(double v, int precision) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", precision, v);
    return buf;
}

} // namespace popanchor::csv
