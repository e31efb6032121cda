#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <unordered_map>
#include <vector>

namespace popanchor::csv {

// Parsed CSV file with a mandatory header row. Row order preserved;
// `line` maps each data row back to its 1-based line in the file.
struct Table {
    std::string path;
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
    std::vector<std::size_t> line;

    // Column index by name; SchemaError if absent.
    std::size_t column(const std::string& name) const;
    bool has_column(const std::string& name) const;
};

Table read_file(const std::filesystem::path& path);
Table read_string(std::string text, const std::string& display_name);

// Field accessors with schema errors naming file, line and 1-based column.
const std::string& field(const Table& t, std::size_t row, std::size_t col);
long long field_int(const Table& t, std::size_t row, std::size_t col);
double field_double(const Table& t, std::size_t row, std::size_t col);

// Minimal writer: quotes a field only when it contains ',', '"' or a newline.
// Always writes LF line endings.
class Writer {
public:
    explicit Writer(const std::filesystem::path& path);
    ~Writer();
    Writer(const Writer&) = delete;
    Writer& operator=(const Writer&) = delete;

    void row(const std::vector<std::string>& fields);
    void close();

private:
    std::string buf_;
    std::filesystem::path path_;
    bool closed_ = false;
};

std::string format_double(double v, int precision);

} // namespace popanchor::csv
