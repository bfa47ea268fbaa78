#pragma once

#include <array>
#include <charconv>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace dwellscope {

/// fwrite-backed writer with an explicit buffer; std::ostream per-field
/// formatting is too slow for multi-million-line files.
class BufferedWriter {
public:
    explicit BufferedWriter(const std::filesystem::path& path);
    ~BufferedWriter();
    BufferedWriter(const BufferedWriter&) = delete;
    BufferedWriter& operator=(const BufferedWriter&) = delete;

    void put(char c);
    void write(std::string_view s);
    void write_int(std::int64_t v);
    void write_uint(std::uint64_t v);
    /// Fixed-point with `precision` digits after the point.
    void write_fixed(double v, int precision);
    void newline() { put('\n'); }
    void close();

private:
    void flush();

    std::FILE* file_ = nullptr;
    std::vector<char> buf_;
    std::size_t pos_ = 0;
    std::filesystem::path path_;
};

/// Chunked line reader; yields views valid until the next call.
class LineReader {
public:
    explicit LineReader(const std::filesystem::path& path);
    ~LineReader();
    LineReader(const LineReader&) = delete;
    LineReader& operator=(const LineReader&) = delete;

    /// False at EOF. Strips trailing '\r'.
    bool next(std::string_view& line);

private:
    bool refill();

    std::FILE* file_ = nullptr;
    std::vector<char> buf_;
    std::string carry_;
    std::size_t pos_ = 0;
    std::size_t end_ = 0;
    bool eof_ = false;
};

/// Splits `line` into exactly `out.size()` comma-separated fields.
/// Returns false if the field count differs.
template <std::size_t N>
bool split_fields(std::string_view line, std::array<std::string_view, N>& out) {
    std::size_t field = 0;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= line.size(); ++i) {
        if (i == line.size() || line[i] == ',') {
            if (field >= N) return false;
            out[field++] = line.substr(start, i - start);
            start = i + 1;
        }
    }
    return field == N;
}

std::optional<std::int64_t> parse_i64(std::string_view s);
std::optional<double> parse_f64(std::string_view s);

} // namespace dwellscope
