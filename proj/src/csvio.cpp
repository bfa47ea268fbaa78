#include "dwellscope/csvio.hpp"

#include <cmath>
#include <cstring>

#include "dwellscope/error.hpp"

namespace dwellscope {

namespace {
constexpr std::size_t kWriteBuf = 4u << 20;
constexpr std::size_t kReadBuf = 8u << 20;
} // namespace

BufferedWriter::BufferedWriter(const std::filesystem::path& path) : path_(path) {
    file_ = std::fopen(path.c_str(), "wb");
    if (!file_)
        throw Error(ErrorCode::io_error, "cannot open for writing: " + path.string());
    buf_.resize(kWriteBuf);
}

BufferedWriter::~BufferedWriter() {
    if (file_) {
        std::fwrite(buf_.data(), 1, pos_, file_);
        std::fclose(file_);
    }
}

void BufferedWriter::flush() {
    if (pos_ > 0) {
        if (std::fwrite(buf_.data(), 1, pos_, file_) != pos_)
            throw Error(ErrorCode::io_error, "short write to " + path_.string());
        pos_ = 0;
    }
}

void BufferedWriter::put(char c) {
    if (pos_ == buf_.size()) flush();
    buf_[pos_++] = c;
}

void BufferedWriter::write(std::string_view s) {
    if (s.size() > buf_.size() - pos_) flush();
    if (s.size() > buf_.size()) {
        if (std::fwrite(s.data(), 1, s.size(), file_) != s.size())
            throw Error(ErrorCode::io_error, "short write to " + path_.string());
        return;
    }
    std::memcpy(buf_.data() + pos_, s.data(), s.size());
    pos_ += s.size();
}

void BufferedWriter::write_int(std::int64_t v) {
    char tmp[24];
    const auto [ptr, ec] = std::to_chars(tmp, tmp + sizeof(tmp), v);
    write(std::string_view(tmp, static_cast<std::size_t>(ptr - tmp)));
}

void BufferedWriter::write_uint(std::uint64_t v) {
    char tmp[24];
    const auto [ptr, ec] = std::to_chars(tmp, tmp + sizeof(tmp), v);
    write(std::string_view(tmp, static_cast<std::size_t>(ptr - tmp)));
}

void BufferedWriter::write_fixed(double v, int precision) {
    char tmp[64];
    const int n = std::snprintf(tmp, sizeof(tmp), "%.*f", precision, v);
    write(std::string_view(tmp, static_cast<std::size_t>(n)));
}

void BufferedWriter::close() {
    if (!file_) return;
    flush();
    if (std::fclose(file_) != 0) {
        file_ = nullptr;
        throw Error(ErrorCode::io_error, "close failed for " + path_.string());
    }
    file_ = nullptr;
}

LineReader::LineReader(const std::filesystem::path& path) {
    file_ = std::fopen(path.c_str(), "rb");
    if (!file_)
        throw Error(ErrorCode::io_error, "cannot open for reading: " + path.string());
    buf_.resize(kReadBuf);
}

LineReader::~LineReader() {
    if (file_) std::fclose(file_);
}

bool LineReader::refill() {
    if (eof_) return false;
    const std::size_t n = std::fread(buf_.data(), 1, buf_.size(), file_);
    pos_ = 0;
    end_ = n;
    if (n < buf_.size()) eof_ = true;
    return n > 0;
}

bool LineReader::next(std::string_view& line) {
    carry_.clear();
    while (true) {
        if (pos_ >= end_) {
            if (!refill()) {
                if (!carry_.empty()) {
                    if (carry_.back() == '\r') carry_.pop_back();
                    line = carry_;
                    return true;
                }
                return false;
            }
        }
        const char* nl = static_cast<const char*>(
            std::memchr(buf_.data() + pos_, '\n', end_ - pos_));
        if (nl) {
            const std::size_t len = static_cast<std::size_t>(nl - (buf_.data() + pos_));
            if (carry_.empty()) {
                line = std::string_view(buf_.data() + pos_, len);
                if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
                pos_ += len + 1;
                return true;
            }
            carry_.append(buf_.data() + pos_, len);
            pos_ += len + 1;
            if (!carry_.empty() && carry_.back() == '\r') carry_.pop_back();
            line = carry_;
            return true;
        }
        carry_.append(buf_.data() + pos_, end_ - pos_);
        pos_ = end_;
    }
}

std::optional<std::int64_t> parse_i64(std::string_view s) {
    if (s.empty()) return std::nullopt;
    std::int64_t v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
    return v;
}

std::optional<double> parse_f64(std::string_view s) {
    if (s.empty()) return std::nullopt;
    double v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
    return v;
}

} // namespace dwellscope
