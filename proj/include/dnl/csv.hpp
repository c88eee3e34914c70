#pragma once

// Streaming RFC-4180 record reader. One record at a time, no buffering of the
// input beyond the current record.

#include <istream>
#include <streambuf>
#include <string>
#include <vector>

#include "dnl/common.hpp"

namespace dnl {

enum class ProfileErrorKind { EmptyInput, RaggedRow, EncodingError, MalformedQuoting };

inline std::string_view profile_error_code(ProfileErrorKind k) {
    switch (k) {
        case ProfileErrorKind::EmptyInput: return "EMPTY_INPUT";
        case ProfileErrorKind::RaggedRow: return "RAGGED_ROW";
        case ProfileErrorKind::EncodingError: return "ENCODING_ERROR";
        case ProfileErrorKind::MalformedQuoting: return "MALFORMED_QUOTING";
    }
    return "EMPTY_INPUT";
}

class ProfileError : public Error {
public:
    ProfileError(ProfileErrorKind kind, std::size_t line, const std::string& message,
                 std::size_t expected = 0, std::size_t got = 0)
        : Error(std::string(profile_error_code(kind)), message),
          kind_(kind), line_(line), expected_(expected), got_(got) {}

    ProfileErrorKind kind() const noexcept { return kind_; }
    std::size_t line() const noexcept { return line_; }
    std::size_t expected() const noexcept { return expected_; }
    std::size_t got() const noexcept { return got_; }

private:
    ProfileErrorKind kind_;
    std::size_t line_;
    std::size_t expected_;
    std::size_t got_;
};

inline bool is_valid_utf8(std::string_view s) {
    std::size_t i = 0;
    while (i < s.size()) {
        auto c = static_cast<unsigned char>(s[i]);
        std::size_t n;
        std::uint32_t cp;
        if (c < 0x80) { ++i; continue; }
        if ((c & 0xE0) == 0xC0) { n = 1; cp = c & 0x1F; }
        else if ((c & 0xF0) == 0xE0) { n = 2; cp = c & 0x0F; }
        else if ((c & 0xF8) == 0xF0) { n = 3; cp = c & 0x07; }
        else return false;
        if (i + n >= s.size()) return false;
        for (std::size_t k = 1; k <= n; ++k) {
            auto cc = static_cast<unsigned char>(s[i + k]);
            if ((cc & 0xC0) != 0x80) return false;
            cp = (cp << 6) | (cc & 0x3F);
        }
        // overlong forms, surrogates, out of range
        if ((n == 1 && cp < 0x80) || (n == 2 && cp < 0x800) || (n == 3 && cp < 0x10000) ||
            (cp >= 0xD800 && cp <= 0xDFFF) || cp > 0x10FFFF)
            return false;
        i += n + 1;
    }
    return true;
}

class CsvReader {
public:
    explicit CsvReader(std::istream& in) : buf_(in.rdbuf()) {
        // UTF-8 byte order mark
        if (buf_ && buf_->sgetc() == 0xEF) {
            buf_->sbumpc();
            if (buf_->sbumpc() != 0xBB || buf_->sbumpc() != 0xBF)
                throw ProfileError(ProfileErrorKind::EncodingError, 1, "line 1: invalid byte order mark");
        }
    }

    /// Reads the next record into `fields`. Returns false at end of input.
    bool next(std::vector<std::string>& fields) {
        fields.clear();
        if (!buf_ || buf_->sgetc() == EOF) return false;
        record_line_ = line_;
        std::string field;
        bool quoted = false;
        bool after_quote = false;
        for (;;) {
            int c = buf_->sbumpc();
            if (c == EOF) {
                if (quoted)
                    throw ProfileError(ProfileErrorKind::MalformedQuoting, record_line_,
                                       "line " + std::to_string(record_line_) + ": unterminated quoted field");
                push(fields, field);
                return true;
            }
            if (quoted) {
                if (c == '"') {
                    if (buf_->sgetc() == '"') {
                        buf_->sbumpc();
                        field.push_back('"');
                    } else {
                        quoted = false;
                        after_quote = true;
                    }
                } else {
                    if (c == '\n') ++line_;
                    field.push_back(static_cast<char>(c));
                }
                continue;
            }
            if (c == ',') {
                push(fields, field);
                field.clear();
                after_quote = false;
            } else if (c == '\n' || c == '\r') {
                if (c == '\r' && buf_->sgetc() == '\n') buf_->sbumpc();
                ++line_;
                push(fields, field);
                return true;
            } else if (after_quote) {
                throw ProfileError(ProfileErrorKind::MalformedQuoting, record_line_,
                                   "line " + std::to_string(record_line_) + ": text after closing quote");
            } else if (c == '"' && field.empty()) {
                quoted = true;
            } else if (c == '"') {
                throw ProfileError(ProfileErrorKind::MalformedQuoting, record_line_,
                                   "line " + std::to_string(record_line_) + ": quote inside unquoted field");
            } else {
                field.push_back(static_cast<char>(c));
            }
        }
    }

    /// Physical line (1-based) on which the last returned record started.
    std::size_t record_line() const noexcept { return record_line_; }

private:
    void push(std::vector<std::string>& fields, std::string& field) const {
        if (!is_valid_utf8(field))
            throw ProfileError(ProfileErrorKind::EncodingError, record_line_,
                               "line " + std::to_string(record_line_) + ": invalid UTF-8");
        fields.push_back(std::move(field));
        field = std::string();
    }

    std::streambuf* buf_;
    std::size_t line_ = 1;
    std::size_t record_line_ = 1;
};

}  // namespace dnl
