#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <string>
#include <string_view>

#include "dnl/common.hpp"

namespace dnl::html {

inline std::string escape(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            case '\'': out += "&#39;"; break;
            default: out.push_back(c);
        }
    }
    return out;
}

/// Fragment identifier safe for both id="" and #href: [A-Za-z0-9_-], every
/// other byte hex-escaped as .XX so distinct inputs stay distinct.
inline std::string anchor(std::string_view prefix, std::initializer_list<std::string_view> parts) {
    static constexpr char kHex[] = "0123456789ABCDEF";
    std::string out(prefix);
    for (auto part : parts) {
        out.push_back('-');
        for (unsigned char c : part) {
            if (std::isalnum(c) || c == '_') {
                out.push_back(static_cast<char>(c));
            } else {
                out.push_back('.');
                out.push_back(kHex[c >> 4]);
                out.push_back(kHex[c & 0xf]);
            }
        }
    }
    return out;
}

/// Paragraphs separated by blank lines become <p> elements.
inline std::string paragraphs(std::string_view text, std::string_view css_class = {}) {
    std::string out, para;
    auto flush = [&] {
        if (is_blank(para)) { para.clear(); return; }
        out += css_class.empty() ? "<p>" : "<p class=\"" + std::string(css_class) + "\">";
        out += escape(para);
        out += "</p>\n";
        para.clear();
    };
    std::size_t pos = 0;
    while (pos <= text.size()) {
        auto nl = text.find('\n', pos);
        auto line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        if (is_blank(line)) flush();
        else {
            if (!para.empty()) para.push_back(' ');
            para += line;
        }
        if (nl == std::string_view::npos) break;
        pos = nl + 1;
    }
    flush();
    return out;
}

/// Relative path -> file contents.
using DocumentSet = std::map<std::string, std::string>;

inline void write_document_set(const std::filesystem::path& dir, const DocumentSet& docs) {
    namespace fs = std::filesystem;
    for (const auto& [rel, body] : docs) {
        fs::path p = dir / rel;
        std::error_code ec;
        fs::create_directories(p.parent_path(), ec);
        std::ofstream out(p, std::ios::binary | std::ios::trunc);
        if (!out || !out.write(body.data(), static_cast<std::streamsize>(body.size())))
            throw Error("IO_ERROR", "cannot write " + p.string());
    }
}

}  // namespace dnl::html
