#pragma once

// Directory-backed label store. One canonical `<id>.label.json` file per label,
// indexed in memory. Readers take an immutable snapshot of the index; writers
// build a new index and swap it in, so a reader never sees a partial update.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <mutex>
#include <sstream>
#include <string>
#include <vector>

#include "dnl/label.hpp"
#include "dnl/label_io.hpp"
#include "dnl/validate.hpp"

namespace dnl {

inline std::string read_file(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw Error("IO_ERROR", "cannot read " + p.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void write_file_atomic(const std::filesystem::path& p, std::string_view bytes) {
    auto tmp = p;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out || !out.write(bytes.data(), static_cast<std::streamsize>(bytes.size())))
            throw Error("IO_ERROR", "cannot write " + tmp.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, p, ec);
    if (ec) throw Error("IO_ERROR", "cannot rename " + tmp.string() + ": " + ec.message());
}

/// File name for a label id; bytes outside [A-Za-z0-9_.-] are %XX-escaped.
inline std::string label_file_name(std::string_view label_id) {
    static constexpr char kHex[] = "0123456789ABCDEF";
    std::string out;
    for (unsigned char c : label_id) {
        if (std::isalnum(c) || c == '_' || c == '-' || (c == '.' && !out.empty())) {
            out.push_back(static_cast<char>(c));
        } else {
            out.push_back('%');
            out.push_back(kHex[c >> 4]);
            out.push_back(kHex[c & 0xf]);
        }
    }
    return out + ".label.json";
}

class LabelStore {
public:
    struct Entry {
        Label label;
        std::string canonical;
    };
    using Index = std::map<std::string, std::shared_ptr<const Entry>>;

    explicit LabelStore(std::filesystem::path dir, std::ostream& log = std::cerr)
        : dir_(std::move(dir)), log_(log) {
        reload();
    }

    const std::filesystem::path& directory() const noexcept { return dir_; }

    /// Rescans the directory. Invalid or colliding files are logged and skipped.
    void reload() {
        namespace fs = std::filesystem;
        std::error_code ec;
        if (!fs::is_directory(dir_, ec)) throw Error("IO_ERROR", "store directory " + dir_.string() + " is not readable");
        std::vector<fs::path> files;
        for (const auto& e : fs::directory_iterator(dir_)) {
            auto name = e.path().filename().string();
            if (e.is_regular_file() && name.ends_with(".label.json")) files.push_back(e.path());
        }
        std::sort(files.begin(), files.end());

        std::lock_guard write_lock(write_mu_);
        auto next = std::make_shared<Index>();
        std::vector<std::string> skipped;
        for (const auto& f : files) {
            try {
                auto label = parse_label(read_file(f));
                auto report = validate_label(label);
                if (!report.passed()) throw ValidationFailed(std::move(report));
                if (next->contains(label.label_id)) throw Error("DUPLICATE_ID", "label id '" + label.label_id + "' already loaded");
                auto canonical = canonical_dump(to_json(label));
                auto id = label.label_id;
                next->emplace(std::move(id), std::make_shared<const Entry>(Entry{std::move(label), std::move(canonical)}));
            } catch (const Error& e) {
                log_ << "dnl: skipping " << f.string() << ": " << e.code() << ": " << e.what() << "\n";
                skipped.push_back(f.string());
            }
        }
        publish(std::move(next));
        std::lock_guard lock(read_mu_);
        skipped_ = std::move(skipped);
    }

    std::shared_ptr<const Index> snapshot() const {
        std::lock_guard lock(read_mu_);
        return index_;
    }

    std::shared_ptr<const Entry> find(const std::string& id) const {
        auto idx = snapshot();
        auto it = idx->find(id);
        return it == idx->end() ? nullptr : it->second;
    }

    std::vector<std::string> skipped() const {
        std::lock_guard lock(read_mu_);
        return skipped_;
    }

    /// Parses, validates and persists a label document; returns its id.
    /// Throws ParseError, ValidationFailed, or Error("DUPLICATE_ID").
    std::string submit(std::string_view body) {
        auto label = parse_label(body);
        auto report = validate_label(label);
        if (!report.passed()) throw ValidationFailed(std::move(report));
        auto canonical = canonical_dump(to_json(label));

        std::lock_guard write_lock(write_mu_);
        auto current = snapshot();
        if (current->contains(label.label_id))
            throw Error("DUPLICATE_ID", "label id '" + label.label_id + "' already exists");
        write_file_atomic(dir_ / label_file_name(label.label_id), canonical);
        auto next = std::make_shared<Index>(*current);
        auto id = label.label_id;
        next->emplace(id, std::make_shared<const Entry>(Entry{std::move(label), std::move(canonical)}));
        publish(std::move(next));
        return id;
    }

private:
    void publish(std::shared_ptr<const Index> next) {
        std::lock_guard lock(read_mu_);
        index_ = std::move(next);
    }

    std::filesystem::path dir_;
    std::ostream& log_;
    mutable std::mutex read_mu_;  // guards index_ and skipped_
    std::mutex write_mu_;         // serializes writers
    std::shared_ptr<const Index> index_ = std::make_shared<Index>();
    std::vector<std::string> skipped_;
};

/// Summary list served at GET /labels, ordered by label id.
inline json store_listing_json(const LabelStore::Index& index) {
    json a = json::array();
    for (const auto& [id, e] : index)
        a.push_back({{"label_id", id},
                     {"dataset_name", e->label.dataset_name},
                     {"date_produced", format_date(e->label.date_produced)}});
    return a;
}

}  // namespace dnl
