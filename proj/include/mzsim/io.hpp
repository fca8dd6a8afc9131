#pragma once

#include <charconv>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace mzsim {

using json = nlohmann::json;

inline constexpr const char* kToolVersion = "1.0.0";

/// Locale-independent formatting, 9 significant digits by default.
inline std::string format_number(double x, int precision = 9) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), x, std::chars_format::general,
                                   precision);
    if (res.ec != std::errc{}) throw std::runtime_error("format_number: conversion failed");
    return std::string(buf, res.ptr);
}

/// Writes via a temp file in the target directory, then renames into place.
inline void atomic_write(const std::filesystem::path& path, const std::string& contents) {
    namespace fs = std::filesystem;
    const fs::path dir = path.has_parent_path() ? path.parent_path() : fs::path(".");
    fs::create_directories(dir);
    const fs::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("atomic_write: cannot open " + tmp.string());
        out << contents;
        if (!out) throw std::runtime_error("atomic_write: short write to " + tmp.string());
    }
    fs::rename(tmp, path);
}

/// Simple CSV assembly: fixed column order, LF newlines, deterministic digits.
class CsvTable {
public:
    explicit CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

    void add_row(const std::vector<double>& row) {
        if (row.size() != header_.size())
            throw std::invalid_argument("CsvTable: row width mismatch");
        rows_.push_back(row);
    }

    std::string str() const {
        std::string out;
        for (size_t i = 0; i < header_.size(); ++i) {
            out += header_[i];
            out += (i + 1 < header_.size()) ? ',' : '\n';
        }
        for (const auto& row : rows_) {
            for (size_t i = 0; i < row.size(); ++i) {
                out += format_number(row[i]);
                out += (i + 1 < row.size()) ? ',' : '\n';
            }
        }
        return out;
    }

private:
    std::vector<std::string> header_;
    std::vector<std::vector<double>> rows_;
};

inline std::string utc_timestamp() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
#if defined(_WIN32)
    gmtime_s(&tm, &t);
#else
    gmtime_r(&t, &tm);
#endif
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%04d-%02d-%02dT%02d:%02d:%02dZ", tm.tm_year + 1900,
                  tm.tm_mon + 1, tm.tm_mday, tm.tm_hour, tm.tm_min, tm.tm_sec);
    return buf;
}

/// Reproducibility record written alongside every output file: the command,
/// the full parameter snapshot (defaults included) and the output paths.
struct RunManifest {
    std::string command;
    json config;
    std::vector<std::string> outputs;

    json to_json() const {
        return json{{"command", command},
                    {"tool_version", kToolVersion},
                    {"timestamp", utc_timestamp()},
                    {"config", config},
                    {"outputs", outputs}};
    }
};

inline void write_manifest(const std::filesystem::path& next_to, const RunManifest& manifest) {
    std::filesystem::path p = next_to;
    p += ".manifest.json";
    atomic_write(p, manifest.to_json().dump(2) + "\n");
}

/// Flat key = value configuration text with optional [section] headers;
/// keys are reported as section.key. '#' starts a comment.
inline std::vector<std::pair<std::string, std::string>> parse_config_text(
    const std::string& text) {
    std::vector<std::pair<std::string, std::string>> entries;
    std::string section;
    size_t lineno = 0, pos = 0;
    auto trim = [](std::string s) {
        const auto a = s.find_first_not_of(" \t\r");
        const auto b = s.find_last_not_of(" \t\r");
        return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };
    while (pos <= text.size()) {
        const size_t nl = text.find('\n', pos);
        std::string line = text.substr(pos, nl == std::string::npos ? nl : nl - pos);
        pos = nl == std::string::npos ? text.size() + 1 : nl + 1;
        ++lineno;
        const size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw std::invalid_argument("config line " + std::to_string(lineno) +
                                            ": unterminated section header");
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config line " + std::to_string(lineno) +
                                        ": expected key = value");
        std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty())
            throw std::invalid_argument("config line " + std::to_string(lineno) + ": empty key");
        if (!section.empty()) key = section + "." + key;
        entries.emplace_back(key, value);
    }
    return entries;
}

}  // namespace mzsim
