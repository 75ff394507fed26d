#pragma once

// Minimal CSV plumbing shared by every file format in the toolkit.
// Lines starting with '#' are metadata/comment lines and never carry data.

#include <array>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "fineval/error.hpp"

namespace fineval::csv {

inline std::string_view trim(std::string_view s) noexcept
{
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

inline std::vector<std::string_view> split(std::string_view line, char delim = ',')
{
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (;;) {
        const auto pos = line.find(delim, start);
        if (pos == std::string_view::npos) {
            out.push_back(trim(line.substr(start)));
            return out;
        }
        out.push_back(trim(line.substr(start, pos - start)));
        start = pos + 1;
    }
}

inline std::optional<double> parse_double(std::string_view s) noexcept
{
    s = trim(s);
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    if (s.empty()) return std::nullopt;
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
    return v;
}

inline std::optional<std::int64_t> parse_int(std::string_view s) noexcept
{
    s = trim(s);
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    if (s.empty()) return std::nullopt;
    std::int64_t v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
    return v;
}

/// Shortest representation that parses back to the identical double.
inline std::string format_double(double v)
{
    if (std::isnan(v)) return "NA";
    std::array<char, 64> buf{};
    const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), ptr);
}

inline std::string format_optional(const std::optional<double>& v)
{
    return v ? format_double(*v) : std::string("NA");
}

/// Document split into '#'-prefixed metadata lines and data lines.
struct Document {
    std::vector<std::string> comments;  // without the leading '#'
    std::vector<std::string> lines;     // non-empty data lines, header first
    std::vector<std::size_t> line_numbers;  // 1-based source line of each data line
};

inline Document parse_document(std::string_view text)
{
    Document doc;
    std::size_t lineno = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        auto end = text.find('\n', start);
        if (end == std::string_view::npos) end = text.size();
        ++lineno;
        const auto line = trim(text.substr(start, end - start));
        if (!line.empty()) {
            if (line.front() == '#') {
                doc.comments.emplace_back(line.substr(1));
            } else {
                doc.lines.emplace_back(line);
                doc.line_numbers.push_back(lineno);
            }
        }
        if (end == text.size()) break;
        start = end + 1;
    }
    return doc;
}

inline std::string read_file(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IngestError("cannot open '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void write_file(const std::filesystem::path& path, std::string_view content)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write '" + path.string() + "'");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw Error("write failed for '" + path.string() + "'");
}

/// Parses `key=value` metadata lines; anything else is ignored.
inline std::optional<std::string> metadata(const Document& doc, std::string_view key)
{
    for (const auto& c : doc.comments) {
        const auto body = trim(c);
        const auto eq = body.find('=');
        if (eq == std::string_view::npos) continue;
        if (trim(body.substr(0, eq)) == key) return std::string(trim(body.substr(eq + 1)));
    }
    return std::nullopt;
}

/// 64-bit FNV-1a, used for config and content fingerprints.
inline std::uint64_t fnv1a(std::string_view data, std::uint64_t h = 0xcbf29ce484222325ULL) noexcept
{
    for (const unsigned char ch : data) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    return h;
}

inline std::string hex64(std::uint64_t v)
{
    static constexpr char digits[] = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[static_cast<std::size_t>(i)] = digits[v & 0xF];
        v >>= 4;
    }
    return out;
}

} // namespace fineval::csv
