#include "vbank/config.hpp"

#include "vbank/errors.hpp"

#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>

namespace vbank {
namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

}  // namespace

std::string format_double(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    if (ec != std::errc{}) throw ConfigError("cannot format number");
    return std::string(buf, ptr);
}

std::string format_fixed(double v, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

double parse_double(std::string_view text, std::string_view what) {
    text = trim(text);
    if (!text.empty() && text.front() == '+') text.remove_prefix(1);
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size() || !std::isfinite(v))
        throw ConfigError("invalid number for " + std::string(what) + ": '" + std::string(text) + "'");
    return v;
}

long parse_long(std::string_view text, std::string_view what) {
    text = trim(text);
    long v = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size())
        throw ConfigError("invalid integer for " + std::string(what) + ": '" + std::string(text) + "'");
    return v;
}

std::vector<double> parse_double_list(std::string_view text, std::string_view what) {
    std::vector<double> out;
    while (true) {
        auto comma = text.find(',');
        out.push_back(parse_double(text.substr(0, comma), what));
        if (comma == std::string_view::npos) break;
        text.remove_prefix(comma + 1);
    }
    return out;
}

KeyValueFile KeyValueFile::parse(std::istream& in) {
    KeyValueFile kv;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        auto s = trim(line);
        if (s.empty() || s.front() == '#') continue;
        auto eq = s.find('=');
        if (eq == std::string_view::npos || trim(s.substr(0, eq)).empty())
            throw ConfigError("line " + std::to_string(line_no) + ": expected key=value");
        kv.entries_[std::string(trim(s.substr(0, eq)))] = std::string(trim(s.substr(eq + 1)));
    }
    return kv;
}

KeyValueFile KeyValueFile::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    return parse(in);
}

void KeyValueFile::write(std::ostream& out) const {
    for (const auto& [k, v] : entries_) out << k << '=' << v << '\n';
}

void KeyValueFile::save(const std::filesystem::path& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());
    write(out);
    if (!out) throw IoError("write failed for " + path.string());
}

std::optional<std::string> KeyValueFile::get(const std::string& key) const {
    auto it = entries_.find(key);
    if (it == entries_.end()) return std::nullopt;
    return it->second;
}

std::string KeyValueFile::get_or(const std::string& key, std::string fallback) const {
    auto v = get(key);
    return v ? *v : std::move(fallback);
}

std::vector<std::string> KeyValueFile::unknown_keys(const std::vector<std::string_view>& known) const {
    std::vector<std::string> out;
    for (const auto& [k, v] : entries_) {
        bool found = false;
        for (auto kk : known) found = found || kk == k;
        if (!found) out.push_back(k);
    }
    return out;
}

std::string digest_hex(std::string_view text) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace vbank
