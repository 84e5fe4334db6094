#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace vbank {

/// Shortest decimal text that parses back to the same double.
std::string format_double(double v);
/// Fixed-point text with `digits` decimals.
std::string format_fixed(double v, int digits);
/// Strict decimal parse; throws ConfigError naming `what` on failure.
double parse_double(std::string_view text, std::string_view what = "value");
long parse_long(std::string_view text, std::string_view what = "value");
std::vector<double> parse_double_list(std::string_view text, std::string_view what = "list");

/// Flat `key=value` document. Blank lines and `#` comments are ignored;
/// later duplicates override earlier ones.
class KeyValueFile {
public:
    KeyValueFile() = default;
    explicit KeyValueFile(std::map<std::string, std::string> entries) : entries_(std::move(entries)) {}

    static KeyValueFile parse(std::istream& in);
    static KeyValueFile load(const std::filesystem::path& path);
    void write(std::ostream& out) const;
    void save(const std::filesystem::path& path) const;

    std::optional<std::string> get(const std::string& key) const;
    std::string get_or(const std::string& key, std::string fallback) const;
    void set(const std::string& key, std::string value) { entries_[key] = std::move(value); }
    bool contains(const std::string& key) const { return entries_.count(key) != 0; }
    const std::map<std::string, std::string>& entries() const { return entries_; }

    /// Keys not in `known`; used to reject typos.
    std::vector<std::string> unknown_keys(const std::vector<std::string_view>& known) const;

private:
    std::map<std::string, std::string> entries_;
};

/// FNV-1a 64-bit, hex encoded. Identifies a configuration in provenance records.
std::string digest_hex(std::string_view text);

}  // namespace vbank
