#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace hopmem {

// Flat `key = value` configuration with '#' comments. Lookups are typed;
// resolution order at the CLI is flag > config file > built-in default.
class KeyValueConfig {
public:
    KeyValueConfig() = default;

    static KeyValueConfig parse_file(const std::string& path);
    static KeyValueConfig parse_text(const std::string& text);

    bool has(const std::string& key) const { return values_.count(key) > 0; }

    std::optional<std::string> get_string(const std::string& key) const;
    std::optional<double> get_double(const std::string& key) const;
    std::optional<std::int64_t> get_int(const std::string& key) const;
    std::optional<std::uint64_t> get_uint(const std::string& key) const;
    std::optional<bool> get_bool(const std::string& key) const;
    std::optional<std::vector<double>> get_double_list(const std::string& key) const;
    std::optional<std::vector<std::string>> get_string_list(const std::string& key) const;

private:
    std::map<std::string, std::string> values_;
};

} // namespace hopmem
