#include "hopmem/config.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "hopmem/error.hpp"

namespace hopmem {

namespace {

std::string trim(const std::string& s) {
    const std::size_t a = s.find_first_not_of(" \t");
    if (a == std::string::npos) {
        return {};
    }
    const std::size_t b = s.find_last_not_of(" \t");
    return s.substr(a, b - a + 1);
}

} // namespace

KeyValueConfig KeyValueConfig::parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw IngestError(0, "cannot open config file '" + path + "'");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_text(buf.str());
}

KeyValueConfig KeyValueConfig::parse_text(const std::string& text) {
    KeyValueConfig cfg;
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) {
            line.resize(hash);
        }
        const std::string stripped = trim(line);
        if (stripped.empty()) {
            continue;
        }
        const std::size_t eq = stripped.find('=');
        if (eq == std::string::npos) {
            throw IngestError(lineno, "expected 'key = value'");
        }
        const std::string key = trim(stripped.substr(0, eq));
        const std::string value = trim(stripped.substr(eq + 1));
        if (key.empty()) {
            throw IngestError(lineno, "empty key");
        }
        cfg.values_[key] = value;
    }
    return cfg;
}

std::optional<std::string> KeyValueConfig::get_string(const std::string& key) const {
    const auto it = values_.find(key);
    if (it == values_.end()) {
        return std::nullopt;
    }
    return it->second;
}

std::optional<double> KeyValueConfig::get_double(const std::string& key) const {
    const auto s = get_string(key);
    if (!s) {
        return std::nullopt;
    }
    try {
        std::size_t used = 0;
        const double v = std::stod(*s, &used);
        if (used != s->size()) {
            throw std::invalid_argument("trailing");
        }
        return v;
    } catch (const std::exception&) {
        throw IngestError(0, "config key '" + key + "': expected a number, got '" + *s + "'");
    }
}

std::optional<std::int64_t> KeyValueConfig::get_int(const std::string& key) const {
    const auto v = get_double(key);
    if (!v) {
        return std::nullopt;
    }
    return static_cast<std::int64_t>(*v);
}

std::optional<std::uint64_t> KeyValueConfig::get_uint(const std::string& key) const {
    const auto s = get_string(key);
    if (!s) {
        return std::nullopt;
    }
    try {
        std::size_t used = 0;
        const std::uint64_t v = std::stoull(*s, &used);
        if (used != s->size()) {
            throw std::invalid_argument("trailing");
        }
        return v;
    } catch (const std::exception&) {
        throw IngestError(0, "config key '" + key + "': expected an unsigned integer, got '" + *s +
                                 "'");
    }
}

std::optional<bool> KeyValueConfig::get_bool(const std::string& key) const {
    const auto s = get_string(key);
    if (!s) {
        return std::nullopt;
    }
    if (*s == "true" || *s == "1" || *s == "yes") {
        return true;
    }
    if (*s == "false" || *s == "0" || *s == "no") {
        return false;
    }
    throw IngestError(0, "config key '" + key + "': expected a boolean, got '" + *s + "'");
}

std::optional<std::vector<std::string>> KeyValueConfig::get_string_list(
    const std::string& key) const {
    const auto s = get_string(key);
    if (!s) {
        return std::nullopt;
    }
    std::vector<std::string> out;
    std::istringstream in(*s);
    std::string cell;
    while (std::getline(in, cell, ',')) {
        out.push_back(trim(cell));
    }
    if (out.empty()) {
        out.push_back("");
    }
    return out;
}

std::optional<std::vector<double>> KeyValueConfig::get_double_list(const std::string& key) const {
    const auto items = get_string_list(key);
    if (!items) {
        return std::nullopt;
    }
    std::vector<double> out;
    for (const std::string& item : *items) {
        try {
            out.push_back(std::stod(item));
        } catch (const std::exception&) {
            throw IngestError(0, "config key '" + key + "': expected numbers, got '" + item + "'");
        }
    }
    return out;
}

} // namespace hopmem
