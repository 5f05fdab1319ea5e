#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace itc {

/// One typed value from a config file or a command-line override.
struct ConfigValue {
    enum class Kind { kString, kInteger, kReal, kBool, kList };

    Kind kind = Kind::kString;
    std::string text;  // raw text for strings; source spelling otherwise
    double number = 0.0;
    bool flag = false;
    std::vector<ConfigValue> items;

    bool is_number() const noexcept { return kind == Kind::kInteger || kind == Kind::kReal; }
    std::string describe() const;
};

using ConfigMap = std::map<std::string, ConfigValue>;

/// Parses a single value: "quoted", bare_word, 12, 1.5e-3, true/false,
/// [a, b, ...] or an inclusive integer range a..b (expanded to a list).
ConfigValue parse_config_value(std::string_view text);

/// Parses `key = value` lines; `#` starts a comment outside quotes.
/// Duplicate keys and malformed lines throw std::invalid_argument naming the line.
ConfigMap parse_config(std::string_view text, std::string_view source = "<config>");

ConfigMap load_config_file(const std::string& path);

// Typed accessors; each throws std::invalid_argument on a type mismatch.
std::string config_string(const ConfigValue& v, std::string_view key);
double config_real(const ConfigValue& v, std::string_view key);
long long config_integer(const ConfigValue& v, std::string_view key);
bool config_bool(const ConfigValue& v, std::string_view key);
std::vector<double> config_real_list(const ConfigValue& v, std::string_view key);
/// Accepts a scalar integer as a one-element list.
std::vector<long long> config_integer_list(const ConfigValue& v, std::string_view key);

}  // namespace itc
