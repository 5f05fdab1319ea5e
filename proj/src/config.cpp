#include "itc/config.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace itc {
namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

bool parse_integer(std::string_view s, long long& out) {
    const char* first = s.data();
    const char* last = s.data() + s.size();
    if (first != last && *first == '+') ++first;
    const auto r = std::from_chars(first, last, out);
    return r.ec == std::errc() && r.ptr == last && first != last;
}

bool parse_real(std::string_view s, double& out) {
    const char* first = s.data();
    const char* last = s.data() + s.size();
    if (first != last && *first == '+') ++first;
    const auto r = std::from_chars(first, last, out);
    return r.ec == std::errc() && r.ptr == last && first != last && std::isfinite(out);
}

bool is_bare_word(std::string_view s) {
    if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s.front())) || s.front() == '_')) return false;
    for (char c : s) {
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.' || c == '/')) {
            return false;
        }
    }
    return true;
}

// Splits a list body on top-level commas, respecting quotes.
std::vector<std::string_view> split_items(std::string_view body) {
    std::vector<std::string_view> out;
    bool quoted = false;
    std::size_t start = 0;
    for (std::size_t p = 0; p < body.size(); ++p) {
        if (body[p] == '"') quoted = !quoted;
        if (body[p] == ',' && !quoted) {
            out.push_back(trim(body.substr(start, p - start)));
            start = p + 1;
        }
    }
    if (quoted) throw std::invalid_argument("unterminated string in list");
    const auto last = trim(body.substr(start));
    if (!last.empty() || !out.empty()) out.push_back(last);
    return out;
}

ConfigValue make_integer(long long v, std::string_view spelling) {
    ConfigValue c;
    c.kind = ConfigValue::Kind::kInteger;
    c.number = static_cast<double>(v);
    c.text = std::string(spelling);
    return c;
}

ConfigValue parse_scalar(std::string_view s) {
    ConfigValue v;
    if (s.size() >= 2 && s.front() == '"' && s.back() == '"') {
        v.kind = ConfigValue::Kind::kString;
        v.text = std::string(s.substr(1, s.size() - 2));
        if (v.text.find('"') != std::string::npos) throw std::invalid_argument("stray quote in string");
        return v;
    }
    long long i = 0;
    if (parse_integer(s, i)) return make_integer(i, s);
    double d = 0.0;
    if (parse_real(s, d)) {
        v.kind = ConfigValue::Kind::kReal;
        v.number = d;
        v.text = std::string(s);
        return v;
    }
    if (s == "true" || s == "false") {
        v.kind = ConfigValue::Kind::kBool;
        v.flag = s == "true";
        v.text = std::string(s);
        return v;
    }
    if (is_bare_word(s)) {
        v.kind = ConfigValue::Kind::kString;
        v.text = std::string(s);
        return v;
    }
    throw std::invalid_argument("cannot parse value '" + std::string(s) + "'");
}

}  // namespace

std::string ConfigValue::describe() const {
    switch (kind) {
        case Kind::kString: return "string";
        case Kind::kInteger: return "integer";
        case Kind::kReal: return "real";
        case Kind::kBool: return "boolean";
        case Kind::kList: return "list";
    }
    return "value";
}

ConfigValue parse_config_value(std::string_view text) {
    const auto s = trim(text);
    if (s.empty()) throw std::invalid_argument("empty value");

    if (s.front() == '[') {
        if (s.back() != ']') throw std::invalid_argument("list is missing ']'");
        ConfigValue v;
        v.kind = ConfigValue::Kind::kList;
        v.text = std::string(s);
        for (auto item : split_items(s.substr(1, s.size() - 2))) {
            if (item.empty()) throw std::invalid_argument("empty list item in " + std::string(s));
            auto parsed = parse_scalar(item);
            v.items.push_back(std::move(parsed));
        }
        return v;
    }

    const auto dots = s.find("..");
    if (dots != std::string_view::npos && s.front() != '"') {
        long long lo = 0;
        long long hi = 0;
        if (!parse_integer(trim(s.substr(0, dots)), lo) || !parse_integer(trim(s.substr(dots + 2)), hi)) {
            throw std::invalid_argument("range '" + std::string(s) + "' needs integer bounds");
        }
        if (hi < lo) throw std::invalid_argument("range '" + std::string(s) + "' is empty");
        if (hi - lo > 100000) throw std::invalid_argument("range '" + std::string(s) + "' is too long");
        ConfigValue v;
        v.kind = ConfigValue::Kind::kList;
        v.text = std::string(s);
        for (long long x = lo; x <= hi; ++x) v.items.push_back(make_integer(x, std::to_string(x)));
        return v;
    }
    return parse_scalar(s);
}

ConfigMap parse_config(std::string_view text, std::string_view source) {
    ConfigMap out;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto nl = text.find('\n', pos);
        std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++line_no;

        bool quoted = false;
        for (std::size_t p = 0; p < line.size(); ++p) {
            if (line[p] == '"') quoted = !quoted;
            if (line[p] == '#' && !quoted) {
                line = line.substr(0, p);
                break;
            }
        }
        line = trim(line);
        if (line.empty()) continue;

        const std::string where = std::string(source) + ":" + std::to_string(line_no) + ": ";
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) throw std::invalid_argument(where + "expected 'key = value'");
        const std::string key(trim(line.substr(0, eq)));
        if (!is_bare_word(key)) throw std::invalid_argument(where + "bad key '" + key + "'");
        if (out.count(key) != 0) throw std::invalid_argument(where + "duplicate key '" + key + "'");
        try {
            out.emplace(key, parse_config_value(line.substr(eq + 1)));
        } catch (const std::invalid_argument& e) {
            throw std::invalid_argument(where + e.what());
        }
    }
    return out;
}

ConfigMap load_config_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::invalid_argument("cannot open config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str(), path);
}

std::string config_string(const ConfigValue& v, std::string_view key) {
    if (v.kind != ConfigValue::Kind::kString) {
        throw std::invalid_argument(std::string(key) + ": expected a string, got " + v.describe());
    }
    return v.text;
}

double config_real(const ConfigValue& v, std::string_view key) {
    if (!v.is_number()) throw std::invalid_argument(std::string(key) + ": expected a number, got " + v.describe());
    return v.number;
}

long long config_integer(const ConfigValue& v, std::string_view key) {
    if (v.kind != ConfigValue::Kind::kInteger) {
        throw std::invalid_argument(std::string(key) + ": expected an integer, got " + v.describe());
    }
    long long out = 0;
    parse_integer(v.text, out);
    return out;
}

bool config_bool(const ConfigValue& v, std::string_view key) {
    if (v.kind != ConfigValue::Kind::kBool) {
        throw std::invalid_argument(std::string(key) + ": expected true or false, got " + v.describe());
    }
    return v.flag;
}

std::vector<double> config_real_list(const ConfigValue& v, std::string_view key) {
    if (v.kind != ConfigValue::Kind::kList) {
        return {config_real(v, key)};
    }
    std::vector<double> out;
    for (const auto& item : v.items) out.push_back(config_real(item, key));
    return out;
}

std::vector<long long> config_integer_list(const ConfigValue& v, std::string_view key) {
    if (v.kind != ConfigValue::Kind::kList) return {config_integer(v, key)};
    std::vector<long long> out;
    for (const auto& item : v.items) out.push_back(config_integer(item, key));
    return out;
}

}  // namespace itc
