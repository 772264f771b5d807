#pragma once

// Minimal TOML subset: [sections], key = value with strings, integers,
// floats, booleans and single-line arrays of scalars. Enough for a flat
// declarative config file.

#include <cctype>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "cmom/errors.hpp"

namespace cmom::toml {

struct Value {
    enum class Type { String, Integer, Float, Boolean, Array };
    Type type = Type::String;
    std::string text;
    long long integer = 0;
    double number = 0.0;
    bool boolean = false;
    std::vector<Value> items;

    [[nodiscard]] double as_number() const {
        if (type == Type::Float) return number;
        if (type == Type::Integer) return static_cast<double>(integer);
        throw ConfigError("expected a number, found '" + text + "'");
    }
};

class Table {
  public:
    void set(const std::string& section, const std::string& key, Value value) {
        values_[section + "." + key] = std::move(value);
    }

    [[nodiscard]] bool has(const std::string& section, const std::string& key) const {
        return values_.count(section + "." + key) > 0;
    }

    [[nodiscard]] const Value& get(const std::string& section, const std::string& key) const {
        auto it = values_.find(section + "." + key);
        if (it == values_.end()) throw ConfigError("missing config key " + section + "." + key);
        return it->second;
    }

    [[nodiscard]] std::string get_string(const std::string& section, const std::string& key,
                                         const std::string& fallback) const {
        if (!has(section, key)) return fallback;
        const Value& v = get(section, key);
        if (v.type != Value::Type::String) {
            throw ConfigError(section + "." + key + " must be a string");
        }
        return v.text;
    }

    [[nodiscard]] double get_number(const std::string& section, const std::string& key,
                                    double fallback) const {
        if (!has(section, key)) return fallback;
        return get(section, key).as_number();
    }

    [[nodiscard]] long long get_integer(const std::string& section, const std::string& key,
                                        long long fallback) const {
        if (!has(section, key)) return fallback;
        const Value& v = get(section, key);
        if (v.type != Value::Type::Integer) {
            throw ConfigError(section + "." + key + " must be an integer");
        }
        return v.integer;
    }

    [[nodiscard]] bool get_boolean(const std::string& section, const std::string& key,
                                   bool fallback) const {
        if (!has(section, key)) return fallback;
        const Value& v = get(section, key);
        if (v.type != Value::Type::Boolean) {
            throw ConfigError(section + "." + key + " must be a boolean");
        }
        return v.boolean;
    }

    [[nodiscard]] std::vector<std::string> get_string_array(const std::string& section,
                                                            const std::string& key) const {
        if (!has(section, key)) return {};
        const Value& v = get(section, key);
        if (v.type == Value::Type::String) return {v.text};
        if (v.type != Value::Type::Array) {
            throw ConfigError(section + "." + key + " must be an array of strings");
        }
        std::vector<std::string> out;
        for (const auto& item : v.items) {
            if (item.type != Value::Type::String) {
                throw ConfigError(section + "." + key + " must contain only strings");
            }
            out.push_back(item.text);
        }
        return out;
    }

  private:
    std::map<std::string, Value> values_;
};

namespace detail {

inline std::string_view strip(std::string_view s) {
    size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

inline Value parse_scalar(std::string_view raw, int line) {
    Value v;
    raw = strip(raw);
    if (raw.empty()) throw ConfigError("empty value at line " + std::to_string(line));
    if (raw.front() == '"') {
        if (raw.size() < 2 || raw.back() != '"') {
            throw ConfigError("unterminated string at line " + std::to_string(line));
        }
        v.type = Value::Type::String;
        for (size_t i = 1; i + 1 < raw.size(); ++i) {
            if (raw[i] == '\\' && i + 2 < raw.size()) {
                char next = raw[i + 1];
                if (next == 'n') v.text.push_back('\n');
                else if (next == 't') v.text.push_back('\t');
                else v.text.push_back(next);
                ++i;
            } else {
                v.text.push_back(raw[i]);
            }
        }
        return v;
    }
    if (raw == "true" || raw == "false") {
        v.type = Value::Type::Boolean;
        v.boolean = raw == "true";
        v.text = raw;
        return v;
    }
    std::string number(raw);
    try {
        size_t used = 0;
        if (number.find('.') == std::string::npos && number.find('e') == std::string::npos &&
            number.find('E') == std::string::npos) {
            v.type = Value::Type::Integer;
            v.integer = std::stoll(number, &used);
        } else {
            v.type = Value::Type::Float;
            v.number = std::stod(number, &used);
        }
        if (used != number.size()) throw std::invalid_argument(number);
    } catch (const std::exception&) {
        throw ConfigError("cannot parse value '" + number + "' at line " + std::to_string(line));
    }
    v.text = number;
    return v;
}

inline Value parse_value(std::string_view raw, int line) {
    raw = strip(raw);
    if (!raw.empty() && raw.front() == '[') {
        if (raw.back() != ']') {
            throw ConfigError("unterminated array at line " + std::to_string(line));
        }
        Value v;
        v.type = Value::Type::Array;
        std::string_view inner = raw.substr(1, raw.size() - 2);
        size_t pos = 0;
        bool in_string = false;
        size_t start = 0;
        for (pos = 0; pos <= inner.size(); ++pos) {
            if (pos < inner.size() && inner[pos] == '"') in_string = !in_string;
            if (pos == inner.size() || (inner[pos] == ',' && !in_string)) {
                auto piece = strip(inner.substr(start, pos - start));
                if (!piece.empty()) v.items.push_back(parse_scalar(piece, line));
                start = pos + 1;
            }
        }
        return v;
    }
    return parse_scalar(raw, line);
}

} // namespace detail

inline Table parse(std::string_view text) {
    Table table;
    std::string section;
    int line_no = 0;
    size_t pos = 0;
    while (pos <= text.size()) {
        size_t end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        auto line = detail::strip(text.substr(pos, end - pos));
        pos = end + 1;
        ++line_no;
        if (line.empty() || line.front() == '#') {
            if (pos > text.size()) break;
            continue;
        }
        if (line.front() == '[') {
            if (line.back() != ']') {
                throw ConfigError("malformed section header at line " + std::to_string(line_no));
            }
            section = std::string(detail::strip(line.substr(1, line.size() - 2)));
            continue;
        }
        size_t eq = std::string_view::npos;
        bool in_string = false;
        for (size_t i = 0; i < line.size(); ++i) {
            if (line[i] == '"') in_string = !in_string;
            if (line[i] == '=' && !in_string) {
                eq = i;
                break;
            }
        }
        if (eq == std::string_view::npos) {
            throw ConfigError("expected key = value at line " + std::to_string(line_no));
        }
        std::string key(detail::strip(line.substr(0, eq)));
        // Trailing comments only apply outside strings and arrays of strings.
        std::string_view rest = line.substr(eq + 1);
        std::string cleaned;
        in_string = false;
        for (char c : rest) {
            if (c == '"') in_string = !in_string;
            if (c == '#' && !in_string) break;
            cleaned.push_back(c);
        }
        table.set(section, key, detail::parse_value(cleaned, line_no));
        if (pos > text.size()) break;
    }
    return table;
}

} // namespace cmom::toml
