#pragma once

// Flat key = value text with optional [section] headers. Keys inside a
// section are stored as "section.key"; dotted keys may also be written
// directly. '#' starts a comment. Values are kept as trimmed strings.

#include <charconv>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace tripartite {

class config_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace kv {

inline std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos)
        return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(b, e - b + 1));
}

inline std::vector<std::string> split(std::string_view s, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = s.find(sep, start);
        out.push_back(trim(s.substr(start, pos == std::string_view::npos ? s.npos : pos - start)));
        if (pos == std::string_view::npos)
            break;
        start = pos + 1;
    }
    return out;
}

inline double parse_double(std::string_view text, const std::string& key) {
    const std::string t = trim(text);
    double v = 0.0;
    const auto* first = t.data();
    const auto* last = t.data() + t.size();
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc{} || ptr != last || t.empty())
        throw config_error("invalid number for '" + key + "': '" + t + "'");
    return v;
}

class Document {
public:
    static Document parse(std::istream& in, const std::string& origin = "<input>") {
        Document doc;
        std::string line, section;
        int lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            if (auto hash = line.find('#'); hash != std::string::npos)
                line.erase(hash);
            const std::string t = trim(line);
            if (t.empty())
                continue;
            if (t.front() == '[') {
                if (t.back() != ']')
                    throw config_error(origin + ":" + std::to_string(lineno) + ": unterminated section header");
                section = trim(std::string_view(t).substr(1, t.size() - 2));
                continue;
            }
            const auto eq = t.find('=');
            if (eq == std::string::npos)
                throw config_error(origin + ":" + std::to_string(lineno) + ": expected key = value");
            std::string key = trim(std::string_view(t).substr(0, eq));
            if (key.empty())
                throw config_error(origin + ":" + std::to_string(lineno) + ": empty key");
            if (!section.empty())
                key = section + "." + key;
            std::string value = trim(std::string_view(t).substr(eq + 1));
            if (value.size() >= 2 && value.front() == '"' && value.back() == '"')
                value = value.substr(1, value.size() - 2);
            if (doc.values_.count(key))
                throw config_error(origin + ":" + std::to_string(lineno) + ": duplicate key '" + key + "'");
            doc.values_[key] = value;
        }
        return doc;
    }

    static Document parse_string(const std::string& text) {
        std::istringstream in(text);
        return parse(in);
    }

    static Document load(const std::string& path) {
        std::ifstream in(path);
        if (!in)
            throw config_error("cannot open '" + path + "'");
        return parse(in, path);
    }

    bool has(const std::string& key) const { return values_.count(key) != 0; }

    std::optional<std::string> get(const std::string& key) const {
        auto it = values_.find(key);
        if (it == values_.end())
            return std::nullopt;
        return it->second;
    }

    std::optional<double> number(const std::string& key) const {
        auto v = get(key);
        if (!v)
            return std::nullopt;
        return parse_double(*v, key);
    }

    /// Keys under "prefix." with the prefix stripped.
    std::map<std::string, std::string> section(const std::string& prefix) const {
        std::map<std::string, std::string> out;
        const std::string p = prefix + ".";
        for (const auto& [k, v] : values_)
            if (k.rfind(p, 0) == 0)
                out[k.substr(p.size())] = v;
        return out;
    }

    const std::map<std::string, std::string>& all() const noexcept { return values_; }

private:
    std::map<std::string, std::string> values_;
};

} // namespace kv
} // namespace tripartite
