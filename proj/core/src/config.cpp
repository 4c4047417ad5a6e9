#include "xnet/config.hpp"

#include <cctype>
#include <cerrno>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "xnet/errors.hpp"

namespace xnet {

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return {};
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

std::string strip_comment(const std::string& s) {
    bool quoted = false;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '"') quoted = !quoted;
        if (s[i] == '#' && !quoted) return s.substr(0, i);
    }
    return s;
}

bool parse_number(const std::string& s, double& out) {
    if (s.empty()) return false;
    errno = 0;
    char* end = nullptr;
    out = std::strtod(s.c_str(), &end);
    return errno == 0 && end == s.c_str() + s.size();
}

bool valid_key(const std::string& key) {
    if (key.empty()) return false;
    for (char ch : key)
        if (!(std::isalnum(static_cast<unsigned char>(ch)) || ch == '_' || ch == '-' || ch == '.')) return false;
    return true;
}

} // namespace

ConfigTable parse_config_text(const std::string& text) {
    ConfigTable table;
    std::istringstream in(text);
    std::string raw;
    std::string section;
    std::size_t line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const std::string line = trim(strip_comment(raw));
        if (line.empty()) continue;

        if (line.front() == '[') {
            if (line.back() != ']') throw ParseError("unterminated section header", line_no);
            section = trim(line.substr(1, line.size() - 2));
            if (!valid_key(section)) throw ParseError("bad section name '" + section + "'", line_no);
            continue;
        }

        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ParseError("expected 'key = value'", line_no);
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (!valid_key(key)) throw ParseError("bad key '" + key + "'", line_no);
        if (value.empty()) throw ParseError("missing value for '" + key + "'", line_no);
        const std::string full_key = section.empty() ? key : section + "." + key;
        if (table.count(full_key)) throw ParseError("duplicate key '" + full_key + "'", line_no);

        ConfigValue v;
        v.line = line_no;
        v.text = value;
        double number = 0.0;
        if (value.front() == '[') {
            if (value.back() != ']') throw ParseError("unterminated list for '" + key + "'", line_no);
            std::vector<double> items;
            std::istringstream list(value.substr(1, value.size() - 2));
            std::string item;
            while (std::getline(list, item, ',')) {
                item = trim(item);
                if (item.empty()) continue;
                if (!parse_number(item, number))
                    throw ParseError("non-numeric list item '" + item + "' in '" + key + "'", line_no);
                items.push_back(number);
            }
            v.data = std::move(items);
        } else if (value.front() == '"') {
            if (value.size() < 2 || value.back() != '"')
                throw ParseError("unterminated string for '" + key + "'", line_no);
            v.data = value.substr(1, value.size() - 2);
        } else if (value == "true" || value == "false") {
            v.data = value == "true";
        } else if (parse_number(value, number)) {
            v.data = number;
        } else {
            v.data = value;
        }
        table.emplace(full_key, std::move(v));
    }
    return table;
}

ConfigTable load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_config_text(buffer.str());
}

} // namespace xnet
