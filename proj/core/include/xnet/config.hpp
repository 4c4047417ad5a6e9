#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <variant>
#include <vector>

namespace xnet {

/// One value of a `key = value` config file: a number, a string, a boolean
/// or a bracketed list of numbers.
struct ConfigValue {
    std::variant<double, std::string, bool, std::vector<double>> data;
    std::size_t line = 0;
    std::string text; // raw right-hand side
};

/// Keys under a `[section]` header are stored as "section.key".
using ConfigTable = std::map<std::string, ConfigValue>;

/// Parse `key = value` lines with `#` comments, `[section]` headers,
/// quoted or bare strings, true/false and `[a, b, ...]` numeric lists.
/// Throws ParseError with the offending line number.
ConfigTable parse_config_text(const std::string& text);

/// Reads the file and parses it; throws IoError if it cannot be opened.
ConfigTable load_config_file(const std::string& path);

} // namespace xnet
