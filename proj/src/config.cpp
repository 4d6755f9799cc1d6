#include "picard/config.hpp"

#include <fstream>
#include <sstream>

namespace picard {

namespace {

std::string trim(const std::string& s) {
    auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

int to_int(const std::string& key, const std::string& v) {
    try {
        std::size_t used = 0;
        int x = std::stoi(v, &used);
        if (used != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw ConfigError("config: " + key + " expects an integer, got '" + v + "'");
    }
}

}  // namespace

void Config::set(const std::string& key, const std::string& value) {
    if (key == "truncation" || key == "W") truncation = to_int(key, value);
    else if (key == "tables_truncation") tables_truncation = to_int(key, value);
    else if (key == "precision_bits") precision_bits = to_int(key, value);
    else if (key == "denominator_bound") {
        if (denominator_bound.set_str(value, 10) != 0) throw ConfigError("config: bad denominator_bound '" + value + "'");
    } else if (key == "cache_path") cache_path = value;
    else if (key == "output_format") {
        if (value == "human") format = OutputFormat::Human;
        else if (value == "delimited") format = OutputFormat::Delimited;
        else throw ConfigError("config: output_format is human or delimited, got '" + value + "'");
    } else throw ConfigError("config: unknown key '" + key + "'");
}

Config Config::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot read " + path);
    Config c;
    std::string line;
    int no = 0;
    while (std::getline(in, line)) {
        ++no;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        line = trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError(path + ":" + std::to_string(no) + ": expected key = value");
        c.set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    c.validate();
    return c;
}

void Config::validate() const {
    if (truncation < 8) throw ConfigError("config: truncation must be at least 8");
    if (tables_truncation < 8) throw ConfigError("config: tables_truncation must be at least 8");
    if (precision_bits < 128) throw ConfigError("config: precision_bits must be at least 128");
    if (denominator_bound <= 0) throw ConfigError("config: denominator_bound must be positive");
}

std::string Config::str() const {
    std::ostringstream os;
    os << "truncation = " << truncation << "\n"
       << "tables_truncation = " << tables_truncation << "\n"
       << "precision_bits = " << precision_bits << "\n"
       << "denominator_bound = " << denominator_bound.get_str() << "\n"
       << "cache_path = " << cache_path << "\n"
       << "output_format = " << (format == OutputFormat::Human ? "human" : "delimited") << "\n";
    return os.str();
}

}  // namespace picard
