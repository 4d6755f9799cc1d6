// Run configuration: key=value file plus overrides.
#pragma once

#include "picard/theta.hpp"

#include <gmpxx.h>

#include <stdexcept>
#include <string>

namespace picard {

struct ConfigError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

enum class OutputFormat { Human, Delimited };

struct Config {
    int truncation = 32;
    int tables_truncation = 40;  // the eigenvalue tables need deeper expansions, see README
    int precision_bits = 256;
    mpz_class denominator_bound = 531441;
    std::string cache_path = "operators.cache";
    OutputFormat format = OutputFormat::Human;

    // one "key = value" per line, '#' starts a comment; unknown keys are errors
    static Config from_file(const std::string& path);
    void set(const std::string& key, const std::string& value);
    // truncation >= 8, precision_bits >= 128, positive bound
    void validate() const;
    TableMeta table_meta() const { return {precision_bits, denominator_bound}; }
    std::string str() const;
};

}  // namespace picard
