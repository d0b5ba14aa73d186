#pragma once
// Plain-text sweep configuration: INI-style sections, one per suite, with
// fail-closed key handling.  See configs/suite-full.cfg for the shipped
// acceptance-grade sweep.

#include <iosfwd>
#include <stdexcept>
#include <string>

#include "mtb/verify.hpp"

namespace mtb {

class ConfigError : public std::runtime_error {
public:
    ConfigError(const std::string& msg, int line)
        : std::runtime_error(msg + " (line " + std::to_string(line) + ")"), line_(line) {}

    int line() const { return line_; }

private:
    int line_;
};

SweepConfig parse_config(std::istream& in);

// Loads and validates a config file; throws IoError when the file cannot be
// read and ConfigError (with a line number) on malformed or unknown content.
SweepConfig load_config(const std::string& path);

}  // namespace mtb
