#ifndef HIERSUM_ERRORS_HPP
#define HIERSUM_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace hiersum {

// Invalid node ids, dimension mismatches, broken tree links.
class StructuralError : public std::runtime_error {
public:
    explicit StructuralError(const std::string& msg) : std::runtime_error(msg) {}
};

// Bad data fed to an operation (negative metric, non-leaf cell, ...).
class InputError : public std::runtime_error {
public:
    explicit InputError(const std::string& msg) : std::runtime_error(msg) {}
};

// Invalid configuration (k < 1, degenerate weight-function parameters).
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// Instance exceeds a guard an exhaustive or dense procedure relies on.
class CapacityError : public std::runtime_error {
public:
    explicit CapacityError(const std::string& msg) : std::runtime_error(msg) {}
};

// Malformed input file; carries file and 1-based line position.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& file, std::size_t line, const std::string& msg)
        : std::runtime_error(file + ":" + std::to_string(line) + ": " + msg),
          file_(file),
          line_(line) {}

    const std::string& file() const { return file_; }
    std::size_t line() const { return line_; }

private:
    std::string file_;
    std::size_t line_;
};

} // namespace hiersum

#endif
