#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace imgtn {

/// Base class for every error raised by the library.
class error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A caller-supplied argument violates an operation's precondition.
class precondition_error : public error {
public:
    using error::error;
};

/// Pixel sets that should partition the grid overlap or leave gaps.
class structural_error : public error {
public:
    using error::error;
};

/// A numerical routine did not deliver the exact answer it is contracted to.
class numerical_error : public error {
public:
    using error::error;
};

/// Malformed input file. `line()` is 1-based, 0 when not tied to a line.
class parse_error : public error {
public:
    parse_error(std::size_t line, const std::string& what)
        : error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

} // namespace imgtn
