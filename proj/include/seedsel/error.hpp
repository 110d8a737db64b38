#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace seedsel {

// Failure carrying a stable machine-readable code alongside the human text.
// Codes in use: "io", "parse", "validation", "parameter", "syntax",
// "duplicate-id", "missing-representation", "usage".
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& message)
        : std::runtime_error(message), code_(std::move(code)) {}

    const std::string& code() const noexcept { return code_; }

    // Single-line form used by the command-line tool on every failure path.
    std::string diagnostic() const { return "error: " + code_ + ": " + what(); }

private:
    std::string code_;
};

} // namespace seedsel
