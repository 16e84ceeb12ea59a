#pragma once

#include <stdexcept>
#include <string>

namespace usfm {

// Domain error with a stable machine-readable code alongside the message.
// Codes are short kebab-case tokens ("unit-mismatch", "zero-parts") that the
// CLI maps onto exit statuses and tests match on exactly.
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& message)
        : std::runtime_error(code + ": " + message), code_(std::move(code)) {}

    const std::string& code() const { return code_; }

private:
    std::string code_;
};

}  // namespace usfm
