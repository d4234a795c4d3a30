#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace curate {

// Runtime error carrying a short machine-readable code next to the
// human-readable message, e.g. code "empty_document".
class Error : public std::runtime_error {
 public:
    Error(std::string code, const std::string& message)
        : std::runtime_error(message), code_(std::move(code)) {}

    const std::string& code() const { return code_; }

 private:
    std::string code_;
};

}  // namespace curate
