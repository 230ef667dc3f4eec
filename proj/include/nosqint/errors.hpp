#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace nosqint {

// Domain error carrying the originating module and a stable error kind.
// Kinds are short PascalCase tags ("ParseError", "UnknownContainer", ...)
// that the CLI prints verbatim and tests match on.
class Error : public std::runtime_error {
public:
    Error(std::string module, std::string kind, const std::string& message)
        : std::runtime_error(module + ": " + kind + ": " + message),
          module_(std::move(module)),
          kind_(std::move(kind)) {}

    const std::string& module() const noexcept { return module_; }
    const std::string& kind() const noexcept { return kind_; }

private:
    std::string module_;
    std::string kind_;
};

}  // namespace nosqint
