#include "tabletloom/error.hpp"

#include <utility>

namespace tabletloom {

Error::Error(std::string code, const std::string& message)
    : std::runtime_error(message), code_(std::move(code)) {}

Error::Error(std::string code, const std::string& message, std::vector<Diagnostic> diagnostics)
    : std::runtime_error(message), code_(std::move(code)), diagnostics_(std::move(diagnostics)) {}

}  // namespace tabletloom
