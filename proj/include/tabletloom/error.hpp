#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace tabletloom {

/// A located message about band plan source text. Line and column are 1-based.
struct Diagnostic {
  std::size_t line = 1;
  std::size_t column = 1;
  std::string code;
  std::string message;

  friend bool operator==(const Diagnostic&, const Diagnostic&) = default;
};

/// Domain error. `code()` is a stable identifier such as "E_UNWEAVABLE";
/// tablet and pick, when present, are 0-based.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& message);
  Error(std::string code, const std::string& message,
        std::vector<Diagnostic> diagnostics);

  const std::string& code() const noexcept { return code_; }
  const std::vector<Diagnostic>& diagnostics() const noexcept { return diagnostics_; }

  std::optional<std::size_t> tablet() const noexcept { return tablet_; }
  std::optional<std::size_t> pick() const noexcept { return pick_; }
  std::optional<std::size_t> line() const noexcept { return line_; }

  Error& at_tablet(std::size_t t) { tablet_ = t; return *this; }
  Error& at_pick(std::size_t p) { pick_ = p; return *this; }
  Error& at_line(std::size_t l) { line_ = l; return *this; }

 private:
  std::string code_;
  std::vector<Diagnostic> diagnostics_;
  std::optional<std::size_t> tablet_;
  std::optional<std::size_t> pick_;
  std::optional<std::size_t> line_;
};

}  // namespace tabletloom
