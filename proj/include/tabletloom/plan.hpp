#pragma once

// The band plan language.
//
//   # comment
//   tablets 8
//   palette r #cc0000
//   thread 1-4 S r r w w
//   thread 5-8 Z r r w w
//   flip 1,3
//   repeat 4
//     1-4F 5-8B
//   end
//
// Pick lines are whitespace separated `[RANGELIST]F|B|I` tokens; a bare
// letter addresses every tablet. Tablets not mentioned on a pick line idle.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "tabletloom/error.hpp"
#include "tabletloom/loom.hpp"

namespace tabletloom {

namespace codes {
inline constexpr const char* kTabletsMissing = "E_TABLETS_MISSING";
inline constexpr const char* kThreadDup = "E_THREAD_DUP";
inline constexpr const char* kThreadMissing = "E_THREAD_MISSING";
inline constexpr const char* kOverlap = "E_OVERLAP";
inline constexpr const char* kBadRange = "E_BAD_RANGE";
inline constexpr const char* kBadToken = "E_BAD_TOKEN";
inline constexpr const char* kUnclosedRepeat = "E_UNCLOSED_REPEAT";
inline constexpr const char* kUnknownColor = "E_UNKNOWN_COLOR";
inline constexpr const char* kRepeatOverflow = "E_REPEAT_OVERFLOW";
}  // namespace codes

/// 0-based inclusive tablet range.
struct TabletRange {
  std::size_t first = 0;
  std::size_t last = 0;

  friend bool operator==(const TabletRange&, const TabletRange&) = default;
};

struct TurnToken {
  std::vector<TabletRange> ranges;  // empty: all tablets
  Action action = Action::I;
  std::size_t column = 1;
};

struct PickLine {
  std::vector<TurnToken> turns;
  std::size_t line = 1;
};

struct FlipDirective {
  std::vector<TabletRange> ranges;
  std::size_t line = 1;
};

struct BodyItem;

struct RepeatBlock {
  std::uint64_t count = 1;
  std::vector<BodyItem> body;
  std::size_t line = 1;
};

struct BodyItem {
  std::variant<PickLine, FlipDirective, RepeatBlock> node;
};

struct ThreadStatement {
  TabletRange range;
  Threading threading;
  std::size_t line = 1;
};

struct PaletteEntry {
  std::string name;
  Rgb color;
  std::size_t line = 1;
};

struct Plan {
  std::size_t tablets = 0;
  std::vector<PaletteEntry> palette;
  std::vector<ThreadStatement> threads;
  std::vector<BodyItem> body;
};

struct ParseResult {
  std::optional<Plan> plan;
  std::vector<Diagnostic> diagnostics;  // sorted by (line, column, code)

  bool ok() const noexcept { return plan.has_value(); }
};

/// Never throws on malformed input; every problem becomes a Diagnostic.
ParseResult parse(std::string_view source);

struct PickEvent {
  /// Flip directives issued since the previous pick, in order. Each inner
  /// list is one directive's sorted tablet set.
  std::vector<std::vector<std::size_t>> flips_before;
  std::vector<Action> actions;

  friend bool operator==(const PickEvent&, const PickEvent&) = default;
};

struct FlatPlan {
  std::size_t tablets = 0;
  Palette palette;
  std::vector<Threading> threading;
  std::vector<PickEvent> picks;
  std::vector<std::vector<std::size_t>> trailing_flips;

  friend bool operator==(const FlatPlan&, const FlatPlan&) = default;
};

inline constexpr std::size_t kDefaultPickCap = 100000;

/// Unrolls repeats and fills idle tablets. Throws E_REPEAT_OVERFLOW (with a
/// diagnostic at the offending repeat) when more than `pick_cap` picks or
/// flip directives would be produced.
FlatPlan expand(const Plan& plan, std::size_t pick_cap = kDefaultPickCap);

/// parse + expand. Throws Error carrying the diagnostics on failure; the
/// error code is that of the first diagnostic.
FlatPlan compile(std::string_view source, std::size_t pick_cap = kDefaultPickCap);

/// `line:col CODE message` followed by the source line and a caret, per
/// diagnostic, sorted by (line, col, code).
std::string format_errors(std::vector<Diagnostic> diagnostics, std::string_view source);

/// Emits band plan text (LF line endings) that expands back to `plan`.
/// `header` lines are written as leading comments.
std::string pretty_print(const FlatPlan& plan, const std::vector<std::string>& header = {});

}  // namespace tabletloom
