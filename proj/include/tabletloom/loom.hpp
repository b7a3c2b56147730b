#pragma once

// Tablet weaving state machine.
//
// Each tablet carries four warp threads, one per hole A..D (indices 0..3).
// Rotation 0 is home. A forward turn shows the hole at index `rotation` on
// the front face and advances rotation by one; a backward turn retreats
// rotation by one and shows the hole at the new rotation. The back face
// always shows the opposite hole (front + 2 mod 4).
//
// Flipping a tablet negates its rotation, reverses the hole lookup order and
// swaps the S/Z character used for slant. Twist counts physical quarter
// turns (forward +1, backward -1) and ignores flips.

#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tabletloom/error.hpp"

namespace tabletloom {

/// Hole index 0..3, labelled A..D.
class HoleIndex {
 public:
  constexpr HoleIndex() = default;
  constexpr explicit HoleIndex(int v) : value_(static_cast<std::uint8_t>(((v % 4) + 4) % 4)) {}

  constexpr int value() const noexcept { return value_; }
  constexpr char label() const noexcept { return static_cast<char>('A' + value_); }
  constexpr HoleIndex opposite() const noexcept { return HoleIndex(value_ + 2); }

  friend constexpr bool operator==(HoleIndex, HoleIndex) = default;

 private:
  std::uint8_t value_ = 0;
};

enum class Twist : char { S = 'S', Z = 'Z' };

constexpr Twist other(Twist t) noexcept { return t == Twist::S ? Twist::Z : Twist::S; }

struct Rgb {
  std::uint8_t r = 0;
  std::uint8_t g = 0;
  std::uint8_t b = 0;

  friend bool operator==(const Rgb&, const Rgb&) = default;
};

/// Parses "#rrggbb" (either case). Returns false on malformed input.
bool parse_hex_color(std::string_view text, Rgb& out);
/// Lowercase "#rrggbb".
std::string to_hex(const Rgb& c);

using Palette = std::map<std::string, Rgb>;

struct Threading {
  Twist sz = Twist::S;
  std::array<std::string, 4> colors;

  friend bool operator==(const Threading&, const Threading&) = default;
};

struct TabletState {
  int rotation = 0;
  bool flipped = false;
  std::int64_t twist = 0;

  friend bool operator==(const TabletState&, const TabletState&) = default;
};

enum class Action : char { F = 'F', B = 'B', I = 'I' };

enum class Slant : char { Rising = '/', Falling = '\\', Flat = '|' };

constexpr Slant mirror(Slant s) noexcept {
  switch (s) {
    case Slant::Rising: return Slant::Falling;
    case Slant::Falling: return Slant::Rising;
    case Slant::Flat: return Slant::Flat;
  }
  return s;
}

struct Cell {
  std::string front;
  std::string back;
  Slant slant = Slant::Flat;
  HoleIndex hole;  // physical hole showing on the front face
  int rotation_after = 0;
  std::int64_t twist_after = 0;

  friend bool operator==(const Cell&, const Cell&) = default;
};

/// Hole colour as seen through the tablet's current orientation.
const std::string& color_at(const Threading& threading, const TabletState& state, int position);

struct PickResult;

class WeaveState {
 public:
  const std::vector<TabletState>& tablets() const noexcept { return tablets_; }
  const std::vector<Threading>& threading() const noexcept { return threading_; }
  const Palette& palette() const noexcept { return palette_; }
  std::size_t picks() const noexcept { return picks_; }
  std::size_t size() const noexcept { return tablets_.size(); }

  friend bool operator==(const WeaveState&, const WeaveState&) = default;

 private:
  friend WeaveState new_band(std::vector<Threading>, Palette);
  friend WeaveState apply_flips(WeaveState, std::span<const std::size_t>);
  friend PickResult step_pick(WeaveState, std::span<const Action>);

  std::vector<TabletState> tablets_;
  std::vector<Threading> threading_;
  Palette palette_;
  std::size_t picks_ = 0;
};

struct PickResult {
  WeaveState state;
  std::vector<Cell> cells;
};

/// Throws E_NO_TABLETS or E_UNKNOWN_COLOR.
WeaveState new_band(std::vector<Threading> threading, Palette palette);

/// Toggles the listed tablets. A tablet listed twice is flipped twice.
/// Throws E_BAD_INDEX.
WeaveState apply_flips(WeaveState state, std::span<const std::size_t> tablets);

/// Turns every tablet per its action and weaves one pick. Throws E_ROW_ARITY.
PickResult step_pick(WeaveState state, std::span<const Action> actions);

struct Drawdown {
  std::size_t tablets = 0;
  std::size_t picks = 0;
  Palette palette;
  std::vector<Threading> threading;
  std::vector<std::vector<Cell>> cells;  // cells[pick][tablet]

  friend bool operator==(const Drawdown&, const Drawdown&) = default;
};

struct FlatPlan;

Drawdown simulate(const FlatPlan& plan);

struct TwistProfile {
  std::vector<std::vector<std::int64_t>> series;  // series[tablet][pick]
  std::vector<std::int64_t> max_per_tablet;
  std::int64_t max_abs = 0;
  std::int64_t threshold = 8;
  /// 1-based pick at which |twist| first exceeds the threshold, per tablet.
  std::vector<std::optional<std::size_t>> first_warning_per_tablet;
  std::optional<std::size_t> first_warning;
};

inline constexpr std::int64_t kDefaultTwistThreshold = 8;

TwistProfile twist_profile(const Drawdown& drawdown,
                           std::int64_t threshold = kDefaultTwistThreshold);

}  // namespace tabletloom
