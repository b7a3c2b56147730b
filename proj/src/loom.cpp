#include "tabletloom/loom.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <utility>

#include "tabletloom/plan.hpp"

namespace tabletloom {

namespace {

int hex_digit(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

int wrap(int v) { return ((v % 4) + 4) % 4; }

// Physical hole index for a lookup position, given the flip state.
int physical_hole(const TabletState& state, int position) {
  return state.flipped ? wrap(-position) : wrap(position);
}

Slant turn_slant(Twist threading, bool flipped, Action action) {
  Twist effective = flipped ? other(threading) : threading;
  Slant forward = effective == Twist::S ? Slant::Falling : Slant::Rising;
  return action == Action::F ? forward : mirror(forward);
}

}  // namespace

bool parse_hex_color(std::string_view text, Rgb& out) {
  if (text.size() != 7 || text[0] != '#') return false;
  int v[6];
  for (int i = 0; i < 6; ++i) {
    v[i] = hex_digit(text[static_cast<std::size_t>(i) + 1]);
    if (v[i] < 0) return false;
  }
  out = Rgb{static_cast<std::uint8_t>(v[0] * 16 + v[1]), static_cast<std::uint8_t>(v[2] * 16 + v[3]),
            static_cast<std::uint8_t>(v[4] * 16 + v[5])};
  return true;
}

std::string to_hex(const Rgb& c) {
  char buf[8];
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x", c.r, c.g, c.b);
  return buf;
}

const std::string& color_at(const Threading& threading, const TabletState& state, int position) {
  return threading.colors[static_cast<std::size_t>(physical_hole(state, position))];
}

WeaveState new_band(std::vector<Threading> threading, Palette palette) {
  if (threading.empty()) throw Error("E_NO_TABLETS", "a band needs at least one tablet");
  for (std::size_t t = 0; t < threading.size(); ++t) {
    for (std::size_t h = 0; h < 4; ++h) {
      const std::string& name = threading[t].colors[h];
      if (!palette.contains(name)) {
        throw Error("E_UNKNOWN_COLOR", "tablet " + std::to_string(t + 1) + " hole " +
                                           std::string(1, static_cast<char>('A' + h)) +
                                           ": colour '" + name + "' is not in the palette")
            .at_tablet(t);
      }
    }
  }
  WeaveState state;
  state.tablets_.assign(threading.size(), TabletState{});
  state.threading_ = std::move(threading);
  state.palette_ = std::move(palette);
  return state;
}

WeaveState apply_flips(WeaveState state, std::span<const std::size_t> tablets) {
  for (std::size_t t : tablets) {
    if (t >= state.tablets_.size()) {
      throw Error("E_BAD_INDEX", "flip of tablet " + std::to_string(t + 1) + " but the band has " +
                                     std::to_string(state.tablets_.size()) + " tablets")
          .at_tablet(t);
    }
    TabletState& s = state.tablets_[t];
    s.flipped = !s.flipped;
    s.rotation = wrap(-s.rotation);
  }
  return state;
}

PickResult step_pick(WeaveState state, std::span<const Action> actions) {
  if (actions.size() != state.tablets_.size()) {
    throw Error("E_ROW_ARITY", "pick has " + std::to_string(actions.size()) + " actions for " +
                                   std::to_string(state.tablets_.size()) + " tablets")
        .at_pick(state.picks_);
  }
  std::vector<Cell> cells;
  cells.reserve(actions.size());
  for (std::size_t t = 0; t < actions.size(); ++t) {
    TabletState& s = state.tablets_[t];
    const Threading& th = state.threading_[t];
    int shown = s.rotation;
    Slant slant = Slant::Flat;
    switch (actions[t]) {
      case Action::F:
        shown = s.rotation;
        s.rotation = wrap(s.rotation + 1);
        s.twist += 1;
        slant = turn_slant(th.sz, s.flipped, Action::F);
        break;
      case Action::B:
        shown = wrap(s.rotation + 3);
        s.rotation = shown;
        s.twist -= 1;
        slant = turn_slant(th.sz, s.flipped, Action::B);
        break;
      case Action::I:
        break;
    }
    Cell cell;
    cell.front = color_at(th, s, shown);
    cell.back = color_at(th, s, shown + 2);
    cell.slant = slant;
    cell.hole = HoleIndex(physical_hole(s, shown));
    cell.rotation_after = s.rotation;
    cell.twist_after = s.twist;
    cells.push_back(std::move(cell));
  }
  ++state.picks_;
  return PickResult{std::move(state), std::move(cells)};
}

Drawdown simulate(const FlatPlan& plan) {
  WeaveState state = new_band(plan.threading, plan.palette);
  Drawdown out;
  out.tablets = plan.threading.size();
  out.palette = plan.palette;
  out.threading = plan.threading;
  out.cells.reserve(plan.picks.size());
  for (const PickEvent& ev : plan.picks) {
    for (const auto& flips : ev.flips_before) state = apply_flips(std::move(state), flips);
    PickResult r = step_pick(std::move(state), ev.actions);
    state = std::move(r.state);
    out.cells.push_back(std::move(r.cells));
  }
  out.picks = out.cells.size();
  return out;
}

TwistProfile twist_profile(const Drawdown& drawdown, std::int64_t threshold) {
  TwistProfile p;
  p.threshold = threshold;
  p.series.assign(drawdown.tablets, std::vector<std::int64_t>(drawdown.picks, 0));
  p.max_per_tablet.assign(drawdown.tablets, 0);
  p.first_warning_per_tablet.assign(drawdown.tablets, std::nullopt);
  for (std::size_t pick = 0; pick < drawdown.picks; ++pick) {
    for (std::size_t t = 0; t < drawdown.tablets; ++t) {
      std::int64_t q = drawdown.cells[pick][t].twist_after;
      p.series[t][pick] = q;
      std::int64_t mag = q < 0 ? -q : q;
      p.max_per_tablet[t] = std::max(p.max_per_tablet[t], mag);
      p.max_abs = std::max(p.max_abs, mag);
      if (mag > threshold && !p.first_warning_per_tablet[t]) {
        p.first_warning_per_tablet[t] = pick + 1;
        if (!p.first_warning) p.first_warning = pick + 1;
      }
    }
  }
  return p;
}

}  // namespace tabletloom
