#include "tabletloom/reader.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <set>
#include <utility>

namespace tabletloom {

namespace {

int wrap(int v) { return ((v % 4) + 4) % 4; }

// Counts saturate at `cap`; `saturated` records whether any value was clipped.
struct CappedCounter {
  std::uint64_t cap;
  bool saturated = false;

  std::uint64_t add(std::uint64_t a, std::uint64_t b) {
    if (b > cap || a > cap - b) {
      saturated = true;
      return cap;
    }
    return a + b;
  }

  std::uint64_t mul(std::uint64_t a, std::uint64_t b) {
    if (a != 0 && b > cap / a) {
      saturated = true;
      return cap;
    }
    std::uint64_t p = a * b;
    if (p > cap) {
      saturated = true;
      return cap;
    }
    return p;
  }
};

using StateSet = std::array<bool, 4>;

struct TabletSearch {
  const std::vector<std::string>& column;
  const Threading& threading;

  bool forward_emits(int r, std::size_t pick) const { return threading.colors[wrap(r)] == column[pick]; }
  bool backward_emits(int r, std::size_t pick) const { return threading.colors[wrap(r - 1)] == column[pick]; }

  StateSet starts(bool assume_home) const {
    return assume_home ? StateSet{true, false, false, false} : StateSet{true, true, true, true};
  }

  // First pick at which no rotation state remains reachable, if any.
  std::optional<std::size_t> first_dead_pick(bool assume_home) const {
    StateSet reach = starts(assume_home);
    for (std::size_t p = 0; p < column.size(); ++p) {
      StateSet next{};
      for (int r = 0; r < 4; ++r) {
        if (!reach[r]) continue;
        if (forward_emits(r, p)) next[wrap(r + 1)] = true;
        if (backward_emits(r, p)) next[wrap(r - 1)] = true;
      }
      if (std::none_of(next.begin(), next.end(), [](bool b) { return b; })) return p;
      reach = next;
    }
    return std::nullopt;
  }

  // alive[p][r]: some completion of picks p.. exists from rotation r.
  std::vector<StateSet> completable() const {
    std::vector<StateSet> alive(column.size() + 1);
    alive[column.size()] = {true, true, true, true};
    for (std::size_t p = column.size(); p-- > 0;) {
      for (int r = 0; r < 4; ++r) {
        alive[p][r] = (forward_emits(r, p) && alive[p + 1][wrap(r + 1)]) ||
                      (backward_emits(r, p) && alive[p + 1][wrap(r - 1)]);
      }
    }
    return alive;
  }

  std::uint64_t count(bool assume_home, const std::vector<StateSet>& alive, CappedCounter& counter) const {
    std::array<std::uint64_t, 4> ways{};
    StateSet s = starts(assume_home);
    for (int r = 0; r < 4; ++r) ways[r] = s[r] && alive[0][r] ? 1 : 0;
    for (std::size_t p = 0; p < column.size(); ++p) {
      std::array<std::uint64_t, 4> next{};
      for (int r = 0; r < 4; ++r) {
        if (ways[r] == 0) continue;
        int f = wrap(r + 1);
        int b = wrap(r - 1);
        if (forward_emits(r, p) && alive[p + 1][f]) next[f] = counter.add(next[f], ways[r]);
        if (backward_emits(r, p) && alive[p + 1][b]) next[b] = counter.add(next[b], ways[r]);
      }
      ways = next;
    }
    std::uint64_t total = 0;
    for (std::uint64_t w : ways) total = counter.add(total, w);
    return total;
  }

  // Lexicographically first direction sequence (F before B), then the
  // smallest start rotation that produces it.
  std::pair<std::vector<Action>, int> canonical(bool assume_home, const std::vector<StateSet>& alive) const {
    std::vector<std::pair<int, int>> candidates;  // (start, current rotation)
    StateSet s = starts(assume_home);
    for (int r = 0; r < 4; ++r) {
      if (s[r] && alive[0][r]) candidates.emplace_back(r, r);
    }
    std::vector<Action> actions;
    actions.reserve(column.size());
    for (std::size_t p = 0; p < column.size(); ++p) {
      std::vector<std::pair<int, int>> forward;
      std::vector<std::pair<int, int>> backward;
      for (auto [start, r] : candidates) {
        if (forward_emits(r, p) && alive[p + 1][wrap(r + 1)]) forward.emplace_back(start, wrap(r + 1));
        if (backward_emits(r, p) && alive[p + 1][wrap(r - 1)]) backward.emplace_back(start, wrap(r - 1));
      }
      if (!forward.empty()) {
        actions.push_back(Action::F);
        candidates = std::move(forward);
      } else {
        actions.push_back(Action::B);
        candidates = std::move(backward);
      }
    }
    int start = 4;
    for (auto [st, r] : candidates) start = std::min(start, st);
    return {std::move(actions), start};
  }
};

std::vector<std::string> column_of(const ColorGrid& grid, std::size_t tablet) {
  std::vector<std::string> col;
  col.reserve(grid.size());
  for (const auto& row : grid) col.push_back(row[tablet]);
  return col;
}

void check_shape(const ColorGrid& grid, std::size_t tablets) {
  for (std::size_t p = 0; p < grid.size(); ++p) {
    if (grid[p].size() != tablets) {
      throw Error("E_ROW_ARITY", "grid row " + std::to_string(p + 1) + " has " + std::to_string(grid[p].size()) +
                                     " colours for " + std::to_string(tablets) + " tablets")
          .at_pick(p);
    }
  }
}

}  // namespace

std::pair<std::uint64_t, bool> count_tablet_solutions(const std::vector<std::string>& column,
                                                      const Threading& threading, bool assume_home,
                                                      std::uint64_t cap) {
  TabletSearch search{column, threading};
  CappedCounter counter{cap};
  std::uint64_t n = search.count(assume_home, search.completable(), counter);
  return {n, counter.saturated};
}

InferenceResult infer_turns(const ColorGrid& grid, const std::vector<Threading>& threading, const Palette& palette,
                            const InferOptions& opts) {
  check_shape(grid, threading.size());
  const std::size_t tablets = threading.size();

  InferenceResult result;
  result.plan.tablets = tablets;
  result.plan.palette = palette;
  result.plan.threading = threading;
  result.plan.picks.assign(grid.size(), PickEvent{{}, std::vector<Action>(tablets, Action::I)});
  result.start_rotation.assign(tablets, 0);

  CappedCounter total{std::max<std::uint64_t>(opts.cap, 1)};
  std::uint64_t count = 1;
  for (std::size_t t = 0; t < tablets; ++t) {
    std::vector<std::string> col = column_of(grid, t);
    TabletSearch search{col, threading[t]};
    if (auto dead = search.first_dead_pick(opts.assume_home)) {
      throw Error("E_UNWEAVABLE", "tablet " + std::to_string(t + 1) + " cannot show '" + col[*dead] + "' at pick " +
                                      std::to_string(*dead + 1) +
                                      " with any forward/backward turn (flips and idle picks are not searched)")
          .at_tablet(t)
          .at_pick(*dead);
    }
    std::vector<StateSet> alive = search.completable();
    std::uint64_t n = search.count(opts.assume_home, alive, total);
    count = total.mul(count, n);

    auto [actions, start] = search.canonical(opts.assume_home, alive);
    for (std::size_t p = 0; p < actions.size(); ++p) result.plan.picks[p].actions[t] = actions[p];
    result.start_rotation[t] = start;
    if (start != 0) {
      Threading rotated = threading[t];
      for (int h = 0; h < 4; ++h) rotated.colors[h] = threading[t].colors[wrap(h + start)];
      result.plan.threading[t] = std::move(rotated);
    }
  }
  result.solution_count = count;
  result.capped = total.saturated;
  return result;
}

Palette codec_palette() {
  Palette p;
  parse_hex_color("#1b1b1b", p[kCodecColors[0]]);
  parse_hex_color("#f2f2f2", p[kCodecColors[1]]);
  parse_hex_color("#c0392b", p[kCodecColors[2]]);
  parse_hex_color("#2e86c1", p[kCodecColors[3]]);
  return p;
}

Threading codec_threading() {
  return Threading{Twist::S, {kCodecColors[0], kCodecColors[1], kCodecColors[2], kCodecColors[3]}};
}

std::string EncodedSignal::source() const {
  return pretty_print(plan, {"bits: " + std::to_string(bit_length)});
}

EncodedSignal encode_bits(const Bits& bits, std::size_t tablets) {
  if (bits.empty()) throw Error("E_EMPTY_BITS", "nothing to encode");
  if (tablets == 0) throw Error("E_NO_TABLETS", "a band needs at least one tablet");
  EncodedSignal sig;
  sig.bit_length = bits.size();
  sig.plan.tablets = tablets;
  sig.plan.palette = codec_palette();
  sig.plan.threading.assign(tablets, codec_threading());
  std::size_t picks = (bits.size() + tablets - 1) / tablets;
  sig.plan.picks.resize(picks);
  for (std::size_t p = 0; p < picks; ++p) {
    auto& row = sig.plan.picks[p].actions;
    row.assign(tablets, Action::F);
    for (std::size_t t = 0; t < tablets; ++t) {
      std::size_t i = p * tablets + t;
      if (i < bits.size() && !bits[i]) row[t] = Action::B;
    }
  }
  return sig;
}

Bits decode_bits(const ColorGrid& grid, const std::vector<Threading>& threading, std::size_t bit_length) {
  check_shape(grid, threading.size());
  const std::size_t tablets = threading.size();
  for (std::size_t t = 0; t < tablets; ++t) {
    std::set<std::string> distinct(threading[t].colors.begin(), threading[t].colors.end());
    if (distinct.size() != 4) {
      throw Error("E_CODEC_THREADING", "tablet " + std::to_string(t + 1) +
                                           " needs four distinct hole colours to carry bits")
          .at_tablet(t);
    }
  }
  if (tablets == 0 || bit_length > grid.size() * tablets) {
    throw Error("E_BIT_LENGTH", "grid carries " + std::to_string(grid.size() * tablets) + " bits, " +
                                    std::to_string(bit_length) + " requested");
  }

  Bits bits;
  bits.reserve(grid.size() * tablets);
  std::vector<int> rotation(tablets, 0);
  for (std::size_t p = 0; p < grid.size(); ++p) {
    for (std::size_t t = 0; t < tablets; ++t) {
      const auto& colors = threading[t].colors;
      const std::string& seen = grid[p][t];
      int& r = rotation[t];
      if (colors[wrap(r)] == seen) {
        bits.push_back(true);
        r = wrap(r + 1);
      } else if (colors[wrap(r - 1)] == seen) {
        bits.push_back(false);
        r = wrap(r - 1);
      } else {
        throw Error("E_CORRUPT", "tablet " + std::to_string(t + 1) + " pick " + std::to_string(p + 1) + ": '" + seen +
                                     "' matches neither a forward nor a backward turn")
            .at_tablet(t)
            .at_pick(p);
      }
    }
  }
  bits.resize(bit_length);
  return bits;
}

std::optional<std::size_t> bit_length_header(std::string_view source) {
  constexpr std::string_view kPrefix = "# bits:";
  std::size_t pos = 0;
  while (pos < source.size()) {
    std::size_t nl = source.find('\n', pos);
    std::string_view line = source.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? source.size() : nl + 1;
    if (line.substr(0, kPrefix.size()) != kPrefix) continue;
    std::string_view rest = line.substr(kPrefix.size());
    while (!rest.empty() && (rest.front() == ' ' || rest.front() == '\t')) rest.remove_prefix(1);
    while (!rest.empty() && (rest.back() == '\r' || rest.back() == ' ')) rest.remove_suffix(1);
    std::size_t n = 0;
    auto [ptr, ec] = std::from_chars(rest.data(), rest.data() + rest.size(), n);
    if (ec == std::errc() && ptr == rest.data() + rest.size()) return n;
  }
  return std::nullopt;
}

Bits bits_from_hex(std::string_view hex) {
  Bits bits;
  bits.reserve(hex.size() * 4);
  for (char c : hex) {
    int v = -1;
    if (c >= '0' && c <= '9') v = c - '0';
    if (c >= 'a' && c <= 'f') v = c - 'a' + 10;
    if (c >= 'A' && c <= 'F') v = c - 'A' + 10;
    if (v < 0) throw Error("E_BAD_HEX", std::string("'") + c + "' is not a hex digit");
    for (int b = 3; b >= 0; --b) bits.push_back(((v >> b) & 1) != 0);
  }
  return bits;
}

Bits bits_from_bytes(std::string_view bytes) {
  Bits bits;
  bits.reserve(bytes.size() * 8);
  for (char c : bytes) {
    auto u = static_cast<unsigned char>(c);
    for (int b = 7; b >= 0; --b) bits.push_back(((u >> b) & 1) != 0);
  }
  return bits;
}

std::string bits_to_string(const Bits& bits) {
  std::string out;
  out.reserve(bits.size());
  for (bool b : bits) out += b ? '1' : '0';
  return out;
}

}  // namespace tabletloom
