#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <random>

#include "support/reference.hpp"
#include "tabletloom/reader.hpp"

using namespace tabletloom;
using tabletloom::testing::enumerate_solutions;
using tabletloom::testing::turn_only_plan;

namespace {

Palette rw_palette() {
  Palette p;
  parse_hex_color("#cc0000", p["r"]);
  parse_hex_color("#ffffff", p["w"]);
  parse_hex_color("#000000", p["k"]);
  return p;
}

std::vector<std::string> column(const ColorGrid& g, std::size_t t) {
  std::vector<std::string> c;
  for (const auto& row : g) c.push_back(row[t]);
  return c;
}

std::uint64_t oracle_count(const ColorGrid& g, const std::vector<Threading>& th, bool home) {
  std::uint64_t n = 1;
  for (std::size_t t = 0; t < th.size(); ++t) n *= enumerate_solutions(column(g, t), th[t], home);
  return n;
}

}  // namespace

TEST_CASE("reading four forward picks on r,r,w,w") {
  ColorGrid grid{{"r"}, {"r"}, {"w"}, {"w"}};
  std::vector<Threading> th{{Twist::S, {"r", "r", "w", "w"}}};
  InferenceResult r = infer_turns(grid, th, rw_palette());
  CHECK(r.plan.picks.size() == 4);
  for (const auto& ev : r.plan.picks) CHECK(ev.actions == std::vector<Action>{Action::F});
  // Hand enumeration: picks 2 and 4 each admit both directions.
  CHECK(r.solution_count == 4);
  CHECK(enumerate_solutions(column(grid, 0), th[0], true) == 4);
  CHECK_FALSE(r.capped);
  CHECK(front_grid(simulate(r.plan)) == grid);
}

TEST_CASE("distinct hole colours determine the plan uniquely") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    std::size_t picks = 1 + rng() % 8;
    FlatPlan original = turn_only_plan(rng, 1 + rng() % 4, picks, true);
    ColorGrid grid = front_grid(simulate(original));
    InferenceResult r = infer_turns(grid, original.threading, original.palette);
    CHECK(r.solution_count == 1);
    CHECK(r.plan == original);
    CHECK(oracle_count(grid, original.threading, true) == 1);
  }
}

TEST_CASE("a colour the tablet does not carry is unweavable") {
  ColorGrid grid{{"r"}, {"r"}, {"k"}, {"w"}};
  std::vector<Threading> th{{Twist::S, {"r", "r", "w", "w"}}};
  try {
    infer_turns(grid, th, rw_palette());
    FAIL("expected E_UNWEAVABLE");
  } catch (const Error& e) {
    CHECK(e.code() == "E_UNWEAVABLE");
    CHECK(e.tablet() == 0u);
    CHECK(e.pick() == 2u);
    CHECK(std::string(e.what()).find("flips and idle") != std::string::npos);
  }
}

TEST_CASE("an order no turn sequence produces is unweavable") {
  // From home the first pick can only show hole A (forward) or D (backward).
  ColorGrid grid{{"b"}};
  Palette p = rw_palette();
  p["a"] = {};
  p["b"] = {};
  p["c"] = {};
  p["d"] = {};
  std::vector<Threading> th{{Twist::S, {"a", "b", "c", "d"}}};
  CHECK_THROWS_AS(infer_turns(grid, th, p), Error);
  InferenceResult any = infer_turns(grid, th, p, {false, 1000});
  CHECK(any.solution_count == 2);  // start 1 forward, start 2 backward
  CHECK(any.start_rotation[0] == 1);
  CHECK(front_grid(simulate(any.plan)) == grid);
}

TEST_CASE("grid shape must match the threading") {
  std::vector<Threading> th{{Twist::S, {"r", "r", "w", "w"}}};
  CHECK_THROWS_AS(infer_turns(ColorGrid{{"r", "r"}}, th, rw_palette()), Error);
}

TEST_CASE("reconstruction is sound and the count matches enumeration") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 300; ++trial) {
    bool home = trial % 3 != 0;
    FlatPlan original = turn_only_plan(rng, 1 + rng() % 4, 1 + rng() % 8, false);
    ColorGrid grid = front_grid(simulate(original));
    InferenceResult r = infer_turns(grid, original.threading, original.palette, {home, 1000000});
    CHECK(front_grid(simulate(r.plan)) == grid);
    CHECK(r.solution_count == oracle_count(grid, original.threading, home));
    CHECK(r.solution_count >= 1);
    for (std::size_t t = 0; t < original.tablets; ++t) {
      std::vector<std::vector<Action>> feasible;
      enumerate_solutions(column(grid, t), original.threading[t], true, &feasible);
      std::vector<Action> mine;
      for (const auto& ev : original.picks) mine.push_back(ev.actions[t]);
      CHECK(std::find(feasible.begin(), feasible.end(), mine) != feasible.end());
      // F sorts before B, so the canonical plan is the smallest feasible sequence.
      if (home) {
        std::vector<Action> canon;
        for (const auto& ev : r.plan.picks) canon.push_back(ev.actions[t]);
        auto key = [](const std::vector<Action>& s) {
          std::string k;
          for (Action a : s) k += a == Action::F ? '0' : '1';
          return k;
        };
        std::string best = key(feasible.front());
        for (const auto& f : feasible) best = std::min(best, key(f));
        CHECK(key(canon) == best);
      }
    }
  }
}

TEST_CASE("solution counts saturate at the cap") {
  ColorGrid grid(10, std::vector<std::string>{"r"});
  std::vector<Threading> th{{Twist::S, {"r", "r", "r", "r"}}};
  InferenceResult r = infer_turns(grid, th, rw_palette(), {true, 1000});
  CHECK(r.solution_count == 1000);
  CHECK(r.capped);

  ColorGrid five(5, std::vector<std::string>{"r"});
  InferenceResult exact = infer_turns(five, th, rw_palette(), {true, 32});
  CHECK(exact.solution_count == 32);
  CHECK_FALSE(exact.capped);

  auto [n, capped] = count_tablet_solutions(column(grid, 0), th[0], true, 5000);
  CHECK(n == 1024);
  CHECK_FALSE(capped);

  ColorGrid wide(10, std::vector<std::string>{"r", "r"});
  InferenceResult prod = infer_turns(wide, {th[0], th[0]}, rw_palette(), {true, 100000});
  CHECK(prod.solution_count == 100000);
  CHECK(prod.capped);
}

TEST_CASE("merging hole colours never reduces ambiguity") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 200; ++trial) {
    FlatPlan original = turn_only_plan(rng, 1, 1 + rng() % 10, true);
    ColorGrid grid = front_grid(simulate(original));
    Threading th = original.threading[0];
    auto before = count_tablet_solutions(column(grid, 0), th, true, 1u << 20).first;

    std::size_t shift = rng() % 4;
    std::map<std::string, std::string> merge;
    for (std::size_t h = 0; h < 4; ++h) merge[th.colors[(h + shift) % 4]] = h < 2 ? "x" : "y";
    Threading merged = th;
    for (auto& c : merged.colors) c = merge[c];
    std::vector<std::string> col = column(grid, 0);
    for (auto& c : col) c = merge[c];
    auto after = count_tablet_solutions(col, merged, true, 1u << 20).first;
    CHECK(after >= before);
  }
}

TEST_CASE("encode_bits layout") {
  EncodedSignal two = encode_bits({true, false}, 2);
  REQUIRE(two.plan.picks.size() == 1);
  CHECK(two.plan.picks[0].actions == std::vector<Action>{Action::F, Action::B});
  CHECK(two.bit_length == 2);

  EncodedSignal eight = encode_bits(Bits(8, true), 4);
  REQUIRE(eight.plan.picks.size() == 2);
  for (const auto& ev : eight.plan.picks) CHECK(ev.actions == std::vector<Action>(4, Action::F));

  EncodedSignal padded = encode_bits({false, false, false}, 2);
  REQUIRE(padded.plan.picks.size() == 2);
  CHECK(padded.plan.picks[1].actions == std::vector<Action>{Action::B, Action::F});

  CHECK_THROWS_WITH_AS(encode_bits({}, 3), "nothing to encode", Error);
  try {
    encode_bits({}, 3);
  } catch (const Error& e) {
    CHECK(e.code() == "E_EMPTY_BITS");
  }
}

TEST_CASE("encoded source records the bit length and recompiles") {
  EncodedSignal sig = encode_bits({true, false, true, true, false}, 3);
  std::string src = sig.source();
  CHECK(src.rfind("# bits: 5\n", 0) == 0);
  CHECK(bit_length_header(src) == 5u);
  CHECK(compile(src) == sig.plan);
  CHECK_FALSE(bit_length_header("tablets 1\n").has_value());
}

TEST_CASE("decode inverts encode through the weave") {
  Bits bits{true, false, true, true, false};
  EncodedSignal sig = encode_bits(bits, 3);
  ColorGrid grid = front_grid(simulate(sig.plan));
  CHECK(decode_bits(grid, sig.plan.threading, 5) == bits);
}

TEST_CASE("an all-forward band decodes to ones") {
  FlatPlan plan = encode_bits(Bits(12, true), 4).plan;
  CHECK(decode_bits(front_grid(simulate(plan)), plan.threading, 12) == Bits(12, true));
}

TEST_CASE("a tampered cell is reported at its pick") {
  EncodedSignal sig = encode_bits({true, false, true, true, false, false, true, false, true}, 3);
  ColorGrid grid = front_grid(simulate(sig.plan));
  // Pick 2, tablet 3 rests at rotation 1 after one forward turn: forward
  // shows c1, backward (bit 0) shows c0. c2 and c3 are impossible.
  REQUIRE(grid[1][2] == "c0");
  grid[1][2] = "c2";
  try {
    decode_bits(grid, sig.plan.threading, 9);
    FAIL("expected E_CORRUPT");
  } catch (const Error& e) {
    CHECK(e.code() == "E_CORRUPT");
    CHECK(e.pick() == 1u);
    CHECK(e.tablet() == 2u);
  }
}

TEST_CASE("decode preconditions") {
  FlatPlan plan = encode_bits(Bits(4, true), 2).plan;
  ColorGrid grid = front_grid(simulate(plan));
  CHECK_THROWS_AS(decode_bits(grid, plan.threading, 5), Error);
  std::vector<Threading> dup{{Twist::S, {"c0", "c0", "c2", "c3"}}, codec_threading()};
  try {
    decode_bits(grid, dup, 4);
    FAIL("expected E_CODEC_THREADING");
  } catch (const Error& e) {
    CHECK(e.code() == "E_CODEC_THREADING");
  }
}

TEST_CASE("bit helpers") {
  CHECK(bits_to_string(bits_from_hex("a5")) == "10100101");
  CHECK(bits_to_string(bits_from_bytes("A")) == "01000001");
  CHECK_THROWS_AS(bits_from_hex("xz"), Error);
}
