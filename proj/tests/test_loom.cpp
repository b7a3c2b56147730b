#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "support/reference.hpp"
#include "tabletloom/loom.hpp"
#include "tabletloom/plan.hpp"

using namespace tabletloom;
using tabletloom::testing::random_plan;
using tabletloom::testing::reference_weave;

namespace {

Palette rw_palette() {
  Palette p;
  parse_hex_color("#cc0000", p["r"]);
  parse_hex_color("#ffffff", p["w"]);
  return p;
}

Threading rrww(Twist sz = Twist::S) { return Threading{sz, {"r", "r", "w", "w"}}; }

FlatPlan single_column(const std::vector<Action>& actions, Threading th = rrww()) {
  FlatPlan plan;
  plan.tablets = 1;
  plan.palette = rw_palette();
  plan.palette["a"] = {1, 1, 1};
  plan.palette["b"] = {2, 2, 2};
  plan.palette["c"] = {3, 3, 3};
  plan.palette["d"] = {4, 4, 4};
  plan.threading = {std::move(th)};
  for (Action a : actions) plan.picks.push_back(PickEvent{{}, {a}});
  return plan;
}

std::string code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return "";
}

}  // namespace

TEST_CASE("new_band starts every tablet at home") {
  WeaveState s = new_band({rrww()}, rw_palette());
  REQUIRE(s.size() == 1);
  CHECK(s.tablets()[0] == TabletState{0, false, 0});
  CHECK(s.picks() == 0);
}

TEST_CASE("new_band rejects empty and unresolved threading") {
  CHECK(code_of([] { new_band({}, rw_palette()); }) == "E_NO_TABLETS");
  Threading bad{Twist::S, {"r", "r", "w", "x"}};
  CHECK(code_of([&] { new_band({rrww(), bad}, rw_palette()); }) == "E_UNKNOWN_COLOR");
  try {
    new_band({rrww(), bad}, rw_palette());
  } catch (const Error& e) {
    CHECK(e.tablet() == 1u);
    CHECK(std::string(e.what()).find("hole D") != std::string::npos);
  }
}

TEST_CASE("apply_flips negates rotation and is an involution") {
  WeaveState s = new_band({rrww()}, rw_palette());
  std::vector<std::size_t> first{0};
  WeaveState flipped = apply_flips(s, first);
  CHECK(flipped.tablets()[0] == TabletState{0, true, 0});

  std::vector<Action> f{Action::F};
  WeaveState r1 = step_pick(s, f).state;
  REQUIRE(r1.tablets()[0].rotation == 1);
  WeaveState r1f = apply_flips(r1, first);
  CHECK(r1f.tablets()[0].rotation == 3);
  CHECK(r1f.tablets()[0].flipped);
  CHECK(r1f.tablets()[0].twist == 1);
  CHECK(apply_flips(r1f, first) == r1);

  std::vector<std::size_t> twice{0, 0};
  CHECK(apply_flips(r1, twice) == r1);

  std::vector<std::size_t> out_of_range{1};
  CHECK(code_of([&] { apply_flips(s, out_of_range); }) == "E_BAD_INDEX");
}

TEST_CASE("step_pick from home, forward") {
  WeaveState s = new_band({rrww()}, rw_palette());
  std::vector<Action> f{Action::F};
  PickResult r = step_pick(s, f);
  REQUIRE(r.cells.size() == 1);
  const Cell& c = r.cells[0];
  CHECK(c.front == "r");
  CHECK(c.back == "w");
  CHECK(c.hole.label() == 'A');
  CHECK(c.slant == Slant::Falling);
  CHECK(c.rotation_after == 1);
  CHECK(c.twist_after == 1);
}

TEST_CASE("step_pick from home, backward") {
  WeaveState s = new_band({rrww()}, rw_palette());
  std::vector<Action> b{Action::B};
  const Cell c = step_pick(s, b).cells[0];
  CHECK(c.hole.label() == 'D');
  CHECK(c.front == "w");
  CHECK(c.back == "r");
  CHECK(c.slant == Slant::Rising);
  CHECK(c.rotation_after == 3);
  CHECK(c.twist_after == -1);
}

TEST_CASE("idle shows the current hole flat and keeps state") {
  WeaveState s = new_band({rrww()}, rw_palette());
  std::vector<Action> i{Action::I};
  PickResult r = step_pick(s, i);
  CHECK(r.cells[0].slant == Slant::Flat);
  CHECK(r.cells[0].hole.label() == 'A');
  CHECK(r.state.tablets() == s.tablets());
  CHECK(r.state.picks() == 1);
}

TEST_CASE("Z threading slants the other way") {
  WeaveState s = new_band({rrww(Twist::Z)}, rw_palette());
  std::vector<Action> f{Action::F};
  std::vector<Action> b{Action::B};
  CHECK(step_pick(s, f).cells[0].slant == Slant::Rising);
  CHECK(step_pick(s, b).cells[0].slant == Slant::Falling);
}

TEST_CASE("step_pick rejects the wrong row length") {
  WeaveState s = new_band({rrww(), rrww()}, rw_palette());
  std::vector<Action> one{Action::F};
  CHECK(code_of([&] { step_pick(s, one); }) == "E_ROW_ARITY");
}

TEST_CASE("four forward turns show A, B, C, D and return home") {
  Drawdown d = simulate(single_column({Action::F, Action::F, Action::F, Action::F},
                                      Threading{Twist::S, {"a", "b", "c", "d"}}));
  std::string holes;
  for (const auto& row : d.cells) holes += row[0].hole.label();
  CHECK(holes == "ABCD");
  CHECK(d.cells[3][0].rotation_after == 0);
  CHECK(d.cells[0][0].front == "a");
  CHECK(d.cells[3][0].front == "d");
}

TEST_CASE("identical threading gives identical columns cycling r,r,w,w") {
  FlatPlan plan;
  plan.tablets = 8;
  plan.palette = rw_palette();
  plan.threading.assign(8, rrww());
  for (int p = 0; p < 16; ++p) plan.picks.push_back(PickEvent{{}, std::vector<Action>(8, Action::F)});
  Drawdown d = simulate(plan);
  REQUIRE(d.picks == 16);
  REQUIRE(d.tablets == 8);
  const char* cycle[4] = {"r", "r", "w", "w"};
  for (std::size_t p = 0; p < 16; ++p) {
    for (std::size_t t = 0; t < 8; ++t) {
      CHECK(d.cells[p][t].front == cycle[p % 4]);
      CHECK(d.cells[p][t] == d.cells[p][0]);
    }
  }
}

TEST_CASE("empty plan simulates to an empty drawdown") {
  Drawdown d = simulate(single_column({}));
  CHECK(d.picks == 0);
  CHECK(d.cells.empty());
  CHECK(d.tablets == 1);
}

TEST_CASE("flip at home then four forward turns reverses the hole order") {
  FlatPlan plan = single_column({Action::F, Action::F, Action::F, Action::F},
                                Threading{Twist::S, {"a", "b", "c", "d"}});
  FlatPlan unflipped = plan;
  plan.picks[0].flips_before = {{0}};
  Drawdown d = simulate(plan);
  Drawdown u = simulate(unflipped);
  std::string holes;
  std::string colours;
  for (std::size_t p = 0; p < 4; ++p) {
    holes += d.cells[p][0].hole.label();
    colours += d.cells[p][0].front;
    CHECK(d.cells[p][0].slant == mirror(u.cells[p][0].slant));
    CHECK(d.cells[p][0].slant == Slant::Rising);
  }
  CHECK(holes == "ADCB");
  CHECK(colours == "adcb");
}

TEST_CASE("twist profile of 4F then 4B") {
  Drawdown d = simulate(single_column({Action::F, Action::F, Action::F, Action::F, Action::B, Action::B, Action::B,
                                       Action::B}));
  TwistProfile p = twist_profile(d);
  CHECK(p.series[0] == std::vector<std::int64_t>{1, 2, 3, 4, 3, 2, 1, 0});
  CHECK(p.max_abs == 4);
  CHECK_FALSE(p.first_warning.has_value());
}

TEST_CASE("sixteen forward turns trip the default warning at pick 9") {
  Drawdown d = simulate(single_column(std::vector<Action>(16, Action::F)));
  TwistProfile p = twist_profile(d);
  CHECK(p.max_abs == 16);
  REQUIRE(p.first_warning.has_value());
  CHECK(*p.first_warning == 9);
  CHECK(*p.first_warning_per_tablet[0] == 9);

  TwistProfile loose = twist_profile(d, 20);
  CHECK_FALSE(loose.first_warning.has_value());
}

TEST_CASE("backward twist counts toward the warning too") {
  Drawdown d = simulate(single_column(std::vector<Action>(10, Action::B)));
  TwistProfile p = twist_profile(d);
  CHECK(p.max_abs == 10);
  CHECK(*p.first_warning == 9);
}

TEST_CASE("palindromic turn sequences end untwisted") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<Action> half;
    for (int i = 0; i < 10; ++i) half.push_back(rng() % 2 ? Action::F : Action::B);
    std::vector<Action> seq = half;
    for (auto it = half.rbegin(); it != half.rend(); ++it) seq.push_back(*it == Action::F ? Action::B : Action::F);
    Drawdown d = simulate(single_column(seq));
    CHECK(d.cells.back()[0].twist_after == 0);
  }
}

TEST_CASE("random plans agree with the reference tablet model") {
  std::mt19937_64 rng(20240611);
  for (int trial = 0; trial < 300; ++trial) {
    FlatPlan plan = random_plan(rng);
    Drawdown d = simulate(plan);
    auto ref = reference_weave(plan);
    REQUIRE(d.picks == plan.picks.size());
    for (std::size_t p = 0; p < d.picks; ++p) {
      REQUIRE(d.cells[p].size() == plan.tablets);
      for (std::size_t t = 0; t < plan.tablets; ++t) {
        const Cell& c = d.cells[p][t];
        const auto& r = ref[p][t];
        CHECK(c.hole.value() == r.front_hole);
        CHECK(c.front == plan.threading[t].colors[static_cast<std::size_t>(r.front_hole)]);
        CHECK(c.back == plan.threading[t].colors[static_cast<std::size_t>(r.back_hole)]);
        CHECK(static_cast<char>(c.slant) == r.slant);
        CHECK(c.twist_after == r.twist);
        CHECK(c.rotation_after == r.rotation);
        CHECK(c.rotation_after >= 0);
        CHECK(c.rotation_after <= 3);
      }
    }
    CHECK(simulate(plan) == d);
  }
}

TEST_CASE("a forward pick followed by a backward pick repeats the hole") {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 200; ++trial) {
    FlatPlan plan = random_plan(rng, {4, 12, true, true, 0});
    std::size_t t = rng() % plan.tablets;
    Action first = rng() % 2 ? Action::F : Action::B;
    Action second = first == Action::F ? Action::B : Action::F;
    std::vector<Action> a(plan.tablets, Action::I);
    std::vector<Action> b(plan.tablets, Action::I);
    a[t] = first;
    b[t] = second;
    plan.picks.push_back(PickEvent{{}, a});
    plan.picks.push_back(PickEvent{{}, b});
    plan.trailing_flips.clear();
    Drawdown d = simulate(plan);
    CHECK(d.cells[d.picks - 2][t].hole == d.cells[d.picks - 1][t].hole);
  }
}
