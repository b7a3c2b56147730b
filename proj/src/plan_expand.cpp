#include <algorithm>
#include <limits>
#include <string>
#include <tuple>
#include <utility>

#include "tabletloom/plan.hpp"

namespace tabletloom {

namespace {

constexpr std::uint64_t kSaturated = std::numeric_limits<std::uint64_t>::max();

std::uint64_t sat_add(std::uint64_t a, std::uint64_t b) { return a > kSaturated - b ? kSaturated : a + b; }

std::uint64_t sat_mul(std::uint64_t a, std::uint64_t b) {
  if (a == 0 || b == 0) return 0;
  return a > kSaturated / b ? kSaturated : a * b;
}

struct Size {
  std::uint64_t picks = 0;
  std::uint64_t flips = 0;
};

Size measure(const std::vector<BodyItem>& body);

Size measure(const BodyItem& item) {
  if (std::holds_alternative<PickLine>(item.node)) return {1, 0};
  if (std::holds_alternative<FlipDirective>(item.node)) return {0, 1};
  const auto& block = std::get<RepeatBlock>(item.node);
  Size inner = measure(block.body);
  return {sat_mul(inner.picks, block.count), sat_mul(inner.flips, block.count)};
}

Size measure(const std::vector<BodyItem>& body) {
  Size total;
  for (const BodyItem& item : body) {
    Size s = measure(item);
    total.picks = sat_add(total.picks, s.picks);
    total.flips = sat_add(total.flips, s.flips);
  }
  return total;
}

std::size_t item_line(const BodyItem& item) {
  return std::visit([](const auto& n) { return n.line; }, item.node);
}

std::vector<std::size_t> flip_set(const FlipDirective& fd) {
  std::vector<std::size_t> out;
  for (const TabletRange& r : fd.ranges) {
    for (std::size_t t = r.first; t <= r.last; ++t) out.push_back(t);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

class Unroller {
 public:
  Unroller(FlatPlan& out, std::size_t tablets) : out_(out), tablets_(tablets) {}

  void body(const std::vector<BodyItem>& items) {
    for (const BodyItem& item : items) {
      if (const auto* pl = std::get_if<PickLine>(&item.node)) {
        PickEvent ev;
        ev.flips_before = std::move(pending_);
        pending_.clear();
        ev.actions.assign(tablets_, Action::I);
        for (const TurnToken& turn : pl->turns) {
          if (turn.ranges.empty()) {
            std::fill(ev.actions.begin(), ev.actions.end(), turn.action);
            continue;
          }
          for (const TabletRange& r : turn.ranges) {
            for (std::size_t t = r.first; t <= r.last; ++t) ev.actions[t] = turn.action;
          }
        }
        out_.picks.push_back(std::move(ev));
      } else if (const auto* fd = std::get_if<FlipDirective>(&item.node)) {
        pending_.push_back(flip_set(*fd));
      } else {
        const auto& block = std::get<RepeatBlock>(item.node);
        for (std::uint64_t i = 0; i < block.count; ++i) body(block.body);
      }
    }
  }

  void finish() { out_.trailing_flips = std::move(pending_); }

 private:
  FlatPlan& out_;
  std::size_t tablets_;
  std::vector<std::vector<std::size_t>> pending_;
};

}  // namespace

FlatPlan expand(const Plan& plan, std::size_t pick_cap) {
  Size running;
  for (const BodyItem& item : plan.body) {
    Size s = measure(item);
    running.picks = sat_add(running.picks, s.picks);
    running.flips = sat_add(running.flips, s.flips);
    if (running.picks > pick_cap || running.flips > pick_cap) {
      std::size_t line = item_line(item);
      std::string what = running.picks > pick_cap ? "picks" : "flip directives";
      std::string message = "expansion exceeds the limit of " + std::to_string(pick_cap) + " " + what;
      throw Error(codes::kRepeatOverflow, message, {Diagnostic{line, 1, codes::kRepeatOverflow, message}})
          .at_line(line);
    }
  }

  FlatPlan out;
  out.tablets = plan.tablets;
  for (const PaletteEntry& e : plan.palette) out.palette[e.name] = e.color;
  out.threading.assign(plan.tablets, Threading{});
  for (const ThreadStatement& st : plan.threads) {
    for (std::size_t t = st.range.first; t <= st.range.last; ++t) out.threading[t] = st.threading;
  }
  out.picks.reserve(static_cast<std::size_t>(running.picks));
  Unroller unroller(out, plan.tablets);
  unroller.body(plan.body);
  unroller.finish();
  return out;
}

FlatPlan compile(std::string_view source, std::size_t pick_cap) {
  ParseResult parsed = parse(source);
  if (!parsed.ok()) {
    const Diagnostic& first = parsed.diagnostics.front();
    std::string message = std::to_string(parsed.diagnostics.size()) + " diagnostic(s) in band plan";
    throw Error(first.code, message, std::move(parsed.diagnostics)).at_line(first.line);
  }
  return expand(*parsed.plan, pick_cap);
}

std::string format_errors(std::vector<Diagnostic> diagnostics, std::string_view source) {
  std::sort(diagnostics.begin(), diagnostics.end(), [](const Diagnostic& a, const Diagnostic& b) {
    return std::tie(a.line, a.column, a.code) < std::tie(b.line, b.column, b.code);
  });
  std::vector<std::string_view> lines;
  std::size_t pos = 0;
  while (true) {
    std::size_t nl = source.find('\n', pos);
    std::string_view line = source.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    if (nl == std::string_view::npos) break;
    pos = nl + 1;
  }

  std::string out;
  for (const Diagnostic& d : diagnostics) {
    out += std::to_string(d.line) + ":" + std::to_string(d.column) + " " + d.code + " " + d.message + "\n";
    std::string_view text = d.line >= 1 && d.line <= lines.size() ? lines[d.line - 1] : std::string_view{};
    out.append(text);
    out += '\n';
    for (std::size_t i = 0; i + 1 < d.column; ++i) out += i < text.size() && text[i] == '\t' ? '\t' : ' ';
    out += "^\n";
  }
  return out;
}

namespace {

std::string range_text(std::size_t first, std::size_t last) {
  if (first == last) return std::to_string(first + 1);
  return std::to_string(first + 1) + "-" + std::to_string(last + 1);
}

// Sorted, deduplicated 0-based indices to "1-3,5".
std::string range_list_text(const std::vector<std::size_t>& tablets) {
  std::string out;
  std::size_t i = 0;
  while (i < tablets.size()) {
    std::size_t j = i;
    while (j + 1 < tablets.size() && tablets[j + 1] == tablets[j] + 1) ++j;
    if (!out.empty()) out += ',';
    out += range_text(tablets[i], tablets[j]);
    i = j + 1;
  }
  return out;
}

std::string pick_line_text(const std::vector<Action>& actions) {
  if (!actions.empty() &&
      std::all_of(actions.begin(), actions.end(), [&](Action a) { return a == actions.front(); })) {
    return std::string(1, static_cast<char>(actions.front()));
  }
  std::string out;
  std::size_t i = 0;
  while (i < actions.size()) {
    std::size_t j = i;
    while (j + 1 < actions.size() && actions[j + 1] == actions[i]) ++j;
    if (actions[i] != Action::I) {
      if (!out.empty()) out += ' ';
      out += range_text(i, j);
      out += static_cast<char>(actions[i]);
    }
    i = j + 1;
  }
  return out.empty() ? "I" : out;
}

}  // namespace

std::string pretty_print(const FlatPlan& plan, const std::vector<std::string>& header) {
  std::string out;
  for (const std::string& h : header) out += "# " + h + "\n";
  out += "tablets " + std::to_string(plan.tablets) + "\n";
  for (const auto& [name, rgb] : plan.palette) out += "palette " + name + " " + to_hex(rgb) + "\n";
  std::size_t i = 0;
  while (i < plan.threading.size()) {
    std::size_t j = i;
    while (j + 1 < plan.threading.size() && plan.threading[j + 1] == plan.threading[i]) ++j;
    const Threading& th = plan.threading[i];
    out += "thread " + range_text(i, j) + " " + static_cast<char>(th.sz);
    for (const std::string& c : th.colors) out += " " + c;
    out += "\n";
    i = j + 1;
  }
  auto flips = [&out](const std::vector<std::vector<std::size_t>>& directives) {
    for (const auto& d : directives) out += "flip " + range_list_text(d) + "\n";
  };
  for (const PickEvent& ev : plan.picks) {
    flips(ev.flips_before);
    out += pick_line_text(ev.actions) + "\n";
  }
  flips(plan.trailing_flips);
  return out;
}

}  // namespace tabletloom
