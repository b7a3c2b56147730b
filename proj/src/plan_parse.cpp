#include <algorithm>
#include <charconv>
#include <limits>
#include <string>
#include <tuple>
#include <utility>

#include "tabletloom/plan.hpp"

namespace tabletloom {

namespace {

// Upper bound on `tablets N`; keeps per-pick rows a sane size.
constexpr std::uint64_t kMaxTablets = 4096;

struct Token {
  std::string_view text;
  std::size_t column = 1;
};

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\v' || c == '\f'; }

// Splits a line into tokens. `#` starts a comment wherever it appears, except
// as the colour operand of a `palette` statement.
std::vector<Token> tokenize(std::string_view line) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && is_space(line[i])) ++i;
    if (i >= line.size()) break;
    std::size_t start = i;
    bool colour_slot = out.size() == 2 && out[0].text == "palette" && line[i] == '#';
    while (i < line.size() && !is_space(line[i])) {
      if (line[i] == '#' && !(colour_slot && i == start)) break;
      ++i;
    }
    if (i > start) out.push_back(Token{line.substr(start, i - start), start + 1});
    if (i < line.size() && line[i] == '#' && !(colour_slot && i == start)) break;
  }
  return out;
}

enum class NumberStatus { kOk, kSyntax, kOverflow };

NumberStatus parse_number(std::string_view s, std::uint64_t& out) {
  if (s.empty()) return NumberStatus::kSyntax;
  for (char c : s) {
    if (c < '0' || c > '9') return NumberStatus::kSyntax;
  }
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  if (ec == std::errc::result_out_of_range) return NumberStatus::kOverflow;
  if (ec != std::errc() || ptr != s.data() + s.size()) return NumberStatus::kSyntax;
  return NumberStatus::kOk;
}

bool valid_name(std::string_view s) {
  if (s.empty()) return false;
  auto alpha = [](char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_'; };
  auto digit = [](char c) { return c >= '0' && c <= '9'; };
  if (!alpha(s[0])) return false;
  return std::all_of(s.begin() + 1, s.end(), [&](char c) { return alpha(c) || digit(c) || c == '-'; });
}

struct ColourRef {
  std::string name;
  std::size_t line;
  std::size_t column;
};

class Parser {
 public:
  explicit Parser(std::string_view source) : source_(source) {}

  ParseResult run() {
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= source_.size()) {
      std::size_t nl = source_.find('\n', pos);
      std::string_view line = source_.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
      ++line_no;
      statement(line_no, tokenize(line), line.size());
      if (nl == std::string_view::npos) break;
      pos = nl + 1;
    }
    finish();

    std::sort(diags_.begin(), diags_.end(), [](const Diagnostic& a, const Diagnostic& b) {
      return std::tie(a.line, a.column, a.code) < std::tie(b.line, b.column, b.code);
    });
    ParseResult result;
    result.diagnostics = std::move(diags_);
    if (result.diagnostics.empty()) result.plan = std::move(plan_);
    return result;
  }

 private:
  void error(std::size_t line, std::size_t column, const char* code, std::string message) {
    diags_.push_back(Diagnostic{line, column, code, std::move(message)});
  }

  std::vector<BodyItem>& current_body() { return open_.empty() ? plan_.body : open_.back().body; }

  // Reports E_TABLETS_MISSING once; returns false when the count is unknown.
  bool need_tablets(std::size_t line, const Token& at) {
    if (tablets_known_) return true;
    if (!reported_missing_tablets_ && !tablets_seen_) {
      error(line, at.column, codes::kTabletsMissing,
            "'" + std::string(at.text) + "' before the tablet count is declared (add 'tablets N' first)");
      reported_missing_tablets_ = true;
    }
    return false;
  }

  bool top_level_only(std::size_t line, const Token& kw) {
    if (open_.empty()) return true;
    error(line, kw.column, codes::kBadToken, "'" + std::string(kw.text) + "' is not allowed inside a repeat block");
    return false;
  }

  // Parses `a` or `a-b` (1-based) into a 0-based range.
  bool range(std::size_t line, std::size_t column, std::string_view text, TabletRange& out) {
    std::size_t dash = text.find('-');
    std::string_view lo_text = text.substr(0, dash);
    std::string_view hi_text = dash == std::string_view::npos ? lo_text : text.substr(dash + 1);
    std::uint64_t lo = 0;
    std::uint64_t hi = 0;
    NumberStatus a = parse_number(lo_text, lo);
    NumberStatus b = parse_number(hi_text, hi);
    if (a == NumberStatus::kSyntax || b == NumberStatus::kSyntax) {
      error(line, column, codes::kBadToken, "malformed tablet range '" + std::string(text) + "'");
      return false;
    }
    if (a == NumberStatus::kOverflow || b == NumberStatus::kOverflow || lo == 0 || hi < lo || hi > plan_.tablets) {
      error(line, column, codes::kBadRange,
            "tablet range '" + std::string(text) + "' is outside 1-" + std::to_string(plan_.tablets) +
                (hi < lo ? " or reversed" : ""));
      return false;
    }
    out = TabletRange{static_cast<std::size_t>(lo - 1), static_cast<std::size_t>(hi - 1)};
    return true;
  }

  // Comma-joined ranges. Marks tablets in `seen`; any repeat is E_OVERLAP.
  bool range_list(std::size_t line, const Token& tok, std::string_view text, std::vector<TabletRange>& out,
                  std::vector<char>& seen) {
    std::size_t offset = 0;
    bool ok = true;
    while (true) {
      std::size_t comma = text.find(',', offset);
      std::string_view part = text.substr(offset, comma == std::string_view::npos ? std::string_view::npos : comma - offset);
      std::size_t col = tok.column + offset;
      TabletRange r;
      if (part.empty()) {
        error(line, col, codes::kBadToken, "empty entry in tablet list '" + std::string(text) + "'");
        ok = false;
      } else if (range(line, col, part, r)) {
        bool clash = false;
        for (std::size_t t = r.first; t <= r.last; ++t) {
          if (seen[t]) clash = true;
          seen[t] = 1;
        }
        if (clash) {
          error(line, col, codes::kOverlap, "tablet(s) in '" + std::string(part) + "' already assigned on this line");
          ok = false;
        }
        out.push_back(r);
      } else {
        ok = false;
      }
      if (comma == std::string_view::npos) break;
      offset = comma + 1;
    }
    return ok;
  }

  void statement(std::size_t line, const std::vector<Token>& toks, std::size_t line_length) {
    if (toks.empty()) return;
    const Token& kw = toks[0];
    if (kw.text == "tablets") return tablets(line, toks, line_length);
    if (kw.text == "palette") return palette(line, toks, line_length);
    if (kw.text == "thread") return thread(line, toks, line_length);
    if (kw.text == "flip") return flip(line, toks, line_length);
    if (kw.text == "repeat") return repeat(line, toks, line_length);
    if (kw.text == "end") return end(line, toks);
    pick(line, toks);
  }

  bool arity(std::size_t line, const std::vector<Token>& toks, std::size_t want, std::size_t line_length,
             const char* usage) {
    if (toks.size() == want) return true;
    std::size_t col = toks.size() > want ? toks[want].column : line_length + 1;
    error(line, col, codes::kBadToken,
          std::string(toks.size() > want ? "unexpected token" : "missing operand") + ", expected '" + usage + "'");
    return false;
  }

  void tablets(std::size_t line, const std::vector<Token>& toks, std::size_t line_length) {
    if (!top_level_only(line, toks[0])) return;
    if (tablets_seen_) {
      error(line, toks[0].column, codes::kBadToken,
            "tablet count already declared on line " + std::to_string(tablets_line_));
      return;
    }
    tablets_seen_ = true;
    tablets_line_ = line;
    if (!arity(line, toks, 2, line_length, "tablets N")) return;
    std::uint64_t n = 0;
    NumberStatus st = parse_number(toks[1].text, n);
    if (st == NumberStatus::kSyntax) {
      error(line, toks[1].column, codes::kBadToken, "tablet count '" + std::string(toks[1].text) + "' is not a number");
      return;
    }
    if (st == NumberStatus::kOverflow || n == 0 || n > kMaxTablets) {
      error(line, toks[1].column, codes::kBadRange,
            "tablet count must be between 1 and " + std::to_string(kMaxTablets));
      return;
    }
    plan_.tablets = static_cast<std::size_t>(n);
    tablets_known_ = true;
    tablets_column_ = toks[1].column;
    threaded_.assign(plan_.tablets, 0);
  }

  void palette(std::size_t line, const std::vector<Token>& toks, std::size_t line_length) {
    if (!top_level_only(line, toks[0])) return;
    if (!arity(line, toks, 3, line_length, "palette NAME #RRGGBB")) return;
    if (!valid_name(toks[1].text)) {
      error(line, toks[1].column, codes::kBadToken, "invalid colour name '" + std::string(toks[1].text) + "'");
      return;
    }
    Rgb rgb;
    if (!parse_hex_color(toks[2].text, rgb)) {
      error(line, toks[2].column, codes::kBadToken,
            "colour value '" + std::string(toks[2].text) + "' is not of the form #RRGGBB");
      return;
    }
    std::string name(toks[1].text);
    for (const PaletteEntry& e : plan_.palette) {
      if (e.name == name) {
        error(line, toks[1].column, codes::kBadToken,
              "colour '" + name + "' already defined on line " + std::to_string(e.line));
        return;
      }
    }
    plan_.palette.push_back(PaletteEntry{std::move(name), rgb, line});
  }

  void thread(std::size_t line, const std::vector<Token>& toks, std::size_t line_length) {
    if (!top_level_only(line, toks[0])) return;
    if (!need_tablets(line, toks[0])) return;
    if (!arity(line, toks, 7, line_length, "thread RANGE S|Z cA cB cC cD")) return;
    ThreadStatement st;
    st.line = line;
    bool ok = true;
    if (toks[1].text.find(',') != std::string_view::npos) {
      error(line, toks[1].column, codes::kBadToken, "thread takes a single range, not a list");
      ok = false;
    } else if (!range(line, toks[1].column, toks[1].text, st.range)) {
      ok = false;
    }
    if (toks[2].text == "S") {
      st.threading.sz = Twist::S;
    } else if (toks[2].text == "Z") {
      st.threading.sz = Twist::Z;
    } else {
      error(line, toks[2].column, codes::kBadToken, "threading direction must be S or Z, got '" +
                                                        std::string(toks[2].text) + "'");
      ok = false;
    }
    for (std::size_t h = 0; h < 4; ++h) {
      const Token& c = toks[3 + h];
      if (!valid_name(c.text)) {
        error(line, c.column, codes::kBadToken, "invalid colour name '" + std::string(c.text) + "'");
        ok = false;
        continue;
      }
      st.threading.colors[h] = std::string(c.text);
      colour_refs_.push_back(ColourRef{std::string(c.text), line, c.column});
    }
    if (!ok) return;
    bool dup = false;
    for (std::size_t t = st.range.first; t <= st.range.last; ++t) {
      if (threaded_[t]) dup = true;
      threaded_[t] = 1;
    }
    if (dup) {
      error(line, toks[1].column, codes::kThreadDup,
            "tablet(s) in '" + std::string(toks[1].text) + "' are already threaded");
      return;
    }
    plan_.threads.push_back(std::move(st));
  }

  void flip(std::size_t line, const std::vector<Token>& toks, std::size_t line_length) {
    if (!need_tablets(line, toks[0])) return;
    if (!arity(line, toks, 2, line_length, "flip RANGELIST")) return;
    FlipDirective fd;
    fd.line = line;
    std::vector<char> seen(plan_.tablets, 0);
    if (!range_list(line, toks[1], toks[1].text, fd.ranges, seen)) return;
    current_body().push_back(BodyItem{std::move(fd)});
  }

  void repeat(std::size_t line, const std::vector<Token>& toks, std::size_t line_length) {
    RepeatBlock block;
    block.line = line;
    repeat_columns_.push_back(toks[0].column);
    if (arity(line, toks, 2, line_length, "repeat N")) {
      std::uint64_t n = 0;
      NumberStatus st = parse_number(toks[1].text, n);
      if (st == NumberStatus::kSyntax) {
        error(line, toks[1].column, codes::kBadToken, "repeat count '" + std::string(toks[1].text) + "' is not a number");
      } else if (st == NumberStatus::kOverflow || n == 0) {
        error(line, toks[1].column, codes::kBadRange, "repeat count must be at least 1");
      } else {
        block.count = n;
      }
    }
    // The block is opened even when the header is bad so its `end` matches.
    open_.push_back(std::move(block));
  }

  void end(std::size_t line, const std::vector<Token>& toks) {
    if (toks.size() > 1) {
      error(line, toks[1].column, codes::kBadToken, "unexpected token after 'end'");
    }
    if (open_.empty()) {
      error(line, toks[0].column, codes::kBadToken, "'end' without a matching 'repeat'");
      return;
    }
    RepeatBlock block = std::move(open_.back());
    open_.pop_back();
    repeat_columns_.pop_back();
    current_body().push_back(BodyItem{std::move(block)});
  }

  void pick(std::size_t line, const std::vector<Token>& toks) {
    if (!need_tablets(line, toks[0])) return;
    PickLine pl;
    pl.line = line;
    std::vector<char> seen(plan_.tablets, 0);
    bool ok = true;
    for (const Token& tok : toks) {
      char last = tok.text.back();
      TurnToken turn;
      turn.column = tok.column;
      if (last == 'F') {
        turn.action = Action::F;
      } else if (last == 'B') {
        turn.action = Action::B;
      } else if (last == 'I') {
        turn.action = Action::I;
      } else {
        error(line, tok.column, codes::kBadToken,
              "unrecognised token '" + std::string(tok.text) + "' (expected [RANGES]F, B or I)");
        ok = false;
        continue;
      }
      std::string_view ranges = tok.text.substr(0, tok.text.size() - 1);
      if (ranges.empty()) {
        bool clash = std::any_of(seen.begin(), seen.end(), [](char c) { return c != 0; });
        std::fill(seen.begin(), seen.end(), 1);
        if (clash) {
          error(line, tok.column, codes::kOverlap, "'" + std::string(tok.text) +
                                                       "' addresses every tablet but some are already assigned");
          ok = false;
        }
      } else if (!range_list(line, tok, ranges, turn.ranges, seen)) {
        ok = false;
      }
      pl.turns.push_back(std::move(turn));
    }
    if (ok) current_body().push_back(BodyItem{std::move(pl)});
  }

  void finish() {
    for (std::size_t i = 0; i < open_.size(); ++i) {
      error(open_[i].line, repeat_columns_[i], codes::kUnclosedRepeat, "'repeat' is never closed by 'end'");
    }
    if (!tablets_seen_ && !reported_missing_tablets_) {
      error(1, 1, codes::kTabletsMissing, "no 'tablets N' statement");
    }
    if (tablets_known_) {
      std::size_t missing = 0;
      std::size_t first_missing = 0;
      for (std::size_t t = 0; t < threaded_.size(); ++t) {
        if (!threaded_[t]) {
          if (missing == 0) first_missing = t;
          ++missing;
        }
      }
      if (missing > 0) {
        error(tablets_line_, tablets_column_, codes::kThreadMissing,
              std::to_string(missing) + " tablet(s) have no 'thread' statement, first is tablet " +
                  std::to_string(first_missing + 1));
      }
    }
    for (const ColourRef& ref : colour_refs_) {
      bool known = std::any_of(plan_.palette.begin(), plan_.palette.end(),
                               [&](const PaletteEntry& e) { return e.name == ref.name; });
      if (!known) {
        error(ref.line, ref.column, codes::kUnknownColor, "colour '" + ref.name + "' is not in the palette");
      }
    }
  }

  std::string_view source_;
  Plan plan_;
  std::vector<Diagnostic> diags_;
  std::vector<RepeatBlock> open_;
  std::vector<std::size_t> repeat_columns_;
  std::vector<char> threaded_;
  std::vector<ColourRef> colour_refs_;
  bool tablets_seen_ = false;
  bool tablets_known_ = false;
  bool reported_missing_tablets_ = false;
  std::size_t tablets_line_ = 1;
  std::size_t tablets_column_ = 1;
};

}  // namespace

ParseResult parse(std::string_view source) { return Parser(source).run(); }

}  // namespace tabletloom
