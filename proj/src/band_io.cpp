#include "tabletloom/band_io.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>

#include <json.hpp>

namespace tabletloom {

using nlohmann::json;

namespace {

std::string slant_text(Slant s) { return std::string(1, static_cast<char>(s)); }

bool is_blank(std::string_view s) {
  return std::all_of(s.begin(), s.end(), [](char c) { return c == ' ' || c == '\t' || c == '\r'; });
}

std::vector<std::string> split_ws(std::string_view line) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    std::size_t start = i;
    while (i < line.size() && !(line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    if (i > start) out.emplace_back(line.substr(start, i - start));
  }
  return out;
}

[[noreturn]] void bad_drawdown(const std::string& why) {
  throw Error("E_BAD_DRAWDOWN", "not a drawdown document: " + why);
}

}  // namespace

std::string export_drawdown(const Drawdown& drawdown) {
  json palette = json::object();
  for (const auto& [name, rgb] : drawdown.palette) palette[name] = to_hex(rgb);

  json threading = json::array();
  for (const Threading& th : drawdown.threading) {
    threading.push_back({{"colors", th.colors}, {"sz", std::string(1, static_cast<char>(th.sz))}});
  }

  json cells = json::array();
  for (const auto& row : drawdown.cells) {
    json r = json::array();
    for (const Cell& c : row) {
      r.push_back({{"b", c.back},
                   {"f", c.front},
                   {"h", c.hole.value()},
                   {"q", c.twist_after},
                   {"r", c.rotation_after},
                   {"s", slant_text(c.slant)}});
    }
    cells.push_back(std::move(r));
  }

  // nlohmann::json objects are std::map backed, so keys serialise sorted.
  json doc = {{"cells", std::move(cells)},
              {"palette", std::move(palette)},
              {"picks", drawdown.picks},
              {"tablets", drawdown.tablets},
              {"threading", std::move(threading)},
              {"version", 1}};
  return doc.dump();
}

Drawdown import_drawdown(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::exception& e) {
    bad_drawdown(e.what());
  }
  Drawdown d;
  try {
    if (doc.at("version").get<int>() != 1) bad_drawdown("unsupported version");
    d.tablets = doc.at("tablets").get<std::size_t>();
    d.picks = doc.at("picks").get<std::size_t>();
    for (const auto& [name, hex] : doc.at("palette").items()) {
      Rgb rgb;
      if (!parse_hex_color(hex.get<std::string>(), rgb)) bad_drawdown("bad colour for '" + name + "'");
      d.palette[name] = rgb;
    }
    for (const json& th : doc.at("threading")) {
      Threading t;
      std::string sz = th.at("sz").get<std::string>();
      if (sz != "S" && sz != "Z") bad_drawdown("threading direction must be S or Z");
      t.sz = sz == "S" ? Twist::S : Twist::Z;
      const json& colors = th.at("colors");
      if (!colors.is_array() || colors.size() != 4) bad_drawdown("threading needs 4 colours");
      for (std::size_t h = 0; h < 4; ++h) t.colors[h] = colors[h].get<std::string>();
      d.threading.push_back(std::move(t));
    }
    for (const json& row : doc.at("cells")) {
      std::vector<Cell> cells;
      for (const json& c : row) {
        Cell cell;
        cell.front = c.at("f").get<std::string>();
        cell.back = c.at("b").get<std::string>();
        int hole = c.at("h").get<int>();
        int rotation = c.at("r").get<int>();
        if (hole < 0 || hole > 3 || rotation < 0 || rotation > 3) bad_drawdown("hole/rotation out of range");
        cell.hole = HoleIndex(hole);
        cell.rotation_after = rotation;
        cell.twist_after = c.at("q").get<std::int64_t>();
        std::string s = c.at("s").get<std::string>();
        if (s == "/") {
          cell.slant = Slant::Rising;
        } else if (s == "\\") {
          cell.slant = Slant::Falling;
        } else if (s == "|") {
          cell.slant = Slant::Flat;
        } else {
          bad_drawdown("unknown slant '" + s + "'");
        }
        cells.push_back(std::move(cell));
      }
      if (cells.size() != d.tablets) bad_drawdown("ragged cell row");
      d.cells.push_back(std::move(cells));
    }
  } catch (const json::exception& e) {
    bad_drawdown(e.what());
  }
  if (d.cells.size() != d.picks || d.threading.size() != d.tablets) bad_drawdown("dimension mismatch");
  for (const auto& row : d.cells) {
    for (const Cell& c : row) {
      if (!d.palette.contains(c.front) || !d.palette.contains(c.back)) bad_drawdown("cell colour not in palette");
    }
  }
  return d;
}

ColorGrid import_grid(std::string_view text) {
  ColorGrid grid;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    ++line_no;
    pos = nl == std::string_view::npos ? text.size() : nl + 1;
    if (is_blank(line)) continue;
    std::vector<std::string> row = split_ws(line);
    if (!grid.empty() && row.size() != grid.front().size()) {
      throw Error("E_RAGGED_ROW", "grid line " + std::to_string(line_no) + " has " + std::to_string(row.size()) +
                                      " colours, expected " + std::to_string(grid.front().size()))
          .at_line(line_no);
    }
    grid.push_back(std::move(row));
  }
  if (grid.empty()) throw Error("E_EMPTY_GRID", "grid has no rows");
  return grid;
}

std::string format_grid(const ColorGrid& grid) {
  std::string out;
  for (const auto& row : grid) {
    for (std::size_t t = 0; t < row.size(); ++t) {
      if (t) out += ' ';
      out += row[t];
    }
    out += '\n';
  }
  return out;
}

ColorGrid front_grid(const Drawdown& drawdown) {
  ColorGrid grid;
  grid.reserve(drawdown.picks);
  for (const auto& row : drawdown.cells) {
    std::vector<std::string> colours;
    colours.reserve(row.size());
    for (const Cell& c : row) colours.push_back(c.front);
    grid.push_back(std::move(colours));
  }
  return grid;
}

CatalogEntry make_catalog_entry(std::string id, std::string source) {
  CatalogEntry entry;
  entry.id = std::move(id);
  entry.title = entry.id;
  std::istringstream in(source);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    auto field = [&line](std::string_view key, std::string& out) {
      std::string prefix = "# " + std::string(key) + ":";
      if (line.rfind(prefix, 0) != 0) return;
      std::string value = line.substr(prefix.size());
      std::size_t start = value.find_first_not_of(' ');
      out = start == std::string::npos ? "" : value.substr(start);
    };
    field("title", entry.title);
    field("provenance", entry.provenance);
  }
  entry.source = std::move(source);
  return entry;
}

std::vector<CatalogEntry> load_catalog(const std::filesystem::path& directory) {
  std::error_code ec;
  std::filesystem::directory_iterator it(directory, ec);
  if (ec) throw Error("E_IO", "cannot read catalog directory " + directory.string() + ": " + ec.message());

  std::vector<std::filesystem::path> files;
  for (const auto& entry : it) {
    if (entry.is_regular_file() && entry.path().extension() == ".band") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end(),
            [](const auto& a, const auto& b) { return a.stem().string() < b.stem().string(); });

  std::vector<CatalogEntry> out;
  for (const auto& path : files) {
    std::string id = path.stem().string();
    CatalogEntry entry = make_catalog_entry(id, read_input(path.string()));
    try {
      (void)compile(entry.source);
    } catch (const Error& e) {
      std::vector<Diagnostic> diags = e.diagnostics();
      throw Error("E_CATALOG_PARSE", "catalog entry '" + id + "' does not compile:\n" +
                                         format_errors(diags, entry.source),
                  std::move(diags));
    }
    out.push_back(std::move(entry));
  }
  return out;
}

std::filesystem::path default_catalog_dir() {
  if (const char* env = std::getenv("TABLETLOOM_EXAMPLES"); env && *env) return env;
  return TABLETLOOM_CATALOG_DIR;
}

std::string read_input(const std::string& path) {
  if (path == "-") {
    return std::string(std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>());
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("E_IO", "cannot open '" + path + "'");
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

}  // namespace tabletloom
