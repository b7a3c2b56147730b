#include "tabletloom/render.hpp"

#include <algorithm>
#include <cstdio>

namespace tabletloom {

namespace {

const Rgb& lookup(const Palette& palette, const std::string& name) {
  static const Rgb kMissing{0, 0, 0};
  auto it = palette.find(name);
  return it == palette.end() ? kMissing : it->second;
}

std::string fixed1(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1f", v);
  return buf;
}

// Black or white, whichever stands out against `c`.
Rgb contrast(const Rgb& c) {
  int luma = (299 * c.r + 587 * c.g + 114 * c.b) / 1000;
  return luma >= 128 ? Rgb{0, 0, 0} : Rgb{255, 255, 255};
}

std::vector<Face> faces(Face f) {
  if (f == Face::Both) return {Face::Front, Face::Back};
  return {f};
}

void svg_cell(std::string& out, const FaceCell& cell, const Rgb& fill, double x, double y, double size,
              bool show_slant) {
  const std::string colour = to_hex(fill);
  if (!show_slant || cell.slant == Slant::Flat) {
    out += "<rect x=\"" + fixed1(x) + "\" y=\"" + fixed1(y) + "\" width=\"" + fixed1(size) + "\" height=\"" +
           fixed1(size) + "\" fill=\"" + colour + "\"/>\n";
    return;
  }
  const double k = size / 4.0;
  double pts[4][2];
  if (cell.slant == Slant::Rising) {
    double p[4][2] = {{x + k, y}, {x + size, y}, {x + size - k, y + size}, {x, y + size}};
    std::copy(&p[0][0], &p[0][0] + 8, &pts[0][0]);
  } else {
    double p[4][2] = {{x, y}, {x + size - k, y}, {x + size, y + size}, {x + k, y + size}};
    std::copy(&p[0][0], &p[0][0] + 8, &pts[0][0]);
  }
  out += "<polygon points=\"";
  for (int i = 0; i < 4; ++i) {
    if (i) out += ' ';
    out += fixed1(pts[i][0]) + "," + fixed1(pts[i][1]);
  }
  out += "\" fill=\"" + colour + "\"/>\n";
}

}  // namespace

void RenderOptions::validate() const {
  if (cell_size < 1) throw Error("E_BAD_OPTIONS", "cell size must be at least 1, got " + std::to_string(cell_size));
}

FaceMatrix face_matrix(const Drawdown& drawdown, Face face) {
  FaceMatrix m;
  m.reserve(drawdown.picks);
  for (const auto& row : drawdown.cells) {
    std::vector<FaceCell> out;
    out.reserve(row.size());
    if (face == Face::Back) {
      for (auto it = row.rbegin(); it != row.rend(); ++it) out.push_back(FaceCell{it->back, mirror(it->slant)});
    } else {
      for (const Cell& c : row) out.push_back(FaceCell{c.front, c.slant});
    }
    m.push_back(std::move(out));
  }
  return m;
}

std::string render_text(const Drawdown& drawdown, const RenderOptions& opts) {
  std::string out;
  if (drawdown.picks == 0) return out;
  bool first = true;
  for (Face f : faces(opts.face)) {
    if (!first) out += '\n';
    first = false;
    for (const auto& row : face_matrix(drawdown, f)) {
      for (const FaceCell& c : row) {
        char glyph[2] = {c.color.empty() ? '?' : c.color.front(), static_cast<char>(c.slant)};
        if (opts.ansi) {
          const Rgb& rgb = lookup(drawdown.palette, c.color);
          out += "\x1b[38;2;" + std::to_string(rgb.r) + ";" + std::to_string(rgb.g) + ";" + std::to_string(rgb.b) + "m";
          out.append(glyph, 2);
          out += "\x1b[0m";
        } else {
          out.append(glyph, 2);
        }
      }
      out += '\n';
    }
  }
  return out;
}

std::string render_svg(const Drawdown& drawdown, const RenderOptions& opts) {
  opts.validate();
  const std::vector<Face> fs = faces(opts.face);
  const double cs = opts.cell_size;
  const std::size_t width = drawdown.tablets * static_cast<std::size_t>(opts.cell_size);
  const std::size_t height = drawdown.picks * static_cast<std::size_t>(opts.cell_size) * fs.size();
  const std::string w = std::to_string(width);
  const std::string h = std::to_string(height);

  std::string out = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" + w + "\" height=\"" + h +
         "\" viewBox=\"0 0 " + w + " " + h + "\">\n";
  double y0 = 0;
  for (Face f : fs) {
    FaceMatrix m = face_matrix(drawdown, f);
    for (std::size_t p = 0; p < m.size(); ++p) {
      for (std::size_t t = 0; t < m[p].size(); ++t) {
        svg_cell(out, m[p][t], lookup(drawdown.palette, m[p][t].color), static_cast<double>(t) * cs,
                 y0 + static_cast<double>(p) * cs, cs, opts.show_slant);
      }
    }
    y0 += static_cast<double>(drawdown.picks) * cs;
  }
  out += "</svg>\n";
  return out;
}

std::string render_raster(const Drawdown& drawdown, const RenderOptions& opts) {
  opts.validate();
  const std::vector<Face> fs = faces(opts.face);
  const std::size_t cs = static_cast<std::size_t>(opts.cell_size);
  const std::size_t width = drawdown.tablets * cs;
  const std::size_t height = drawdown.picks * cs * fs.size();

  std::string header = "P6\n" + std::to_string(width) + " " + std::to_string(height) + "\n255\n";
  std::string out = header;
  out.resize(header.size() + width * height * 3, '\0');
  auto put = [&](std::size_t x, std::size_t y, const Rgb& c) {
    std::size_t i = header.size() + (y * width + x) * 3;
    out[i] = static_cast<char>(c.r);
    out[i + 1] = static_cast<char>(c.g);
    out[i + 2] = static_cast<char>(c.b);
  };

  // A diagonal would swamp cells smaller than 3 pixels, so it is skipped there.
  const bool slant = opts.show_slant && cs >= 3;
  std::size_t y0 = 0;
  for (Face f : fs) {
    FaceMatrix m = face_matrix(drawdown, f);
    for (std::size_t p = 0; p < m.size(); ++p) {
      for (std::size_t t = 0; t < m[p].size(); ++t) {
        const Rgb& fill = lookup(drawdown.palette, m[p][t].color);
        const std::size_t x0 = t * cs;
        const std::size_t top = y0 + p * cs;
        for (std::size_t dy = 0; dy < cs; ++dy) {
          for (std::size_t dx = 0; dx < cs; ++dx) put(x0 + dx, top + dy, fill);
        }
        if (!slant || m[p][t].slant == Slant::Flat) continue;
        const Rgb line = contrast(fill);
        for (std::size_t i = 0; i < cs; ++i) {
          std::size_t dy = m[p][t].slant == Slant::Falling ? i : cs - 1 - i;
          put(x0 + i, top + dy, line);
        }
      }
    }
    y0 += drawdown.picks * cs;
  }
  return out;
}

}  // namespace tabletloom
