#pragma once

#include <string>

#include "tabletloom/loom.hpp"

namespace tabletloom {

enum class Face { Front, Back, Both };

struct RenderOptions {
  Face face = Face::Front;
  int cell_size = 12;
  bool show_slant = true;
  bool ansi = false;

  /// Throws E_BAD_OPTIONS when cell_size < 1.
  void validate() const;
};

/// One visible face as a colour/slant matrix. The back face is mirrored
/// left-right with slants mirrored, as seen when the band is turned over.
struct FaceCell {
  std::string color;
  Slant slant = Slant::Flat;

  friend bool operator==(const FaceCell&, const FaceCell&) = default;
};
using FaceMatrix = std::vector<std::vector<FaceCell>>;

FaceMatrix face_matrix(const Drawdown& drawdown, Face face);

/// One line per pick, two glyphs per tablet (colour initial, slant).
/// Face::Both prints the front, a blank line, then the back.
std::string render_text(const Drawdown& drawdown, const RenderOptions& opts = {});

/// SVG 1.1. Face::Both stacks the back below the front.
std::string render_svg(const Drawdown& drawdown, const RenderOptions& opts = {});

/// Binary PPM (P6). Face::Both stacks the back below the front.
std::string render_raster(const Drawdown& drawdown, const RenderOptions& opts = {});

}  // namespace tabletloom
