#pragma once

// Inverse problems over the weave: recovering turning sequences from an
// observed front face, and carrying a bitstream through a band.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tabletloom/band_io.hpp"
#include "tabletloom/loom.hpp"
#include "tabletloom/plan.hpp"

namespace tabletloom {

struct InferOptions {
  bool assume_home = true;
  std::uint64_t cap = 1000;
};

struct InferenceResult {
  /// Turn-only plan (F/B, no flips). When a tablet's start rotation is not 0
  /// its threading is rotated so that simulating from home reproduces the grid.
  FlatPlan plan;
  std::vector<int> start_rotation;  // per tablet, 0 when assume_home
  std::uint64_t solution_count = 0;
  bool capped = false;
};

/// Throws E_UNWEAVABLE (tablet, first infeasible pick) when no turn-only
/// sequence reproduces a tablet's column, or E_ROW_ARITY on a shape mismatch.
InferenceResult infer_turns(const ColorGrid& grid, const std::vector<Threading>& threading, const Palette& palette,
                            const InferOptions& opts = {});

/// Number of feasible direction sequences for one tablet's observed column,
/// saturating at `cap`. Returns {count, capped}.
std::pair<std::uint64_t, bool> count_tablet_solutions(const std::vector<std::string>& column,
                                                      const Threading& threading, bool assume_home,
                                                      std::uint64_t cap);

using Bits = std::vector<bool>;

/// Reserved codec colours, holes A..D.
inline constexpr const char* kCodecColors[4] = {"c0", "c1", "c2", "c3"};

Palette codec_palette();
Threading codec_threading();

struct EncodedSignal {
  FlatPlan plan;
  std::size_t bit_length = 0;

  /// Band plan text with a `# bits: N` header.
  std::string source() const;
};

/// Bit 1 turns forward, bit 0 backward; pick p tablet t carries bit p*T+t.
/// The last pick is padded with forward turns. Throws E_EMPTY_BITS.
EncodedSignal encode_bits(const Bits& bits, std::size_t tablets);

/// Throws E_CORRUPT (tablet, pick) when an observed colour matches neither
/// turn, E_CODEC_THREADING when a tablet's holes are not 4 distinct colours,
/// E_BIT_LENGTH when the grid is too short.
Bits decode_bits(const ColorGrid& grid, const std::vector<Threading>& threading, std::size_t bit_length);

/// Value of a `# bits: N` header comment, if present.
std::optional<std::size_t> bit_length_header(std::string_view source);

Bits bits_from_hex(std::string_view hex);
Bits bits_from_bytes(std::string_view bytes);
std::string bits_to_string(const Bits& bits);

}  // namespace tabletloom
