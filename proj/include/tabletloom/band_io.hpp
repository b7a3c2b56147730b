#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "tabletloom/loom.hpp"
#include "tabletloom/plan.hpp"

namespace tabletloom {

/// Canonical drawdown JSON: sorted keys, no whitespace, single line.
/// cells[pick][tablet] = {"b","f","h","q","r","s"}.
std::string export_drawdown(const Drawdown& drawdown);

/// Reads a document produced by export_drawdown. Throws E_BAD_DRAWDOWN.
Drawdown import_drawdown(std::string_view json);

/// picks x tablets observed colour names.
using ColorGrid = std::vector<std::vector<std::string>>;

/// One pick per line, whitespace separated. Blank lines are skipped.
/// Throws E_EMPTY_GRID or E_RAGGED_ROW (line() is 1-based).
ColorGrid import_grid(std::string_view text);

std::string format_grid(const ColorGrid& grid);

ColorGrid front_grid(const Drawdown& drawdown);

struct CatalogEntry {
  std::string id;
  std::string title;
  std::string provenance;
  std::string source;
};

/// Title and provenance come from `# title:` / `# provenance:` comments.
CatalogEntry make_catalog_entry(std::string id, std::string source);

/// Loads every `*.band` in `directory`, sorted by id. A file that does not
/// compile raises E_CATALOG_PARSE carrying its diagnostics.
std::vector<CatalogEntry> load_catalog(const std::filesystem::path& directory);

/// $TABLETLOOM_EXAMPLES if set, otherwise the built-in catalog directory.
std::filesystem::path default_catalog_dir();

/// Reads a whole file, or stdin for "-". Throws E_IO.
std::string read_input(const std::string& path);

}  // namespace tabletloom
