#pragma once

// Whitespace-separated text formats for structures, groups and (*)
// instances. '#' starts a comment that runs to the end of the line. Parse
// failures throw ParseError carrying the 1-based line number.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pseudofin/bilinear.hpp"
#include "pseudofin/comprehensive.hpp"
#include "pseudofin/groups.hpp"

namespace pseudofin {

// "p n d", then n*n lines of d residues: line (i*n + j) holds beta(e_i, e_j).
BilinearStructure parse_structure(std::string_view text);
std::string format_structure(const BilinearStructure& s);

// Either "bilinear" followed by a structure, or "table", the order, and
// one row of the Cayley table per line.
struct LoadedGroup {
  std::optional<Class2Group> class2;
  std::optional<TableGroup> table;

  // The Cayley-table view; class-2 groups are converted with as_table.
  TableGroup as_table_group() const;
};

LoadedGroup parse_group(std::string_view text);
std::string format_group(const Class2Group& g);
std::string format_group(const TableGroup& g);

// One instance per line:
//   k  <k*n generator coords>  <k*(n+d) alpha values>  <n+d w>  r
std::vector<StarInstance> parse_instances(std::string_view text, const Class2Group& g);
std::string format_instance(const StarInstance& inst);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace pseudofin
