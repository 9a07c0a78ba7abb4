#ifndef FPTMC_STRUCTURE_IO_HPP
#define FPTMC_STRUCTURE_IO_HPP

#include <string>

#include "fptmc/structure.hpp"

namespace fptmc {

struct StructureReadOptions {
  // Add the reverse of every tuple of every binary relation.
  bool symmetrize = false;
};

// Line format: `vocab <name> <arity>`, `universe <n>`, `<name> <e1> ... <er>`, '#' comments.
Structure parse_structure(const std::string& text, const StructureReadOptions& opts = {});
std::string write_structure(const Structure& s);

// Graphs have a single binary symbol; each undirected edge is written once in DOT.
std::string graph_to_dot(const Graph& g, const std::string& name = "G");
std::string structure_to_dot(const Structure& s, const std::string& name = "A");

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace fptmc

#endif
