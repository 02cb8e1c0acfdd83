#pragma once

#include <string>
#include <vector>

#include "unram/characters.hpp"

namespace unram {

/* A named test character: group, prime, level and per-coordinate exponents. */
struct CorpusEntry {
  std::string name;
  std::string group;
  int p;
  int level;
  std::vector<CoordSpec> coords;
};

const std::vector<CorpusEntry>& character_corpus();
const CorpusEntry& corpus_entry(const std::string& name);
// degree of the ring carrying ^0T(F): 2 for SU3, else 1
int base_degree(const RootDatum& d);
SmoothCharacter make_character(const CorpusEntry& c, int N);

}  // namespace unram
