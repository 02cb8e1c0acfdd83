#include "unram/corpus.hpp"

#include <stdexcept>

namespace unram {

const std::vector<CorpusEntry>& character_corpus() {
  // p = 3 for rank one and Sp4, p = 5 where 3 divides |W_E|
  static const std::vector<CorpusEntry> corpus = {
      {"sl2-trivial", "SL2", 3, 1, {{0, {}}}},
      {"sl2-quadratic", "SL2", 3, 1, {{1, {}}}},
      {"sl2-cond2", "SL2", 3, 2, {{1, {1}}}},
      {"sl2-cond3", "SL2", 3, 3, {{1, {1}}}},
      {"gl2-trivial", "GL2", 3, 1, {{0, {}}, {0, {}}}},
      {"gl2-psi-1", "GL2", 3, 2, {{1, {1}}, {0, {}}}},
      {"gl2-psi-psi", "GL2", 3, 2, {{1, {1}}, {1, {1}}}},
      {"sl3-trivial", "SL3", 5, 1, {{0, {}}, {0, {}}}},
      {"sl3-cond2", "SL3", 5, 2, {{0, {1}}, {0, {1}}}},
      {"sp4-trivial", "Sp4", 3, 1, {{0, {}}, {0, {}}}},
      {"sp4-psi-psi", "Sp4", 3, 2, {{0, {1}}, {0, {1}}}},
      {"su3-trivial", "SU3", 5, 1, {{0, {}}}},
      {"su3-tame", "SU3", 5, 1, {{4, {}}}},
      {"su3-cond2", "SU3", 5, 2, {{0, {1, 0}}}},
  };
  return corpus;
}

const CorpusEntry& corpus_entry(const std::string& name) {
  for (const auto& c : character_corpus())
    if (c.name == name) return c;
  throw std::invalid_argument("unknown corpus character: " + name);
}

int base_degree(const RootDatum& d) { return d.is_split() ? 1 : d.h_order; }

SmoothCharacter make_character(const CorpusEntry& c, int N) {
  const RootDatum& d = build_root_datum(c.group);
  return SmoothCharacter::from_coords(d, RingSpec::get(c.p, base_degree(d), N), c.level, c.coords);
}

}  // namespace unram
