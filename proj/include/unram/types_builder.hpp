#pragma once

#include <memory>
#include <string>
#include <vector>

#include "unram/characters.hpp"
#include "unram/chevalley.hpp"

namespace unram {

struct NonClosedSubsystem : std::runtime_error { using std::runtime_error::runtime_error; };
struct NotInType : std::runtime_error { using std::runtime_error::runtime_error; };

/* Per-root conductor and depth, f(a) + f(-a) = cond(a). */
struct ConcaveFunction {
  std::vector<int> cond;
  std::vector<int> f;
};

// positive roots get floor(c/2), negative roots floor((c+1)/2)
ConcaveFunction concave_from_conductors(const RootDatum& d, const std::vector<int>& cond);
ConcaveFunction concave_function(const SmoothCharacter& chi);
bool is_concave(const RootDatum& d, const std::vector<int>& f);
// symmetric and closed under root addition
bool is_closed_subsystem(const RootDatum& d, const std::vector<int>& roots);

// smallest l >= 0 with chi trivial on the units congruent to 1 mod p^(l+1)
int character_depth(const SmoothCharacter& chi);

/*
 * G = G^1 > ... > G^d with depths r_1 >= r_2 > ... > r_d > 0.  subsystems[0]
 * is every root; subsystems[i] = {a : cond(a) <= r[i]} for i >= 1.
 */
struct TwistedLeviSequence {
  int d = 1;
  std::vector<int> r;
  std::vector<std::vector<int>> subsystems;
};

TwistedLeviSequence twisted_levi_from_conductors(const RootDatum& d, const std::vector<int>& cond, int depth);

struct TypeDatum {
  const RootDatum* datum = nullptr;
  SmoothCharacter chi;
  ConcaveFunction f;
  TwistedLeviSequence levi;
  std::shared_ptr<const WeylGroup> weyl;
  Stabilizer stabilizer;  // points into *weyl

  const std::vector<int>& depths() const { return f.f; }
  bool is_iwahori() const;
};

TypeDatum build_type(const SmoothCharacter& chi);

// rho_s(g) = chi(torus part of the Iwahori normal form); NotInType off J_s
RootOfUnity rho_eval(const TypeDatum& type, const ChevalleyGroup& G, const GroupWord& g);
RootOfUnity rho_torus(const TypeDatum& type, const std::vector<TElem>& units_E);

// predicted support J W~_{0chi} J, read on the affine Weyl part
bool support_predicted(const TypeDatum& type, const AffineWeylElement& x);

std::string type_report(const TypeDatum& type);

}  // namespace unram
