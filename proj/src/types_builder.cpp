#include "unram/types_builder.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace unram {

ConcaveFunction concave_from_conductors(const RootDatum& d, const std::vector<int>& cond) {
  if (static_cast<int>(cond.size()) != d.num_roots()) throw std::invalid_argument("one conductor per root");
  ConcaveFunction out;
  out.cond = cond;
  for (int a = 0; a < d.num_roots(); ++a) {
    if (cond[a] < 1) throw std::invalid_argument("conductors are positive");
    if (cond[a] != cond[d.neg(a)]) throw std::invalid_argument("cond(a) and cond(-a) differ");
    out.f.push_back(d.positive(a) ? cond[a] / 2 : (cond[a] + 1) / 2);
  }
  return out;
}

ConcaveFunction concave_function(const SmoothCharacter& chi) {
  const RootDatum& d = chi.datum();
  std::vector<int> cond;
  for (int a = 0; a < d.num_roots(); ++a) cond.push_back(conductor(chi, a));
  return concave_from_conductors(d, cond);
}

bool is_concave(const RootDatum& d, const std::vector<int>& f) {
  for (int a = 0; a < d.num_roots(); ++a)
    for (int b = 0; b < d.num_roots(); ++b) {
      int c = d.sum_index(a, b);
      if (c >= 0 && f[c] > f[a] + f[b]) return false;
    }
  return true;
}

bool is_closed_subsystem(const RootDatum& d, const std::vector<int>& roots) {
  std::set<int> s(roots.begin(), roots.end());
  for (int a : roots) {
    if (!s.count(d.neg(a))) return false;
    for (int b : roots) {
      int c = d.sum_index(a, b);
      if (c >= 0 && !s.count(c)) return false;
    }
  }
  return true;
}

int character_depth(const SmoothCharacter& chi) {
  const UnitGroup& G = UnitGroup::get(chi.ring(), chi.level());
  int n = chi.num_coords();
  for (int l = 0; l + 1 < chi.level(); ++l) {
    bool trivial = true;
    for (int j = 0; j < n && trivial; ++j)
      for (const auto& x : G.principal_units(l + 1)) {
        std::vector<TElem> pt(n, TElem(chi.ring(), 1));
        pt[j] = x;
        if (!chi.evaluate(pt).is_one()) {
          trivial = false;
          break;
        }
      }
    if (trivial) return l;
  }
  return std::max(0, chi.level() - 1);
}

TwistedLeviSequence twisted_levi_from_conductors(const RootDatum& d, const std::vector<int>& cond, int depth) {
  std::set<int, std::greater<int>> levels;
  for (int c : cond)
    if (c > 1) levels.insert(c);
  TwistedLeviSequence seq;
  std::vector<int> all(d.num_roots());
  for (int a = 0; a < d.num_roots(); ++a) all[a] = a;
  seq.subsystems.push_back(all);
  seq.d = static_cast<int>(levels.size()) + 1;
  int r2 = levels.empty() ? 0 : *levels.begin() - 1;
  seq.r.push_back(std::max(depth, r2));
  for (int c : levels) {
    int r = c - 1;
    std::vector<int> sub;
    for (int a = 0; a < d.num_roots(); ++a)
      if (cond[a] <= r) sub.push_back(a);
    if (!is_closed_subsystem(d, sub)) {
      std::ostringstream os;
      os << "roots with conductor <= " << r << " do not form a closed subsystem";
      throw NonClosedSubsystem(os.str());
    }
    seq.r.push_back(r);
    seq.subsystems.push_back(sub);
  }
  return seq;
}

bool TypeDatum::is_iwahori() const {
  for (int a = 0; a < datum->num_roots(); ++a)
    if (f.f[a] != (datum->positive(a) ? 0 : 1)) return false;
  return true;
}

TypeDatum build_type(const SmoothCharacter& chi) {
  TypeDatum t;
  t.datum = &chi.datum();
  t.chi = chi;
  t.f = concave_function(chi);
  t.levi = twisted_levi_from_conductors(*t.datum, t.f.cond, character_depth(chi));
  t.weyl = std::make_shared<WeylGroup>(*t.datum);
  t.stabilizer = stabilizer_W0chi(chi, *t.weyl);
  return t;
}

RootOfUnity rho_torus(const TypeDatum& type, const std::vector<TElem>& units_E) {
  return type.chi.evaluate(torus_E_to_F(*type.datum, units_E));
}

RootOfUnity rho_eval(const TypeDatum& type, const ChevalleyGroup& G, const GroupWord& g) {
  IwahoriNormalForm nf;
  try {
    nf = normal_form(G, g);
  } catch (const NotInIwahori&) {
    throw NotInType("element is not in the Iwahori subgroup");
  }
  const RootDatum& d = *type.datum;
  for (int v : nf.lambda)
    if (v != 0) throw NotInType("torus part is not compact");
  for (int i = 0; i < d.npos; ++i) {
    if (nf.pos[i].valuation() < type.f.f[i]) throw NotInType("positive root factor too shallow");
    if (nf.neg[i].valuation() < type.f.f[d.neg(i)]) throw NotInType("negative root factor too shallow");
  }
  return rho_torus(type, nf.units);
}

bool support_predicted(const TypeDatum& type, const AffineWeylElement& x) { return type.stabilizer.contains(x); }

std::string type_report(const TypeDatum& type) {
  const RootDatum& d = *type.datum;
  std::ostringstream os;
  os << "type group=" << d.name << " depth=" << type.levi.r.front() << " iwahori=" << (type.is_iwahori() ? 1 : 0)
     << "\n";
  os << "root coords cond f\n";
  for (int a = 0; a < d.num_roots(); ++a) {
    os << a << " (";
    for (size_t k = 0; k < d.roots[a].size(); ++k) os << (k ? "," : "") << d.roots[a][k];
    os << ") " << type.f.cond[a] << " " << type.f.f[a] << "\n";
  }
  os << "levi d=" << type.levi.d << " r=";
  for (size_t i = 0; i < type.levi.r.size(); ++i) os << (i ? "," : "") << type.levi.r[i];
  os << "\n";
  for (size_t i = 0; i < type.levi.subsystems.size(); ++i) {
    os << "G^" << i + 1 << " roots=";
    for (size_t k = 0; k < type.levi.subsystems[i].size(); ++k) os << (k ? "," : "") << type.levi.subsystems[i][k];
    os << "\n";
  }
  os << "W0chi order=" << type.stabilizer.finite.size() << " generators=";
  for (size_t k = 0; k < type.stabilizer.generators.size(); ++k) {
    os << (k ? ";" : "") << "[";
    const auto& w = (*type.weyl)[type.stabilizer.generators[k]].word;
    for (size_t j = 0; j < w.size(); ++j) os << (j ? " " : "") << "s" << w[j];
    os << "]";
  }
  os << " translations=X_*(A)\n";
  return os.str();
}

}  // namespace unram
