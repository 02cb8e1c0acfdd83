#include "unram/verify.hpp"

#include <chrono>
#include <functional>
#include <map>
#include <memory>
#include <random>
#include <sstream>
#include <stdexcept>

#include "unram/bernstein.hpp"
#include "unram/census.hpp"
#include "unram/corpus.hpp"
#include "unram/integrals.hpp"
#include "unram/types_builder.hpp"

namespace unram {

namespace {

SmoothCharacter chi_of(const std::string& name, int N = 6) { return make_character(corpus_entry(name), N); }

bool is_gl2(const SmoothCharacter& chi) { return chi.datum().name == "GL2"; }

// alpha^vee in the rank-one coordinates
IVec coroot_nu(const SmoothCharacter& chi) { return is_gl2(chi) ? IVec{1, -1} : IVec{1}; }

std::string tag(const std::string& name, int r) { return name + " r=" + std::to_string(r); }

std::string ratio(int64_t a, int64_t b) { return std::to_string(a) + "/" + std::to_string(b); }

struct Collector {
  CriterionResult& res;
  std::map<std::string, LadderRecord> ladders;

  void line(const std::string& s) { res.lines.push_back(s); }
  void check(bool ok, const std::string& s) {
    res.pass = res.pass && ok;
    line(std::string(ok ? "ok   " : "FAIL ") + s);
  }
  void ladder(const std::string& label, bool stable) {
    LadderRecord& l = ladders[label];
    l.label = label;
    ++l.runs;
    if (stable) ++l.stable;
  }
  void flush() {
    for (auto& [_, l] : ladders) res.ladders.push_back(l);
  }
};

const char* const kRankOne[] = {"sl2-trivial", "sl2-quadratic", "sl2-cond2", "gl2-trivial", "gl2-psi-1", "gl2-psi-psi"};

// lattice parts whose Cartan cell differs from nu and from its Weyl conjugate
std::vector<IVec> off_support_lattices(bool gl2) {
  if (gl2) return {{0, 0}, {1, 0}, {2, -2}, {1, 1}, {3, -1}};
  return {{0}, {2}, {3}, {-2}, {4}};
}

void closed_form_orbitals(Collector& out, const VerifyOptions& opt) {
  for (const char* name : kRankOne) {
    auto chi = chi_of(name);
    IVec nu = coroot_nu(chi);
    for (int r : {1, 2}) {
      ElementaryFunction phi(chi, r, nu);
      auto classes = compact_torus_classes(phi.gl2(), phi.layer(6), 2);
      int64_t equal = 0;
      std::string first_bad;
      for (const auto& cls : classes) {
        TorusClass delta{cls.m, nu};
        OrbitalReport rep = brute_twisted_orbital(phi, delta, {6, 0, 0}, opt.threads);
        out.ladder("orbital " + tag(name, r), rep.stable);
        if (rep.stable && rep.value == closed_form_orbital(phi, delta)) ++equal;
        else if (first_bad.empty()) first_bad = " first mismatch " + rep.str();
      }
      int64_t zeros = 0;
      auto lattices = off_support_lattices(phi.gl2());
      for (size_t i = 0; i < lattices.size(); ++i) {
        TorusClass delta{classes[(7 * i) % classes.size()].m, lattices[i]};
        OrbitalReport rep = brute_twisted_orbital(phi, delta, {6, 0, 0}, opt.threads);
        out.ladder("orbital " + tag(name, r), rep.stable);
        if (rep.stable && rep.value.is_zero()) ++zeros;
      }
      int64_t n = static_cast<int64_t>(classes.size());
      out.check(equal == n && zeros == 5, tag(name, r) + ": TO = chi_r^{-1}(m) on " + ratio(equal, n) +
                                              " classes mod (1+p^2), off-support zeros " + ratio(zeros, 5) +
                                              first_bad);
    }
  }
}

void matching(Collector& out, const VerifyOptions& opt) {
  for (const char* name : kRankOne) {
    auto chi = chi_of(name);
    for (int r : {1, 2}) {
      MatchingReport rep = verify_matching(chi, coroot_nu(chi), r, {6, 0, 0}, opt.threads);
      int64_t agree = 0;
      for (const auto& row : rep.rows) {
        out.ladder("matching " + tag(name, r), row.stable);
        if (row.stable && row.twisted == row.untwisted && row.twisted == row.closed) ++agree;
      }
      std::string s = tag(name, r) + ": SO twisted = SO untwisted = closed form on " +
                      ratio(agree, static_cast<int64_t>(rep.rows.size())) + " classes";
      if (!rep.non_norm.empty()) {
        int64_t zero = 0;
        for (const auto& [_, v] : rep.non_norm) zero += v.is_zero();
        s += ", non-norm zeros " + ratio(zero, static_cast<int64_t>(rep.non_norm.size()));
      }
      out.check(rep.pass, s);
    }
  }
}

void volumes(Collector& out, const VerifyOptions&) {
  auto sl2 = chi_of("sl2-cond2");
  auto sp4 = chi_of("sp4-psi-psi");
  IVec nu_sp4 = minimal_regular_dominant(sp4.datum());
  for (int r : {1, 2}) {
    VolumeReport rep = volume_check(sl2, {1}, r, true);
    out.ladder("volume SL2", rep.stable);
    out.check(rep.pass && rep.full == rep.predicted, rep.str());
  }
  for (int r : {1, 2}) {
    VolumeReport rep = volume_check(sp4, nu_sp4, r, false);
    out.ladder("volume Sp4", rep.stable);
    out.check(rep.pass, rep.str());
  }
}

void axiom_u(Collector& out, const VerifyOptions&) {
  for (const char* name : {"sl2-trivial", "sl2-quadratic", "sl2-cond2", "sl2-cond3", "sl3-cond2", "sp4-psi-psi"}) {
    auto chi = chi_of(name);
    WeylGroup W(chi.datum());
    auto reps = W.min_coset_reps(0);
    int64_t good = 0, failing = 0, constructive = 0;
    std::string first_bad;
    for (int w : reps) {
      AxiomCensus rep = verify_axiom_u(chi, w);
      out.ladder(std::string("axiom-u ") + name, rep.stable);
      failing += rep.failing;
      constructive += rep.constructive;
      if (rep.pass) ++good;
      else if (first_bad.empty()) first_bad = "\n    " + rep.str();
      if (std::string(name) == "sl2-cond2" && w != W.identity()) {
        out.line("  w=" + std::to_string(w) + " cosets=" + std::to_string(rep.cosets) + " failing=" +
                 std::to_string(rep.failing) + " constructive=" + std::to_string(rep.constructive));
        for (const auto& row : rep.rows)
          out.line("    u=" + row.u + (row.satisfies ? " satisfies" : " refuted by " + row.witness));
      }
    }
    out.check(good == static_cast<int64_t>(reps.size()),
              std::string(name) + ": one satisfying coset (identity) for " +
                  ratio(good, static_cast<int64_t>(reps.size())) + " w, constructive witnesses " +
                  ratio(constructive, failing) + first_bad);
  }
}

void descent(Collector& out, const VerifyOptions& opt) {
  for (const char* name : {"gl2-trivial", "gl2-psi-1", "gl2-psi-psi"}) {
    auto chi = chi_of(name);
    for (int r : {1, 2}) {
      const RingSpec& L = RingSpec::get(chi.ring().p, r, 6);
      int per_j[2] = {0, 0};
      int64_t agree = 0, total = 0;
      // mod (1 + p^3): over F_3 there are only two j = 1 classes mod (1 + p^2)
      for (const auto& cls : compact_torus_classes(false, L, 3)) {
        if (per_j[0] == 3 && per_j[1] == 3) break;
        DescentReport rep;
        try {
          rep = verify_descent(chi, r, {TElem(L, 1), cls.m[0]}, 6, opt.threads);
        } catch (const NotSemisimpleNorm&) {
          continue;
        }
        if (rep.j > 1 || per_j[rep.j] == 3) continue;
        ++per_j[rep.j];
        ++total;
        out.ladder("descent " + tag(name, r), rep.lhs.stable);
        if (rep.pass) ++agree;
        else out.line("  " + rep.str());
      }
      out.check(agree == total && per_j[0] == 3 && per_j[1] == 3,
                tag(name, r) + ": TO(e_rho) = q^j sum_w TO^T(e_{w rho_T}) on " + ratio(agree, total) +
                    " classes (3 with j=0, 3 with j=1)");
    }
  }
}

void index_comparison(Collector& out, const VerifyOptions& opt) {
  auto chi = chi_of("sl2-cond2");
  int64_t q = chi.ring().q();
  for (int r : {1, 2}) {
    IndexComparison unit = compare_index_unit(chi, r);
    out.ladder("index delta=1 (exact sum, no truncation)", unit.lhs.stable && unit.rhs.stable);
    out.check(unit.pass && unit.index_IJ == q, unit.str());
    ElementaryFunction e(chi, r, {0});
    const RingSpec& L = e.layer(5);
    TElem m = r == 1 ? TElem(L, 2) : TElem::gen(L) + TElem(L, 1);
    IndexComparison mu = compare_index(chi, r, {{m}, {1}}, {5, 0, 0}, opt.threads);
    out.ladder("index delta=mu", mu.lhs.stable && mu.rhs.stable);
    out.check(mu.pass && mu.index_IJ == q, mu.str());
  }
  ElementaryFunction e(chi, 1, {0});
  IndexComparison compact = compare_index(chi, 1, {{TElem(e.layer(5), 2)}, {0}}, {5, 0, 0}, opt.threads);
  out.ladder("index delta=m", compact.lhs.stable && compact.rhs.stable);
  out.check(compact.pass && !compact.rhs.value.is_zero(), compact.str());
}

LaurentPoly random_poly(std::mt19937_64& rng, int nvars, int terms) {
  std::uniform_int_distribution<int> ex(-2, 2), co(-3, 3), ord(1, 6);
  LaurentPoly p(nvars);
  for (int i = 0; i < terms; ++i) {
    IVec e(nvars);
    for (int& x : e) x = ex(rng);
    int M = ord(rng);
    p.add_term(e, Cyclo::root(RootOfUnity(M, std::uniform_int_distribution<int>(0, M - 1)(rng))) * mpq_class(co(rng)));
  }
  return p;
}

ExtendedCharacter random_xi(std::mt19937_64& rng, const SmoothCharacter& chi, const WeylGroup& W) {
  auto rel = relative_weyl(W);
  int w = rel[std::uniform_int_distribution<size_t>(0, rel.size() - 1)(rng)];
  std::uniform_int_distribution<int> num(1, 5), ord(1, 12);
  std::vector<ScaledRoot> eta;
  for (size_t k = 0; k < chi.datum().rel_basis.size(); ++k) {
    int M = ord(rng);
    eta.push_back({mpq_class(num(rng), num(rng)), RootOfUnity(M, std::uniform_int_distribution<int>(0, M - 1)(rng))});
  }
  return ExtendedCharacter(chi, eta).weyl_act(W, w);
}

void base_change(Collector& out, const VerifyOptions& opt) {
  struct Block {
    const char* chi;
    int r;
  };
  // level-2 SU3 only at r = 2, see the discrete-log table bound
  const Block blocks[] = {{"sl2-cond2", 2},   {"sl2-cond2", 3},   {"gl2-psi-psi", 2}, {"gl2-psi-psi", 3},
                          {"sl3-cond2", 2},   {"sl3-cond2", 3},   {"sp4-psi-psi", 2}, {"sp4-psi-psi", 3},
                          {"su3-cond2", 2},   {"su3-tame", 3}};
  std::mt19937_64 rng(opt.seed);
  for (const Block& b : blocks) {
    auto chi = chi_of(b.chi, 4);
    auto chi_r = chi.pullback_norm(b.r);
    const RootDatum& d = chi.datum();
    int n = static_cast<int>(d.rel_basis.size());
    WeylGroup W(d);
    int64_t scalar_ok = 0;
    for (int i = 0; i < 100; ++i) {
      CenterElement Zr = CenterElement::symmetrize(chi_r, random_poly(rng, n, 3));
      ExtendedCharacter xi = random_xi(rng, chi, W);
      if (action_scalar(base_change_br(Zr, chi, b.r), xi) == action_scalar(Zr, xi.compose_norm(b.r))) ++scalar_ok;
    }
    int64_t hom_ok = 0;
    for (int i = 0; i < 10; ++i) {
      CenterElement x = CenterElement::symmetrize(chi_r, random_poly(rng, n, 3));
      CenterElement y = CenterElement::symmetrize(chi_r, random_poly(rng, n, 3));
      CenterElement bx = base_change_br(x, chi, b.r), by = base_change_br(y, chi, b.r);
      if (base_change_br(x + y, chi, b.r) == bx + by && base_change_br(x * y, chi, b.r) == bx * by &&
          bx.is_invariant())
        ++hom_ok;
    }
    CenterElement one = CenterElement::make(chi_r, LaurentPoly::constant(n, Cyclo::rational(1)));
    bool unital = base_change_br(one, chi, b.r).poly() == LaurentPoly::constant(n, Cyclo::rational(1));
    int64_t square_ok = 0;
    std::vector<unsigned> masks;
    for (unsigned mask = 0; mask <= full_levi_mask(d); ++mask)
      if (d.is_split() || mask == 0 || mask == full_levi_mask(d)) masks.push_back(mask);
    for (int i = 0; i < 100; ++i) {
      CenterElement Zr = CenterElement::symmetrize(chi_r, random_poly(rng, n, 3));
      bool ok = true;
      for (unsigned mask : masks)
        ok = ok && base_change_br(constant_term_cMG(Zr, mask), chi, b.r) ==
                       constant_term_cMG(base_change_br(Zr, chi, b.r), mask);
      if (ok) ++square_ok;
    }
    out.check(scalar_ok == 100 && hom_ok == 10 && unital && square_ok == 100,
              tag(b.chi, b.r) + ": action scalars " + ratio(scalar_ok, 100) + ", ring homomorphism " +
                  ratio(hom_ok, 10) + (unital ? " unital" : " NOT unital") + ", constant-term square " +
                  ratio(square_ok, 100) + " over " + std::to_string(masks.size()) + " Levis");
  }
}

void chevalley(Collector& out, const VerifyOptions& opt) {
  struct Group {
    const char* name;
    int p, e;
  };
  for (const Group& g : {Group{"SL2", 3, 1}, Group{"GL2", 3, 1}, Group{"SL3", 5, 1}, Group{"Sp4", 3, 1},
                         Group{"SU3", 5, 2}}) {
    RelationReport rep = chevalley_relations(build_root_datum(g.name), RingSpec::get(g.p, g.e, 4), 1000, opt.seed);
    out.check(rep.pass, rep.str());
  }
  // gl2-psi-psi is trivial on the coroot, so its J is the Iwahori and U_c is empty
  for (const char* name : {"sl2-cond3", "gl2-psi-1", "sl3-cond2", "sp4-psi-psi", "su3-cond2"}) {
    LemmaReport rep = commutator_lemma(chi_of(name, 8), 200, opt.seed);
    rep.label = name;
    std::string s = rep.str();
    if (!rep.failure_lines.empty()) s += "\n    " + rep.failure_lines.front();
    out.check(rep.pass, s);
  }
}

void type_construction(Collector& out, const VerifyOptions&) {
  int64_t sum_ok = 0, concave_ok = 0, n = 0, depth_zero = 0, iwahori = 0;
  for (const auto& entry : character_corpus()) {
    auto chi = make_character(entry, 6);
    const RootDatum& d = chi.datum();
    ConcaveFunction f = concave_function(chi);
    bool sums = true;
    for (int a = 0; a < d.num_roots(); ++a)
      sums = sums && f.cond[a] == conductor(chi, a) && f.f[a] + f.f[d.neg(a)] == f.cond[a];
    ++n;
    sum_ok += sums;
    concave_ok += is_concave(d, f.f);
    if (character_depth(chi) == 0) {
      ++depth_zero;
      iwahori += build_type(chi).is_iwahori();
    }
  }
  out.check(sum_ok == n && concave_ok == n, "f(a) + f(-a) = cond(a) on " + ratio(sum_ok, n) +
                                                " corpus characters, concave on " + ratio(concave_ok, n));
  out.check(depth_zero > 0 && iwahori == depth_zero,
            "depth-zero characters give J = I on " + ratio(iwahori, depth_zero));
  for (const char* name : {"sl2-trivial", "sl2-quadratic", "sl2-cond2", "sl2-cond3"}) {
    auto chi = chi_of(name);
    SupportCensus base = support_census(chi, 2, 7);
    SupportCensus finer = support_census(chi, 2, 8);
    base.label = std::string(name) + " M=7";
    bool stable = base.observed == finer.observed && base.predicted == finer.predicted &&
                  base.double_cosets == finer.double_cosets;
    std::string s = base.str() + (stable ? " (same at M=8)" : " (CHANGES at M=8: " + finer.str() + ")");
    if (!base.disagreement_lines.empty()) s += "\n    " + base.disagreement_lines.front();
    out.check(base.pass && finer.pass && stable, s);
  }
}

using Runner = std::function<void(Collector&, const VerifyOptions&)>;

const std::vector<std::pair<std::string, Runner>>& registry() {
  static const std::vector<std::pair<std::string, Runner>> r = {
      {"closed-form orbital integrals", closed_form_orbitals},
      {"matching of stable orbital integrals", matching},
      {"volume identity", volumes},
      {"axiom for u census", axiom_u},
      {"descent formula for the unit", descent},
      {"[I:J] comparison", index_comparison},
      {"base-change contract", base_change},
      {"Chevalley kernel relations", chevalley},
      {"type construction and Hecke support", type_construction},
      {"stabilization ladders", nullptr},
  };
  return r;
}

CriterionResult aggregate_ladders(const std::vector<const CriterionResult*>& parts) {
  CriterionResult res;
  res.id = 10;
  res.name = criterion_name(10);
  Collector out{res, {}};
  for (const CriterionResult* c : parts) {
    int64_t runs = 0, stable = 0;
    for (const auto& l : c->ladders) {
      runs += l.runs;
      stable += l.stable;
      if (l.stable != l.runs) out.line("  unstable: " + l.label + " " + ratio(l.stable, l.runs));
    }
    out.check(runs > 0 && stable == runs,
              "criterion " + std::to_string(c->id) + ": " + ratio(stable, runs) + " truncated reports stable");
  }
  return res;
}

}  // namespace

std::string CriterionResult::str() const {
  std::ostringstream os;
  os << (pass ? "PASS" : "FAIL") << " " << id << " " << name;
  for (const auto& l : lines) os << "\n  " << l;
  return os.str();
}

const std::string& criterion_name(int id) {
  if (id < 1 || id > kCriteria) throw std::out_of_range("criterion id must be 1.." + std::to_string(kCriteria));
  return registry()[id - 1].first;
}

CriterionResult run_criterion(int id, const VerifyOptions& opt) {
  return run_criteria({id}, opt).front();
}

std::vector<CriterionResult> run_criteria(const std::vector<int>& ids, const VerifyOptions& opt) {
  std::map<int, CriterionResult> done;
  auto run_one = [&](int id) -> const CriterionResult& {
    auto it = done.find(id);
    if (it != done.end()) return it->second;
    auto t0 = std::chrono::steady_clock::now();
    CriterionResult res;
    if (id == 10) {
      std::vector<const CriterionResult*> parts;
      for (int k = 1; k <= 6; ++k) {
        auto jt = done.find(k);
        if (jt == done.end()) {
          CriterionResult sub;
          sub.id = k;
          sub.name = criterion_name(k);
          Collector c{sub, {}};
          registry()[k - 1].second(c, opt);
          c.flush();
          jt = done.emplace(k, std::move(sub)).first;
        }
        parts.push_back(&jt->second);
      }
      res = aggregate_ladders(parts);
    } else {
      res.id = id;
      res.name = criterion_name(id);
      Collector c{res, {}};
      registry()[id - 1].second(c, opt);
      c.flush();
    }
    res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return done[id] = std::move(res);
  };
  std::vector<CriterionResult> out;
  for (int id : ids) {
    criterion_name(id);
    out.push_back(run_one(id));
  }
  return out;
}

}  // namespace unram
