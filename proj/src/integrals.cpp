#include "unram/integrals.hpp"

#include <algorithm>
#include <sstream>

namespace unram {

namespace {

const RootDatum& rank_one_datum(const SmoothCharacter& chi, bool* gl2) {
  const RootDatum& d = chi.datum();
  if (d.name == "GL2") {
    *gl2 = true;
  } else if (d.name == "SL2") {
    *gl2 = false;
  } else {
    throw UnsupportedClass("orbital integrals are implemented for SL2 and GL2, got " + d.name);
  }
  return d;
}

std::string units_str(const std::vector<TElem>& m) {
  std::string out;
  for (size_t i = 0; i < m.size(); ++i) out += (i ? "," : "") + m[i].str();
  return "[" + out + "]";
}

std::string ivec_str(const IVec& v) {
  std::string out;
  for (size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + std::to_string(v[i]);
  return "(" + out + ")";
}

mpq_class p_power_inverse(int p, int k) {
  mpz_class d;
  mpz_ui_pow_ui(d.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(k));
  return mpq_class(1, d);
}

std::vector<TElem> lift_all(const std::vector<TElem>& v, const RingSpec& ring) {
  std::vector<TElem> out;
  for (const auto& x : v) out.push_back(lift_to(x, ring));
  return out;
}

bool same_values(const std::vector<LadderStep>& ladder) {
  for (const auto& s : ladder)
    if (s.value != ladder.front().value) return false;
  return true;
}

}  // namespace

std::string Window::str() const {
  return "N=" + std::to_string(N) + " B=" + std::to_string(B) + " c=" + std::to_string(c);
}

std::string OrbitalReport::str() const {
  std::ostringstream os;
  os << label << " = " << value.str() << " points=" << points << " evaluations=" << evaluations << " ladder";
  for (const auto& s : ladder) os << " [" << s.window.str() << ": " << s.value.str() << "]";
  os << (stable ? " stable" : " UNSTABLE");
  return os.str();
}

ElementaryFunction::ElementaryFunction(const SmoothCharacter& chi, int r, const IVec& nu)
    : chi_(chi), r_(r), nu_(nu), gl2_(false) {
  rank_one_datum(chi, &gl2_);
  if (r < 1) throw std::invalid_argument("r must be positive");
  if (static_cast<int>(nu.size()) != chi.datum().rank) throw UnsupportedClass("cocharacter has the wrong rank");
  chi_r_ = chi.pullback_norm(r);
  TypeDatum type = build_type(chi);
  cell_.fplus = type.depths()[0];
  cell_.fminus = type.depths()[1];
  cell_.a = nu[0];
  cell_.b = gl2_ ? nu[1] : -nu[0];
  if (cell_.a < cell_.b) throw UnsupportedClass("cocharacter must be dominant");
}

const RingSpec& ElementaryFunction::layer(int N) const {
  return RingSpec::get(chi_.ring().p, chi_.ring().e * r_, N);
}

std::optional<RootOfUnity> ElementaryFunction::eval(const FMat& g) const {
  if (g.size() != 2) throw UnsupportedClass("elementary functions live on 2x2 matrices");
  const RingSpec& S = g.ring();
  FElem det = g.det();
  if (det.is_zero_like() || det.valuation() != cell_.a + cell_.b) return std::nullopt;
  const FElem& x22 = g.at(1, 1);
  if (x22.is_zero_like() || x22.valuation() != cell_.b) return std::nullopt;
  if (!g.at(1, 0).val_at_least(cell_.b + cell_.fminus)) return std::nullopt;
  if (!g.at(0, 1).val_at_least(cell_.b + cell_.fplus)) return std::nullopt;
  FElem f2 = x22 * FElem::p_power(S, -cell_.b);
  FElem f1 = det / (x22 * FElem::p_power(S, cell_.a));
  if (std::min(f1.rel_prec(), f2.rel_prec()) < chi_.level()) throw PrecisionExhausted("torus part below the level");
  TElem t2 = f2.unit_part(), t1 = f1.unit_part();
  SmoothCharacter chi = chi_r_.rebind(S);
  return (gl2_ ? chi.evaluate({t1, t2}) : chi.evaluate({t1})).inv();
}

std::optional<RootOfUnity> ElementaryFunction::eval(const ChevalleyGroup& G, const GroupWord& g) const {
  return eval(G.matrix_oracle(g));
}

int torus_class_spread(const TorusClass& t, bool gl2) {
  if (t.m.size() != (gl2 ? 2u : 1u) || t.lambda.size() != t.m.size())
    throw UnsupportedClass("torus class has the wrong number of coordinates");
  return gl2 ? std::abs(t.lambda[0] - t.lambda[1]) : 2 * std::abs(t.lambda[0]);
}

const RingSpec& torus_class_ring(const TorusClass& t, bool gl2, const RingSpec& layer) {
  return RingSpec::get(layer.p, layer.e, layer.N + torus_class_spread(t, gl2));
}

ScaledMat2 torus_class_matrix(const TorusClass& t, bool gl2, const RingSpec& ring, int* det_val, TElem* det_unit) {
  if (torus_class_spread(t, gl2) >= ring.N)
    throw WindowTooSmall("lattice part " + ivec_str(t.lambda) + " does not fit precision " + std::to_string(ring.N));
  std::vector<TElem> m = lift_all(t.m, ring);
  for (const auto& u : m)
    if (!u.is_unit()) throw UnsupportedClass("torus class needs unit coordinates");
  if (gl2) {
    *det_val = t.lambda[0] + t.lambda[1];
    *det_unit = m[0] * m[1];
    return ScaledMat2::diag(m[0], t.lambda[0], m[1], t.lambda[1]);
  }
  *det_val = 0;
  *det_unit = TElem(ring, 1);
  return ScaledMat2::diag(m[0], t.lambda[0], m[0].inv(), -t.lambda[0]);
}

Cyclo twisted_orbital_value(const ElementaryFunction& phi, const TorusClass& delta, const Window& w, int threads,
                            int64_t* points, int64_t* evaluations) {
  const Cell2& cell = phi.cell();
  int level = phi.base_character().level();
  if (w.N < std::max({level + cell.b, cell.b + cell.fplus, cell.b + cell.fminus}) + 1 || w.B < 0 || w.c < 0)
    throw WindowTooSmall("window " + w.str() + " cannot resolve the support of the elementary function");
  const RingSpec& L = phi.layer(w.N);
  SmoothCharacter chi = phi.chi_r(w.N);
  Rank1Orbital job;
  job.ring = &L;
  job.theta_power = phi.theta_power();
  job.gl2 = phi.gl2();
  job.cell = cell;
  job.chi = &chi;
  job.delta = torus_class_matrix(delta, phi.gl2(), torus_class_ring(delta, phi.gl2(), L), &job.delta_det_val,
                                 &job.delta_det_unit);
  job.B = w.B;
  job.c = w.c;
  Rank1Result res = rank1_orbital_parallel(job, threads);
  if (points) *points += res.points;
  if (evaluations) *evaluations += res.evaluations;
  return res.counts.value(p_power_inverse(L.p, res.weight_exponent));
}

OrbitalReport brute_twisted_orbital(const ElementaryFunction& phi, const TorusClass& delta, const Window& w,
                                    int threads) {
  OrbitalReport rep;
  rep.label = std::string(phi.r() == 1 ? "O" : "TO") + " r=" + std::to_string(phi.r()) + " nu=" +
              ivec_str(phi.nu()) + " at m=" + units_str(delta.m) + " lambda=" + ivec_str(delta.lambda);
  for (const Window& step : {w, Window{w.N + 1, w.B, w.c}, Window{w.N, w.B + 1, w.c}}) {
    Cyclo v = twisted_orbital_value(phi, delta, step, threads, &rep.points, &rep.evaluations);
    rep.ladder.push_back({step, v});
  }
  rep.value = rep.ladder.front().value;
  rep.stable = same_values(rep.ladder);
  return rep;
}

Cyclo closed_form_orbital(const ElementaryFunction& phi, const TorusClass& delta) {
  if (delta.lambda != phi.nu()) return Cyclo();
  const RingSpec& L = phi.layer(std::max(delta.m.front().spec().N, phi.base_character().level()));
  SmoothCharacter chi = phi.chi_r(L.N);
  return Cyclo::root(chi.evaluate(lift_all(delta.m, L)).inv());
}

std::vector<TElem> norm_units(const std::vector<TElem>& m, int r, int base_degree, const RingSpec& base) {
  if (m.empty()) return {};
  const RingSpec& big = m.front().spec();
  if (big.e != base_degree * r || base.e != base_degree) throw DegreeMismatch("norm needs E_r over E");
  const RingSpec& small = RingSpec::get(base.p, base.e, big.N);
  ExtensionTower tower(small, big);
  std::vector<TElem> out;
  for (const auto& u : m) out.push_back(lift_to(tower.descend(norm_to_fixed(u, base_degree)), base));
  return out;
}

OrbitalReport stable_orbital(const ElementaryFunction& phi, const TorusClass& delta, const Window& w, int threads) {
  if (delta.lambda != phi.nu())
    throw UnsupportedClass("stable classes are built for translates m nu(p) of the function's own cocharacter");
  OrbitalReport rep = brute_twisted_orbital(phi, delta, w, threads);
  rep.label = "S" + rep.label;
  if (phi.r() == 1) return rep;
  // the stable class is the single ^0T_r-theta class of m: every m k theta(k)^{-1} gives the same value
  const RingSpec& L = phi.layer(w.N);
  const UnitGroup& U = UnitGroup::get(L, std::min(L.N, 2));
  std::vector<TElem> ks = {U.tame_generator()};
  for (const auto& x : U.wild_generators()) ks.push_back(x);
  int theta = phi.theta_power();
  for (const auto& k : ks) {
    TorusClass moved = delta;
    moved.m = lift_all(delta.m, L);
    for (size_t j = 0; j < moved.m.size(); ++j) {
      TElem kj = j == 0 ? k : k * k;  // a GL2 torus point with distinct coordinates
      moved.m[j] = moved.m[j] * kj * kj.frobenius(theta).inv();
    }
    Cyclo v = twisted_orbital_value(phi, moved, w, threads, &rep.points, &rep.evaluations);
    if (v != rep.value) rep.stable = false;
  }
  return rep;
}

std::vector<TorusClass> compact_torus_classes(bool gl2, const RingSpec& layer, int level) {
  std::vector<TElem> units;
  for (const auto& x : window_points(layer, 0, level))
    if (x.is_unit()) units.push_back(x);
  std::vector<TorusClass> out;
  if (!gl2) {
    for (const auto& u : units) out.push_back({{u}, {0}});
    return out;
  }
  for (const auto& u : units)
    for (const auto& v : units) out.push_back({{u, v}, {0, 0}});
  return out;
}

std::string MatchingReport::str() const {
  std::ostringstream os;
  int stable = 0, agree = 0;
  for (const auto& r : rows) {
    stable += r.stable;
    agree += r.twisted == r.untwisted && r.twisted == r.closed;
  }
  os << "classes=" << rows.size() << " agree=" << agree << " stable=" << stable;
  for (const auto& [g, v] : non_norm) os << "\n  non-norm " << g << " SO=" << v.str();
  os << "\n  " << (pass ? "PASS" : "FAIL");
  return os.str();
}

MatchingReport verify_matching(const SmoothCharacter& chi, const IVec& nu, int r, const Window& w, int threads,
                               int stride) {
  ElementaryFunction phi(chi, r, nu);
  ElementaryFunction f(chi, 1, vec_scale(nu, r));
  const RingSpec& L = phi.layer(w.N);
  const RingSpec& base = f.layer(w.N);
  MatchingReport rep;
  rep.pass = true;
  auto classes = compact_torus_classes(phi.gl2(), L, 2);
  for (size_t i = 0; i < classes.size(); i += std::max(1, stride)) {
    TorusClass delta{classes[i].m, nu};
    OrbitalReport twisted = stable_orbital(phi, delta, w, threads);
    TorusClass gamma{norm_units(delta.m, r, chi.ring().e, base), vec_scale(nu, r)};
    OrbitalReport untwisted = stable_orbital(f, gamma, w, threads);
    MatchingRow row{units_str(delta.m), twisted.value, untwisted.value, closed_form_orbital(phi, delta),
                    twisted.stable && untwisted.stable};
    rep.pass = rep.pass && row.stable && row.twisted == row.untwisted && row.twisted == row.closed;
    rep.rows.push_back(std::move(row));
  }
  if (phi.gl2() && r == 2) {
    // odd determinant valuation: never a norm from the unramified quadratic extension
    for (const IVec& lam : {IVec{1, 0}, IVec{3, -2}, IVec{2, -1}}) {
      TorusClass gamma{{TElem(base, 1), TElem(base, 2)}, lam};
      OrbitalReport so = brute_twisted_orbital(f, gamma, w, threads);
      rep.non_norm.emplace_back("diag(" + ivec_str(lam) + ")", so.value);
      rep.pass = rep.pass && so.stable && so.value.is_zero();
    }
  }
  return rep;
}

std::string DescentReport::str() const {
  std::ostringstream os;
  os << label << " j=" << j << " lhs=" << lhs.value.str() << " rhs=" << rhs.str() << " terms";
  for (const auto& t : torus_terms) os << " " << t.str();
  os << (lhs.stable ? " stable" : " UNSTABLE") << (pass ? " PASS" : " FAIL");
  return os.str();
}

DescentReport verify_descent(const SmoothCharacter& chi, int r, const std::vector<TElem>& m, int N, int threads) {
  bool gl2 = false;
  rank_one_datum(chi, &gl2);
  if (!gl2) throw UnsupportedClass("descent to the torus is checked on GL2");
  ElementaryFunction unit(chi, r, {0, 0});
  const RingSpec& L = unit.layer(N);
  std::vector<TElem> mm = lift_all(m, L);
  // gamma = N(m); a = gamma_2 / gamma_1 over F
  std::vector<TElem> gamma = norm_units(mm, r, chi.ring().e, RingSpec::get(L.p, chi.ring().e, N));
  TElem one_minus_a = TElem(gamma[0].spec(), 1) - gamma[1] * gamma[0].inv();
  if (one_minus_a.is_zero()) throw NotSemisimpleNorm("N(m) is central: the centralizer is not the torus");
  DescentReport rep;
  rep.label = "descent r=" + std::to_string(r) + " m=" + units_str(mm);
  rep.j = one_minus_a.valuation();
  if (rep.j + 2 >= N) throw WindowTooSmall("precision too small for val(1 - a) = " + std::to_string(rep.j));
  rep.lhs = brute_twisted_orbital(unit, {mm, {0, 0}}, Window{N, rep.j, 0}, threads);

  // TO^{T_r}_{m theta}(e_{w rho_T}) = average over t of (w chi_r)^{-1}(m t^{-1} theta(t))
  SmoothCharacter chi_r = unit.chi_r(N);
  int C = chi.level();
  int theta = unit.theta_power();
  auto classes = compact_torus_classes(true, L, C);
  for (bool swap : {false, true}) {
    RootCounts acc(chi_r.order());
    for (const auto& t : classes) {
      std::vector<TElem> x(2, TElem(L));
      for (int i = 0; i < 2; ++i) x[i] = mm[i] * t.m[i].inv() * t.m[i].frobenius(theta);
      acc.add(-chi_r.exponent(swap ? std::vector<TElem>{x[1], x[0]} : x));
    }
    rep.torus_terms.push_back(acc.value(mpq_class(1, static_cast<long>(classes.size()))));
  }
  mpz_class qj;
  mpz_ui_pow_ui(qj.get_mpz_t(), static_cast<unsigned long>(chi.ring().q()), static_cast<unsigned long>(rep.j));
  rep.rhs = (rep.torus_terms[0] + rep.torus_terms[1]) * mpq_class(qj);
  rep.pass = rep.lhs.stable && rep.lhs.value == rep.rhs;
  return rep;
}

std::vector<ScaledMat2> sl2_mod(const RingSpec& ring, int M, bool iwahori) {
  std::vector<TElem> all = window_points(ring, 0, M);
  std::vector<TElem> units, in_p;
  for (const auto& x : all) {
    if (x.is_unit())
      units.push_back(x);
    else
      in_p.push_back(x);
  }
  TElem one(ring, 1);
  std::vector<ScaledMat2> out;
  const auto& lower = iwahori ? in_p : all;
  for (const auto& a : units) {
    TElem ainv = a.inv();
    for (const auto& b : all)
      for (const auto& c : lower) out.push_back({a, b, c, (one + b * c) * ainv, 0});
  }
  if (iwahori) return out;
  for (const auto& a : in_p)
    for (const auto& c : units) {
      TElem cinv = c.inv();
      for (const auto& d : all) out.push_back({a, (a * d - one) * cinv, c, d, 0});
    }
  return out;
}

namespace {

struct IndexSetup {
  ElementaryFunction unit;
  Cell2 J;
  int M;
  int64_t index_IJ;
  int64_t base_reps;
};

IndexSetup index_setup(const SmoothCharacter& chi, int r) {
  bool gl2 = false;
  rank_one_datum(chi, &gl2);
  if (gl2) throw UnsupportedClass("the [I:J] comparison is checked on SL2");
  ElementaryFunction unit(chi, r, {0});
  Cell2 J = unit.cell();
  int M = std::max({chi.level(), J.fplus, J.fminus});
  // [I:J] over F from the finite quotients mod K_M
  const RingSpec& base = RingSpec::get(chi.ring().p, chi.ring().e, M + 1);
  int64_t nI = 0, nJ = 0;
  for (const auto& x : sl2_mod(base, M, true)) {
    ++nI;
    nJ += x.val_b() >= J.fplus && x.val_c() >= J.fminus;
  }
  int64_t reps = static_cast<int64_t>(i_over_j(base, J.fplus, J.fminus).size());
  return {unit, J, M, nI / nJ, reps};
}

// chi^{-1}(torus part) for X in J, as an exponent; false off J
bool e_rho_exponent(const ScaledMat2& X, const Cell2& J, const SmoothCharacter& chi, int64_t* k) {
  TElem t2;
  if (X.min_val() < 0 || !cell_torus(X, J, &t2)) return false;
  // det X = 1, so t1 = 1 / t2
  *k = -chi.exponent({t2.inv()});
  return true;
}

}  // namespace

std::string IndexComparison::str() const {
  std::ostringstream os;
  os << label << " [I:J]=" << index_IJ << " (I/J reps " << base_reps << ", [I_r:J_r]=" << layer_index
     << ") lhs=" << lhs.value.str()
     << " rhs=[I:J]*" << rhs.value.str() << (lhs.stable && rhs.stable ? " stable" : " UNSTABLE")
     << (pass ? " PASS" : " FAIL");
  return os.str();
}

IndexComparison compare_index_unit(const SmoothCharacter& chi, int r) {
  IndexSetup st = index_setup(chi, r);
  const RingSpec& ring = RingSpec::get(chi.ring().p, chi.ring().e * r, st.M + 1);
  SmoothCharacter chi_r = st.unit.chi_r(ring.N);
  std::vector<CosetRep> IJ = i_over_j(ring, st.J.fplus, st.J.fminus);
  int theta = st.unit.theta_power();
  auto Iw = sl2_mod(ring, st.M, true);
  RootCounts lhs(chi_r.order()), rhs(chi_r.order());
  for (const auto& i : Iw) {
    ScaledMat2 iinv{i.d, -i.b, -i.c, i.a, 0};
    ScaledMat2 X = iinv * (theta ? i.frobenius(theta) : i);
    int64_t k = 0;
    if (e_rho_exponent(X, st.J, chi_r, &k)) rhs.add(k);
    for (const auto& a : IJ)
      if (e_rho_exponent(a.kinv * X * a.k, st.J, chi_r, &k)) lhs.add(k);
  }
  IndexComparison rep;
  rep.label = "[I:J] delta=1 r=" + std::to_string(r) + " M=" + std::to_string(st.M);
  rep.index_IJ = st.index_IJ;
  rep.base_reps = st.base_reps;
  rep.layer_index = static_cast<int64_t>(IJ.size());
  mpq_class n(static_cast<long>(Iw.size()));
  // vol_i(I_r) = 1: TO(e_{rho^I}) = avg e_{rho^I} = [I_r:J_r] avg sum_a e_rho(a^{-1} X a)
  rep.lhs.label = "TO(e_rho^I)";
  rep.lhs.value = lhs.value(mpq_class(rep.layer_index) / n);
  // vol_j(I_r) = [I_r:J_r]: TO(e_rho) = [I_r:J_r] avg e_rho
  rep.rhs.label = "TO(e_rho)";
  rep.rhs.value = rhs.value(mpq_class(rep.layer_index) / n);
  // exact finite averages: the quotient mod K_M carries no truncation
  rep.lhs.stable = rep.rhs.stable = true;
  rep.lhs.points = rep.rhs.points = static_cast<int64_t>(Iw.size());
  rep.pass = rep.index_IJ == rep.base_reps &&
             rep.lhs.value == rep.rhs.value * mpq_class(static_cast<long>(rep.index_IJ));
  return rep;
}

namespace {

// TO(e_{rho^I}) with vol(I) = 1 by summing over K mod K_M
Cyclo index_lhs_value(const IndexSetup& st, const TorusClass& delta, const Window& w, int64_t* points,
                      int64_t* evaluations) {
  const RingSpec& L = st.unit.layer(w.N);
  int det_val = 0;
  TElem det_unit;
  ScaledMat2 d0 = torus_class_matrix(delta, false, torus_class_ring(delta, false, L), &det_val, &det_unit);
  const RingSpec& S = RingSpec::get(L.p, L.e, w.N + 2 * w.B + d0.s);
  SmoothCharacter chi = st.unit.chi_r(S.N);
  ScaledMat2 d = lift_to(d0, S);
  int theta = st.unit.theta_power();
  auto Kq = sl2_mod(S, st.M, false);
  std::vector<ScaledMat2> Kinv, Ktheta;
  for (const auto& k : Kq) {
    Kinv.push_back({k.d, -k.b, -k.c, k.a, 0});
    Ktheta.push_back(theta ? k.frobenius(theta) : k);
  }
  std::vector<CosetRep> IJ = i_over_j(S, st.J.fplus, st.J.fminus);
  int64_t KJ = static_cast<int64_t>(k_over_j(S, st.J.fplus, st.J.fminus).size());
  RootCounts acc(chi.order());
  Cell2 I{0, 0, 0, 1};
  for (const auto& x : window_points(S, w.B, w.c)) {
    ++*points;
    ScaledMat2 Y = ScaledMat2::upper(-x, w.B) * d * ScaledMat2::upper(theta ? x.frobenius(theta) : x, w.B);
    // k^{-1} Y theta(k) in I forces Y in K
    if (Y.min_val() < 0) continue;
    for (size_t i = 0; i < Kq.size(); ++i) {
      ScaledMat2 X = Kinv[i] * Y * Ktheta[i];
      ++*evaluations;
      TElem t2;
      if (!cell_torus(X, I, &t2)) continue;
      for (const auto& a : IJ) {
        int64_t k = 0;
        if (e_rho_exponent(a.kinv * X * a.k, st.J, chi, &k)) acc.add(k);
      }
    }
  }
  // vol_j(K_M) = [K:J] / |K mod K_M|, then q_r^{-c}
  mpq_class weight = mpq_class(KJ, static_cast<long>(Kq.size())) * p_power_inverse(L.p, w.c * L.e);
  return acc.value(weight);
}

}  // namespace

IndexComparison compare_index(const SmoothCharacter& chi, int r, const TorusClass& delta, const Window& w,
                              int threads) {
  IndexSetup st = index_setup(chi, r);
  IndexComparison rep;
  rep.label = "[I:J] r=" + std::to_string(r) + " delta m=" + units_str(delta.m) + " lambda=" + ivec_str(delta.lambda);
  rep.index_IJ = st.index_IJ;
  rep.base_reps = st.base_reps;
  rep.layer_index = static_cast<int64_t>(i_over_j(st.unit.layer(w.N), st.J.fplus, st.J.fminus).size());
  rep.lhs.label = "TO(e_rho^I)";
  for (const Window& step : {w, Window{w.N + 1, w.B, w.c}, Window{w.N, w.B + 1, w.c}})
    rep.lhs.ladder.push_back({step, index_lhs_value(st, delta, step, &rep.lhs.points, &rep.lhs.evaluations)});
  rep.lhs.value = rep.lhs.ladder.front().value;
  rep.lhs.stable = same_values(rep.lhs.ladder);
  rep.rhs = brute_twisted_orbital(st.unit, delta, w, threads);
  rep.pass = rep.lhs.stable && rep.rhs.stable && rep.index_IJ == rep.base_reps &&
             rep.lhs.value == rep.rhs.value * mpq_class(static_cast<long>(rep.index_IJ));
  return rep;
}

}  // namespace unram
