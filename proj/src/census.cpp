#include "unram/census.hpp"

#include <algorithm>
#include <random>
#include <sstream>

namespace unram {

namespace {

std::string chi_label(const SmoothCharacter& chi) {
  return chi.datum().name + " level=" + std::to_string(chi.level()) + " order=" + std::to_string(chi.order());
}

// every element of p^lo O / p^hi O
std::vector<TElem> payloads(const RingSpec& ring, int lo, int hi) {
  std::vector<TElem> out;
  if (lo >= hi) {
    out.emplace_back(ring, 0);
    return out;
  }
  int64_t per = ring.ppow[hi - lo];
  int64_t total = 1;
  for (int i = 0; i < ring.e; ++i) total *= per;
  out.reserve(static_cast<size_t>(total));
  for (int64_t code = 0; code < total; ++code) {
    Coeffs c{};
    int64_t t = code;
    for (int i = 0; i < ring.e; ++i) {
      c[i] = (t % per) * ring.ppow[lo];
      t /= per;
    }
    out.emplace_back(ring, c);
  }
  return out;
}

// nonzero residues mod p, one lift each
std::vector<TElem> residue_units(const RingSpec& ring) {
  std::vector<TElem> out;
  for (const auto& x : payloads(ring, 0, 1))
    if (!x.is_zero()) out.push_back(x);
  return out;
}

int64_t ipow(int64_t b, int k) {
  int64_t v = 1;
  while (k-- > 0) v *= b;
  return v;
}

std::string ivec_str(const IVec& v) {
  std::string out;
  for (size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + std::to_string(v[i]);
  return "(" + out + ")";
}

TElem random_elem(const RingSpec& s, std::mt19937_64& rng) {
  Coeffs c{};
  for (int i = 0; i < s.e; ++i) c[i] = static_cast<int64_t>(rng() % static_cast<uint64_t>(s.pN));
  return TElem(s, c);
}

TElem random_unit(const RingSpec& s, std::mt19937_64& rng) {
  for (;;) {
    TElem a = random_elem(s, rng);
    if (a.is_unit()) return a;
  }
}

// unit times p^v, zero when v >= N
TElem random_at_valuation(const RingSpec& s, std::mt19937_64& rng, int v) {
  if (v >= s.N) return TElem(s, 0);
  return random_unit(s, rng) * TElem(s, s.ppow[v]);
}

bool word_equal(const ChevalleyGroup& G, const GroupWord& a, const GroupWord& b) {
  return G.matrix_oracle(a).equals(G.matrix_oracle(b));
}

Generator coroot_gen(const RootDatum& d, int root, const TElem& x) {
  return Generator::t(coroot_point(d, root, x), IVec(d.rank, 0));
}

// roots sent negative by w, by non-increasing height
std::vector<int> inverted_roots(const WeylGroup& W, int w) {
  const RootDatum& d = W.datum();
  std::vector<int> out;
  for (int a = 0; a < d.num_roots(); ++a)
    if (!d.positive(W[w].act_root(a))) out.push_back(a);
  std::stable_sort(out.begin(), out.end(), [&](int x, int y) { return d.height[x] > d.height[y]; });
  return out;
}

struct UTerm {
  int root;
  TElem a;
};

GroupWord u_word(const RootDatum& d, const RingSpec& ring, const std::vector<UTerm>& u) {
  GroupWord g(d, ring);
  for (const auto& t : u) g.push(Generator::u(t.root, t.a));
  return g;
}

/*
 * The root alpha_k and c_u of the constructive argument: c_u is the largest
 * cond - 1 - val over the factors; alpha_k attains it with the smallest
 * height, rightmost on ties.  Factors with val >= f are dropped first.
 */
bool constructive_root(const RootDatum& d, const ConcaveFunction& f, std::vector<UTerm> u, int* root, int* cu) {
  for (;;) {
    std::vector<size_t> live;
    for (size_t i = 0; i < u.size(); ++i)
      if (!u[i].a.is_zero()) live.push_back(i);
    if (live.empty()) return false;
    int best = -1 << 30;
    for (size_t i : live) best = std::max(best, f.cond[u[i].root] - 1 - u[i].a.valuation());
    size_t k = live.front();
    bool found = false;
    for (size_t i : live) {
      if (f.cond[u[i].root] - 1 - u[i].a.valuation() != best) continue;
      if (!found || d.height[u[i].root] <= d.height[u[k].root]) k = i;
      found = true;
    }
    if (u[k].a.valuation() >= f.f[u[k].root]) {
      u[k].a = TElem(u[k].a.spec(), 0);
      continue;
    }
    *root = u[k].root;
    *cu = best;
    return true;
  }
}

std::string u_str(const std::vector<UTerm>& u) {
  std::string out;
  for (size_t i = 0; i < u.size(); ++i) out += (i ? " " : "") + std::to_string(u[i].root) + ":" + u[i].a.str();
  return out.empty() ? "1" : out;
}

struct CensusPass {
  std::vector<AxiomCoset> rows;
  int64_t constructive = 0;
};

CensusPass axiom_census_once(const SmoothCharacter& chi, int w, int search_depth) {
  const RootDatum& d = chi.datum();
  const RingSpec& R = chi.ring();
  TypeDatum type = build_type(chi);
  ChevalleyGroup G(d, R);
  const WeylGroup& W = G.weyl();
  int maxc = *std::max_element(type.f.cond.begin(), type.f.cond.end());
  if (R.N < maxc + 3) throw PrecisionExhausted("axiom census needs precision >= max cond + 3");

  std::vector<int> roots = inverted_roots(W, w);
  std::vector<std::vector<TElem>> ranges;
  for (int a : roots) ranges.push_back(payloads(R, d.positive(a) ? 0 : 1, type.f.f[a]));
  std::vector<int> tests;
  for (int b = 0; b < d.num_roots(); ++b)
    if (d.positive(W[w].act_root(b))) tests.push_back(b);
  auto units = residue_units(R);

  // u' = u_beta(b) refutes u when u^{-1} u' u is in J with rho != 1
  auto refutes = [&](const GroupWord& u, const GroupWord& uinv, int beta, const TElem& b) {
    GroupWord g = uinv;
    g.push(Generator::u(beta, b));
    g = g * u;
    if (!membership_depth(G, g, type.depths())) return false;
    return !rho_eval(type, G, g).is_one();
  };

  CensusPass out;
  std::vector<size_t> idx(roots.size(), 0);
  for (;;) {
    std::vector<UTerm> u;
    for (size_t i = 0; i < roots.size(); ++i) u.push_back({roots[i], ranges[i][idx[i]]});
    GroupWord uw = u_word(d, R, u);
    GroupWord uinv = uw.inverse(W);
    AxiomCoset row;
    row.u = u_str(u);
    int ak = -1, cu = 0;
    if (constructive_root(d, type.f, u, &ak, &cu) && cu < R.N) {
      int beta = d.neg(ak);
      for (const auto& c : units) {
        TElem b = c * TElem(R, R.ppow[cu]);
        if (refutes(uw, uinv, beta, b)) {
          row.satisfies = false;
          row.constructive = true;
          row.witness = "u_" + std::to_string(beta) + "(" + b.str() + ")";
          break;
        }
      }
    }
    for (size_t t = 0; row.satisfies && t < tests.size(); ++t)
      for (int k = 0; row.satisfies && k < search_depth && k < R.N; ++k)
        for (const auto& c : units) {
          TElem b = c * TElem(R, R.ppow[k]);
          if (refutes(uw, uinv, tests[t], b)) {
            row.satisfies = false;
            row.witness = "u_" + std::to_string(tests[t]) + "(" + b.str() + ")";
            break;
          }
        }
    if (row.constructive) ++out.constructive;
    out.rows.push_back(row);
    size_t i = 0;
    while (i < idx.size() && ++idx[i] == ranges[i].size()) idx[i++] = 0;
    if (i == idx.size()) break;
  }
  return out;
}

ScaledMat2 sigma2(const RingSpec& ring, bool inverse) {
  TElem z(ring, 0), o(ring, 1);
  return inverse ? ScaledMat2{z, -o, o, z, 0} : ScaledMat2{z, o, -o, z, 0};
}

std::pair<int, int> translation2(const AffineWeylElement& x, bool gl2) {
  return gl2 ? std::make_pair(x.lambda[0], x.lambda[1]) : std::make_pair(x.lambda[0], -x.lambda[0]);
}

bool in_affine_double_coset(const ScaledMat2& g, const AffineWeylElement& v, bool gl2, const Depths& J) {
  auto [a, b] = translation2(v, gl2);
  bool swap = v.w != 0;
  ScaledMat2 X = swap ? g * sigma2(g.ring(), true) : g;
  Depths Jp = swap ? Depths{J.fminus, J.fplus} : J;
  TElem t1, t2;
  return double_coset_torus(X, a, b, J, Jp, &t1, &t2);
}

// {0} and c p^k for c a nonzero residue, lo <= k < hi
std::vector<TElem> monomials(const RingSpec& ring, int lo, int hi) {
  std::vector<TElem> out{TElem(ring, 0)};
  for (int k = lo; k < hi; ++k)
    for (const auto& c : residue_units(ring)) out.push_back(c * TElem(ring, ring.ppow[k]));
  return out;
}

// l(z) diag(t1, t2) n(y) with z, y monomials below p^M and t units mod p^Mt
std::vector<JRep> witness_set(const RingSpec& ring, const Depths& J, int M, int Mt, bool gl2) {
  auto zs = monomials(ring, J.fminus, M), ys = monomials(ring, J.fplus, M);
  const auto& units = UnitGroup::get(ring, Mt).units();
  std::vector<JRep> out;
  for (const auto& z : zs)
    for (const auto& t1 : units)
      for (const auto& t2 : gl2 ? units : std::vector<TElem>{t1.inv()})
        for (const auto& y : ys) {
          ScaledMat2 t = ScaledMat2::diag(t1, 0, t2, 0), tinv = ScaledMat2::diag(t1.inv(), 0, t2.inv(), 0);
          out.push_back({ScaledMat2::lower(z, 0) * t * ScaledMat2::upper(y, 0),
                         ScaledMat2::upper(-y, 0) * tinv * ScaledMat2::lower(-z, 0), t1, t2});
        }
  return out;
}

bool rank_one_gl2(const RootDatum& d) {
  if (d.name == "GL2") return true;
  if (d.name == "SL2") return false;
  throw std::invalid_argument("rank-one computation needs SL2 or GL2, got " + d.name);
}

mpq_class q_power(int64_t q, int k) {
  mpz_class v;
  mpz_ui_pow_ui(v.get_mpz_t(), static_cast<unsigned long>(q), static_cast<unsigned long>(std::abs(k)));
  return k >= 0 ? mpq_class(v) : mpq_class(1, v);
}

}  // namespace

/* ---- volume ---- */

IVec minimal_regular_dominant(const RootDatum& d) {
  IVec best;
  int best_h = 0;
  IVec v(d.rank, -3);
  for (;;) {
    if (d.is_dominant(v) && d.is_regular(v)) {
      int h = d.pairing_height(v);
      if (best.empty() || h < best_h || (h == best_h && v < best)) {
        best = v;
        best_h = h;
      }
    }
    size_t i = 0;
    while (i < v.size() && ++v[i] > 3) v[i++] = -3;
    if (i == v.size()) break;
  }
  if (best.empty()) throw std::invalid_argument("no regular dominant cocharacter in the search box");
  return best;
}

std::string VolumeReport::str() const {
  std::ostringstream os;
  os << label << " predicted=" << predicted << " product=" << product;
  if (full >= 0) os << " full=" << full;
  os << " per_root=[";
  for (size_t i = 0; i < per_root.size(); ++i) os << (i ? "," : "") << per_root[i];
  os << "] ladder=";
  for (size_t i = 0; i < ladder.size(); ++i) os << (i ? "," : "") << "M" << ladder[i].first << ":" << ladder[i].second;
  os << " stable=" << stable << " pass=" << pass;
  return os.str();
}

VolumeReport volume_check(const SmoothCharacter& chi, const IVec& nu, int r, bool full_enumeration) {
  const RootDatum& d = chi.datum();
  if (!d.is_dominant(nu)) throw std::invalid_argument("volume_check needs a dominant cocharacter");
  if (!d.is_split()) throw std::invalid_argument("volume_check is implemented for split groups");
  TypeDatum type = build_type(chi);
  const auto& f = type.depths();
  int p = chi.ring().p, e = chi.ring().e * r;
  int64_t q = ipow(p, e);

  VolumeReport rep;
  rep.label = d.name + " nu=" + ivec_str(nu) + " r=" + std::to_string(r);
  rep.predicted = ipow(q, d.pairing_height(nu));

  int M0 = 0, spread = 0;
  for (int a = 0; a < d.num_roots(); ++a) {
    int s = d.pair(d.roots[a], nu);
    spread = std::max(spread, std::abs(s));
    M0 = std::max(M0, f[a] + std::max(0, s));
  }
  const RingSpec& L = RingSpec::get(p, e, M0 + spread + 3);
  ChevalleyGroup G(d, L);
  std::vector<TElem> ones(d.rank, TElem(L, 1));
  IVec minus(nu.size());
  for (size_t i = 0; i < nu.size(); ++i) minus[i] = -nu[i];

  for (int M : {M0, M0 + 1}) {
    int64_t product = 1;
    std::vector<int64_t> idx;
    for (int a = 0; a < d.num_roots(); ++a) {
      const MatrixEntry& ent = d.root_vector[a].front();
      int64_t total = 0, inside = 0;
      for (const auto& b : payloads(L, f[a], M)) {
        ++total;
        GroupWord g(d, L);
        g.push(Generator::t(ones, minus)).push(Generator::u(a, b)).push(Generator::t(ones, nu));
        FMat X = G.matrix_oracle(g);
        FElem x = X.at(ent.row, ent.col) * FElem(L, ent.sign);
        if (!X.equals(G.root_matrix(a, x))) throw std::logic_error("conjugate left the root group");
        if (x.is_exact_zero() || x.val_at_least(f[a])) ++inside;
      }
      if (inside == 0 || total % inside != 0) throw std::logic_error("root index is not an integer");
      idx.push_back(total / inside);
      product *= total / inside;
    }
    if (M == M0) {
      rep.per_root = idx;
      rep.product = product;
    }
    rep.ladder.push_back({M, product});
  }
  rep.stable = rep.ladder[0].second == rep.ladder[1].second;

  bool full_ok = true;
  if (full_enumeration) {
    if (d.name != "SL2") throw std::invalid_argument("full enumeration is implemented for SL2");
    // J mod K_M as l(z) diag(t, t^{-1}) n(y); u^{-1} j u tested against J
    int lam = nu[0];
    int M = std::max(f[0] + 2 * lam, f[1]);
    const RingSpec& R = RingSpec::get(p, e, M + 2 * lam + 3);
    Depths J{f[0], f[1]};
    TElem one(R, 1);
    ScaledMat2 uinv = ScaledMat2::diag(one, -lam, one, lam), u = ScaledMat2::diag(one, lam, one, -lam);
    auto zs = payloads(R, J.fminus, M), ys = payloads(R, J.fplus, M);
    const auto& units = UnitGroup::get(R, M).units();
    int64_t total = 0, inside = 0;
    for (const auto& z : zs)
      for (const auto& t : units) {
        ScaledMat2 lt = ScaledMat2::lower(z, 0) * ScaledMat2::diag(t, 0, t.inv(), 0);
        for (const auto& y : ys) {
          ScaledMat2 X = uinv * (lt * ScaledMat2::upper(y, 0)) * u;
          TElem t1, t2;
          ++total;
          if (double_coset_torus(X, 0, 0, J, J, &t1, &t2)) ++inside;
        }
      }
    rep.full = inside > 0 && total % inside == 0 ? total / inside : -1;
    full_ok = rep.full == rep.predicted;
  }
  rep.pass = rep.stable && rep.product == rep.predicted && full_ok;
  return rep;
}

/* ---- axiom for u ---- */

std::string AxiomCensus::str() const {
  std::ostringstream os;
  os << label << " w=" << w << " cosets=" << cosets << " satisfying=" << satisfying
     << " identity_satisfies=" << identity_satisfies << " failing=" << failing << " constructive=" << constructive
     << " stable=" << stable << " pass=" << pass;
  return os.str();
}

AxiomCensus verify_axiom_u(const SmoothCharacter& chi, int w, int search_depth) {
  const RingSpec& R = chi.ring();
  CensusPass base = axiom_census_once(chi, w, search_depth);
  CensusPass finer = axiom_census_once(chi.rebind(RingSpec::get(R.p, R.e, R.N + 1)), w, search_depth + 1);

  AxiomCensus rep;
  rep.label = chi_label(chi);
  rep.w = w;
  rep.rows = base.rows;
  rep.cosets = static_cast<int64_t>(base.rows.size());
  rep.constructive = base.constructive;
  for (const auto& row : base.rows) {
    if (row.satisfies) ++rep.satisfying;
    else ++rep.failing;
  }
  rep.identity_satisfies = !base.rows.empty() && base.rows.front().satisfies;
  rep.stable = finer.rows.size() == base.rows.size();
  for (size_t i = 0; rep.stable && i < base.rows.size(); ++i)
    rep.stable = base.rows[i].satisfies == finer.rows[i].satisfies;
  rep.pass = rep.satisfying == 1 && rep.identity_satisfies && rep.constructive == rep.failing && rep.stable;
  return rep;
}

/* ---- Chevalley relations ---- */

std::string RelationReport::str() const {
  std::ostringstream os;
  os << group;
  for (int i = 0; i < 3; ++i) os << " rel" << i + 1 << "=" << tuples[i] - failures[i] << "/" << tuples[i];
  os << " normal_form=" << normal_forms - normal_form_failures << "/" << normal_forms << " pass=" << pass;
  return os.str();
}

RelationReport chevalley_relations(const RootDatum& d, const RingSpec& ring, int tuples, uint64_t seed) {
  std::mt19937_64 rng(seed);
  ChevalleyGroup G(d, ring);
  RelationReport rep;
  rep.group = d.name;
  int nr = d.num_roots();
  auto pick_root = [&] { return static_cast<int>(rng() % static_cast<uint64_t>(nr)); };
  TElem one(ring, 1);

  for (int t = 0; t < tuples; ++t) {
    // (1) [u_a(s), u_b(t)] = prod u_{ia+jb}(C s^i t^j)
    if (nr <= 2) break;  // rank one: no pair of non-opposite roots
    int a = pick_root(), b = pick_root();
    while (b == a || b == d.neg(a)) b = pick_root();
    TElem s = random_elem(ring, rng), x = random_elem(ring, rng);
    GroupWord lhs(d, ring), rhs(d, ring);
    lhs.push(Generator::u(a, s)).push(Generator::u(b, x)).push(Generator::u(a, -s)).push(Generator::u(b, -x));
    for (const auto& term : G.commutator(a, b))
      rhs.push(Generator::u(term.root, TElem(ring, term.C) * s.pow(term.i) * x.pow(term.j)));
    ++rep.tuples[0];
    if (!word_equal(G, lhs, rhs)) ++rep.failures[0];
  }
  for (int t = 0; t < tuples; ++t) {
    // (2) [u_a(x), u_{-a}(y)] = u_a(-x^2 y / c) a^vee(c^{-1}) u_{-a}(x y^2 / c), c = 1 - x y
    int a = pick_root();
    TElem x = random_elem(ring, rng), y = random_elem(ring, rng);
    if (!(one - x * y).is_unit()) y = y * TElem(ring, ring.p);
    TElem c = one - x * y, ci = c.inv();
    GroupWord lhs(d, ring), rhs(d, ring);
    lhs.push(Generator::u(a, x)).push(Generator::u(d.neg(a), y)).push(Generator::u(a, -x));
    lhs.push(Generator::u(d.neg(a), -y));
    rhs.push(Generator::u(a, -(x * x * y * ci))).push(coroot_gen(d, a, ci)).push(Generator::u(d.neg(a), x * y * y * ci));
    ++rep.tuples[1];
    if (!word_equal(G, lhs, rhs)) ++rep.failures[1];
  }
  for (int t = 0; t < tuples; ++t) {
    // (3) [a^vee(1 + b), u_beta(x)] = u_beta(((1 + b)^<beta, a^vee> - 1) x)
    int a = pick_root(), beta = pick_root();
    TElem b = random_elem(ring, rng) * TElem(ring, ring.p), x = random_elem(ring, rng);
    TElem c = one + b;
    int pairing = d.pair(d.roots[beta], d.coroots[a]);
    GroupWord lhs(d, ring), rhs(d, ring);
    lhs.push(coroot_gen(d, a, c)).push(Generator::u(beta, x)).push(coroot_gen(d, a, c.inv()));
    lhs.push(Generator::u(beta, -x));
    rhs.push(Generator::u(beta, (c.pow(pairing) - one) * x));
    ++rep.tuples[2];
    if (!word_equal(G, lhs, rhs)) ++rep.failures[2];
  }
  for (int t = 0; t < tuples / 10; ++t) {
    GroupWord w(d, ring);
    for (int k = 0; k < 8; ++k) {
      if (rng() % 3 == 0) {
        std::vector<TElem> u;
        for (int j = 0; j < d.rank; ++j) u.push_back(random_unit(ring, rng));
        w.push(Generator::t(u, IVec(d.rank, 0)));
      } else {
        int r = pick_root();
        TElem x = random_elem(ring, rng);
        w.push(Generator::u(r, d.positive(r) ? x : x * TElem(ring, ring.p)));
      }
    }
    ++rep.normal_forms;
    IwahoriNormalForm nf = normal_form(G, w);
    if (!word_equal(G, nf.to_word(d, ring), w) || !(normal_form(G, nf.to_word(d, ring)) == nf))
      ++rep.normal_form_failures;
  }
  rep.pass = rep.failures[0] + rep.failures[1] + rep.failures[2] + rep.normal_form_failures == 0;
  return rep;
}

/* ---- commutator lemma ---- */

std::string LemmaReport::str() const {
  std::ostringstream os;
  os << label;
  const char* names[3] = {"a", "b", "c"};
  for (int i = 0; i < 3; ++i) os << " " << names[i] << "=" << samples[i] - failures[i] << "/" << samples[i];
  os << " pass=" << pass;
  return os.str();
}

LemmaReport commutator_lemma(const SmoothCharacter& chi, int samples, uint64_t seed) {
  const RootDatum& d = chi.datum();
  const RingSpec& R = chi.ring();
  TypeDatum type = build_type(chi);
  const auto& f = type.f;
  ChevalleyGroup G(d, R);
  const WeylGroup& W = G.weyl();
  std::mt19937_64 rng(seed);
  TElem one(R, 1);

  LemmaReport rep;
  rep.label = chi_label(chi);
  auto in_Uc = [&](int root, const TElem& x, int c) { return x.is_zero() || x.valuation() >= std::max(c, f.f[root]); };
  auto fail = [&](int part, const std::string& what) {
    ++rep.failures[part];
    if (rep.failure_lines.size() < 20) rep.failure_lines.push_back(what);
  };

  int attempts = 0;
  while ((rep.samples[0] < samples || rep.samples[1] < samples || rep.samples[2] < samples) && ++attempts < 200 * samples) {
    // a random non-trivial coset representative u
    int w = static_cast<int>(rng() % static_cast<uint64_t>(W.size()));
    std::vector<UTerm> u;
    bool outside_J = false;
    for (int a : inverted_roots(W, w)) {
      int lo = d.positive(a) ? 0 : 1;
      if (lo >= f.f[a]) continue;
      int v = lo + static_cast<int>(rng() % static_cast<uint64_t>(f.f[a] - lo + 1));
      TElem x = random_at_valuation(R, rng, v);
      if (!x.is_zero() && x.valuation() < f.f[a]) outside_J = true;
      u.push_back({a, x});
    }
    if (!outside_J) continue;
    int cu = -1 << 30;
    for (const auto& t : u)
      if (!t.a.is_zero()) cu = std::max(cu, f.cond[t.root] - 1 - t.a.valuation());
    const UTerm& y = u[rng() % u.size()];
    if (y.a.is_zero()) continue;
    int c = cu + static_cast<int>(rng() % 3);
    int part = static_cast<int>(rng() % 3);
    if (rep.samples[part] >= samples) continue;

    if (part == 0) {
      int a = static_cast<int>(rng() % static_cast<uint64_t>(d.num_roots()));
      if (a == d.neg(y.root)) continue;
      TElem x = random_at_valuation(R, rng, std::max(c, f.f[a]) + static_cast<int>(rng() % 2));
      GroupWord lhs(d, R), rhs(d, R);
      lhs.push(Generator::u(a, -x)).push(Generator::u(y.root, -y.a)).push(Generator::u(a, x));
      lhs.push(Generator::u(y.root, y.a));
      bool ok = true;
      for (const auto& term : G.commutator(a, y.root)) {
        TElem v = TElem(R, term.C) * (-x).pow(term.i) * (-y.a).pow(term.j);
        rhs.push(Generator::u(term.root, v));
        if (!in_Uc(term.root, v, c)) ok = false;
        if (d.positive(a) == d.positive(y.root) && !v.is_zero() && d.positive(term.root) != d.positive(a)) ok = false;
      }
      ++rep.samples[0];
      if (!ok || !word_equal(G, lhs, rhs))
        fail(0, "a: root " + std::to_string(a) + " with " + std::to_string(y.root) + " c=" + std::to_string(c));
    } else if (part == 1) {
      // alpha = -alpha_p; x in U_{c_u}, or in U_c with c > c_u without the restriction on alpha_p
      bool restricted = f.cond[y.root] - y.a.valuation() - 1 < cu;
      int cc = restricted ? cu : cu + 1 + static_cast<int>(rng() % 2);
      int a = d.neg(y.root);
      TElem x = random_at_valuation(R, rng, std::max(cc, f.f[a]) + static_cast<int>(rng() % 2));
      // [u_a(-x), u_{-a}(-y)] by relation (2) with A = -x, A' = -y
      TElem A = -x, Ap = -y.a;
      TElem cval = one - A * Ap;
      if (!cval.is_unit()) {
        fail(1, "b: 1 - A A' is not a unit");
        continue;
      }
      TElem ci = cval.inv();
      GroupWord lhs(d, R), rhs(d, R);
      lhs.push(Generator::u(a, A)).push(Generator::u(y.root, Ap)).push(Generator::u(a, -A)).push(Generator::u(y.root, -Ap));
      TElem left = -(A * A * Ap * ci), right = A * Ap * Ap * ci;
      rhs.push(Generator::u(a, left)).push(coroot_gen(d, a, ci)).push(Generator::u(y.root, right));
      bool ok = in_Uc(a, left, cc) && in_Uc(y.root, right, cc);
      TElem bt = ci - one;  // torus factor a^vee(1 + bt)
      if (!bt.is_zero() && bt.valuation() < std::max(f.cond[a], cc)) ok = false;
      ++rep.samples[1];
      if (!ok || !word_equal(G, lhs, rhs))
        fail(1, "b: root " + std::to_string(a) + " c=" + std::to_string(cc) + " restricted=" + std::to_string(restricted));
    } else {
      int a = static_cast<int>(rng() % static_cast<uint64_t>(d.num_roots()));
      int vb = std::max(f.cond[a], c) + static_cast<int>(rng() % 2);
      TElem b = random_at_valuation(R, rng, vb);
      TElem t = one + b, tinv = t.inv();
      // [t^{-1}, y^{-1}] = u_p(((1 + b)^{-<alpha_p, a^vee>} - 1)(-a_p))
      int pairing = d.pair(d.roots[y.root], d.coroots[a]);
      GroupWord lhs(d, R), rhs(d, R);
      lhs.push(coroot_gen(d, a, tinv)).push(Generator::u(y.root, -y.a)).push(coroot_gen(d, a, t));
      lhs.push(Generator::u(y.root, y.a));
      TElem v = (tinv.pow(pairing) - one) * (-y.a);
      rhs.push(Generator::u(y.root, v));
      ++rep.samples[2];
      if (!in_Uc(y.root, v, c) || !word_equal(G, lhs, rhs))
        fail(2, "c: coroot " + std::to_string(a) + " on " + std::to_string(y.root) + " c=" + std::to_string(c));
    }
  }
  rep.pass = rep.failures[0] + rep.failures[1] + rep.failures[2] == 0 && rep.samples[0] >= samples &&
             rep.samples[1] >= samples && rep.samples[2] >= samples;
  return rep;
}

/* ---- Hecke support ---- */

std::string SupportCensus::str() const {
  std::ostringstream os;
  os << label << " double_cosets=" << double_cosets << " observed=" << observed << " predicted=" << predicted
     << " disagreements=" << disagreements << " pass=" << pass;
  return os.str();
}

SupportCensus support_census(const SmoothCharacter& chi, int max_len, int M) {
  const RootDatum& d = chi.datum();
  bool gl2 = rank_one_gl2(d);
  TypeDatum type = build_type(chi);
  Depths J{type.depths()[0], type.depths()[1]};
  const RingSpec& R = RingSpec::get(chi.ring().p, chi.ring().e, M + 2 * max_len + 4);
  auto reps = i_over_j(R, J.fplus, J.fminus);
  auto js = witness_set(R, J, M, chi.level() + 1, gl2);

  std::vector<AffineWeylElement> xs;
  if (gl2) {
    for (int a = -max_len; a <= max_len; ++a)
      for (int b = -max_len; b <= max_len; ++b)
        if (std::abs(a) + std::abs(b) <= max_len)
          for (int w : {0, 1}) xs.push_back({{a, b}, w});
  } else {
    for (int a = -max_len; a <= max_len; ++a)
      for (int w : {0, 1}) xs.push_back({{a}, w});
  }

  SupportCensus rep;
  rep.label = chi_label(chi) + " M=" + std::to_string(M);
  for (const auto& v : xs) {
    ScaledMat2 nv = affine_rep(v, gl2, R), nvinv = affine_rep_inverse(v, gl2, R);
    bool v_supported = support_predicted(type, v);
    for (const auto& x : reps)
      for (const auto& y : reps) {
        // x^{-1} runs over J\I, y over I/J
        ScaledMat2 g = x.kinv * nv * y.k;
        ScaledMat2 ginv = y.kinv * nvinv * x.k;
        bool observed = true;
        for (const auto& j : js) {
          ScaledMat2 X = ginv * j.j * g;
          TElem t1, t2;
          if (!double_coset_torus(X, 0, 0, J, J, &t1, &t2)) continue;
          if (rho_inverse(type, t1, t2) != rho_inverse(type, j.t1, j.t2)) {
            observed = false;
            break;
          }
        }
        bool predicted = v_supported && in_affine_double_coset(g, v, gl2, J);
        ++rep.double_cosets;
        rep.observed += observed;
        rep.predicted += predicted;
        if (observed != predicted) {
          ++rep.disagreements;
          if (rep.disagreement_lines.size() < 20)
            rep.disagreement_lines.push_back("x=" + ivec_str(v.lambda) + "/" + std::to_string(v.w) +
                                             " observed=" + std::to_string(observed));
        }
      }
  }
  rep.pass = rep.disagreements == 0;
  return rep;
}

/* ---- constant term ---- */

MatrixFunction e_rho_function(const SmoothCharacter& chi_r, bool gl2, const Depths& J) {
  return [chi_r, gl2, J](const ScaledMat2& X) {
    TElem t1, t2;
    if (!double_coset_torus(X, 0, 0, J, J, &t1, &t2)) return Cyclo::rational(0);
    SmoothCharacter c = chi_r.rebind(t1.spec());
    int64_t k = gl2 ? c.exponent({t1, t2}) : c.exponent({t1});
    return Cyclo::root(RootOfUnity(c.order(), -k));
  };
}

MatrixFunction char_K_function() {
  return [](const ScaledMat2& X) {
    if (X.min_val() < 0) return Cyclo::rational(0);
    int v = 0;
    TElem u;
    det_split(X, &v, &u);
    return Cyclo::rational(v == 0 ? 1 : 0);
  };
}

Cyclo constant_term_numeric(const MatrixFunction& phi, const ConstantTermJob& job) {
  const RingSpec& L = *job.ring;
  int64_t q = L.q();
  int lam_gap = job.gl2 ? job.m.lambda[0] - job.m.lambda[1] : 2 * job.m.lambda[0];
  if (lam_gap % 2 != 0) throw std::invalid_argument("delta_B^{1/2} is irrational at this torus point");
  auto ks = k_over_j(L, job.kdepths.fplus, job.kdepths.fminus);
  int dv = 0;
  TElem du;
  ScaledMat2 m = torus_class_matrix(job.m, job.gl2, L, &dv, &du);

  auto integral = [&](int B, int c) {
    if (2 * (m.s + B) + c + 2 >= L.N) throw WindowTooSmall("unipotent window exceeds the working precision");
    Cyclo sum = Cyclo::rational(0);
    for (const auto& x : window_points(L, B, c)) {
      ScaledMat2 Y = m * ScaledMat2::upper(x, B);
      for (const auto& k : ks) {
        ScaledMat2 tk = job.theta_power ? k.k.frobenius(job.theta_power) : k.k;
        sum += phi(k.kinv * Y * tk);
      }
    }
    return sum * (q_power(q, -c) / mpq_class(static_cast<long>(ks.size())));
  };
  const Window& w = job.window;
  Cyclo v = integral(w.B, w.c);
  if (integral(w.B + 1, w.c) != v || integral(w.B, w.c + 1) != v)
    throw WindowTooSmall("constant term changes when the unipotent window grows");
  return v * q_power(q, -lam_gap / 2);
}

}  // namespace unram
