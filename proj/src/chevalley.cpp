#include "unram/chevalley.hpp"

#include <algorithm>
#include <sstream>

namespace unram {

// ------------------------------------------------------------------ FMat

FMat::FMat(const RingSpec& s, int n) : s_(&s), n_(n), a_(n * n, FElem(s)) {}

FMat FMat::identity(const RingSpec& s, int n) {
  FMat m(s, n);
  for (int i = 0; i < n; ++i) m.at(i, i) = FElem(s, 1);
  return m;
}

FMat FMat::operator*(const FMat& o) const {
  FMat r(*s_, n_);
  for (int i = 0; i < n_; ++i)
    for (int k = 0; k < n_; ++k) {
      const FElem& x = at(i, k);
      if (x.is_exact_zero()) continue;
      for (int j = 0; j < n_; ++j) {
        const FElem& y = o.at(k, j);
        if (y.is_exact_zero()) continue;
        r.at(i, j) += x * y;
      }
    }
  return r;
}

bool FMat::equals(const FMat& o) const {
  if (n_ != o.n_) return false;
  for (int i = 0; i < n_ * n_; ++i)
    if (!a_[i].equals(o.a_[i])) return false;
  return true;
}

FMat FMat::transpose() const {
  FMat r(*s_, n_);
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) r.at(j, i) = at(i, j);
  return r;
}

FMat FMat::frobenius(int power) const {
  FMat r = *this;
  for (auto& x : r.a_) x = x.frobenius(power);
  return r;
}

namespace {

FElem det_rec(const FMat& m, std::vector<int> rows, std::vector<int> cols) {
  if (rows.size() == 1) return m.at(rows[0], cols[0]);
  FElem acc(m.ring());
  int sign = 1;
  for (size_t c = 0; c < cols.size(); ++c) {
    const FElem& x = m.at(rows[0], cols[c]);
    if (!x.is_exact_zero()) {
      std::vector<int> r2(rows.begin() + 1, rows.end());
      std::vector<int> c2 = cols;
      c2.erase(c2.begin() + c);
      FElem term = x * det_rec(m, r2, c2);
      acc += sign > 0 ? term : -term;
    }
    sign = -sign;
  }
  return acc;
}

FMat inverse_of(const FMat& m) {
  // adjugate over det; n <= 4
  int n = m.size();
  FElem d = m.det();
  FElem dinv = d.inv();
  FMat r(m.ring(), n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      std::vector<int> rows, cols;
      for (int k = 0; k < n; ++k) {
        if (k != j) rows.push_back(k);
        if (k != i) cols.push_back(k);
      }
      FElem c = n == 1 ? FElem(m.ring(), 1) : det_rec(m, rows, cols);
      if ((i + j) % 2) c = -c;
      r.at(i, j) = c * dinv;
    }
  return r;
}

}  // namespace

FElem FMat::det() const {
  std::vector<int> idx(n_);
  for (int i = 0; i < n_; ++i) idx[i] = i;
  return det_rec(*this, idx, idx);
}

int FMat::min_valuation() const {
  int v = FElem::kExactZero;
  for (const auto& x : a_)
    if (!x.is_zero_like()) v = std::min(v, x.valuation());
  return v;
}

std::string FMat::str() const {
  std::ostringstream os;
  for (int i = 0; i < n_; ++i) {
    os << "[";
    for (int j = 0; j < n_; ++j) os << (j ? ", " : "") << at(i, j).str();
    os << "]\n";
  }
  return os.str();
}

// ------------------------------------------------------------- words

Generator Generator::u(int root, const TElem& a) {
  Generator g;
  g.kind = Root;
  g.root = root;
  g.payload = a;
  return g;
}

Generator Generator::t(const std::vector<TElem>& units, const IVec& lambda) {
  Generator g;
  g.kind = Torus;
  g.units = units;
  g.lambda = lambda;
  return g;
}

Generator Generator::n(int w) {
  Generator g;
  g.kind = Weyl;
  g.w = w;
  return g;
}

GroupWord GroupWord::operator*(const GroupWord& o) const {
  if (ring_ != o.ring_ || d_ != o.d_) throw SpecMismatch("words on different layers");
  GroupWord r = *this;
  r.gens_.insert(r.gens_.end(), o.gens_.begin(), o.gens_.end());
  return r;
}

GroupWord GroupWord::inverse(const WeylGroup& W) const {
  GroupWord r(*d_, *ring_);
  for (auto it = gens_.rbegin(); it != gens_.rend(); ++it) {
    Generator g = *it;
    if (g.kind == Generator::Root) {
      g.payload = -g.payload;
    } else if (g.kind == Generator::Torus) {
      for (auto& u : g.units) u = u.inv();
      g.lambda = vec_scale(g.lambda, -1);
    } else {
      // n_w^{-1} = n_{w^{-1}} times a sign element of the torus
      int w = g.w;
      const auto& word = W[w].word;
      for (auto k = word.rbegin(); k != word.rend(); ++k) {
        int s = d_->simple[*k];
        // n_s^{-1} = u_s(-1) u_{-s}(1) u_s(-1)
        r.push(Generator::u(s, TElem(*ring_, -1)));
        r.push(Generator::u(d_->neg(s), TElem(*ring_, 1)));
        r.push(Generator::u(s, TElem(*ring_, -1)));
      }
      continue;
    }
    r.push(g);
  }
  return r;
}

std::string GroupWord::serialize() const {
  std::ostringstream os;
  for (const auto& g : gens_) {
    if (g.kind == Generator::Root) {
      os << "u " << g.root << " " << g.payload.str() << "; ";
    } else if (g.kind == Generator::Torus) {
      os << "t";
      for (const auto& u : g.units) os << " " << u.str();
      os << " |";
      for (int l : g.lambda) os << " " << l;
      os << "; ";
    } else {
      os << "n " << g.w << "; ";
    }
  }
  return os.str();
}

// ------------------------------------------------------- ChevalleyGroup

namespace {

IMat int_root_matrix(const RootDatum& d, int root, int t) {
  IMat m = mat_identity(d.n);
  for (const auto& e : d.root_vector[root]) m[e.row][e.col] += t * e.sign;
  return m;
}

}  // namespace

ChevalleyGroup::ChevalleyGroup(const RootDatum& d, const RingSpec& ring) : d_(&d), ring_(&ring), W_(d) {
  int nr = d.num_roots();
  comm_.assign(nr, std::vector<std::vector<CommutatorTerm>>(nr));
  eps_.assign(nr, 0);
  for (int a = 0; a < nr; ++a) {
    IMat prod = mat_mul(int_root_matrix(d, a, 1), int_root_matrix(d, d.neg(a), 1));
    const auto& e = d.root_vector[a][0];
    eps_[a] = prod[e.row][e.row] - 1;
    if (eps_[a] != 1 && eps_[a] != -1) throw std::logic_error("opposite root pair is not an SL2 pinning");
    for (int b = 0; b < nr; ++b) {
      if (b == d.neg(a) || b == a) continue;
      std::vector<CommutatorTerm> cand;
      for (int i = 1; i <= 3; ++i)
        for (int j = 1; j <= 3; ++j) {
          int g = d.root_index(vec_add(vec_scale(d.roots[a], i), vec_scale(d.roots[b], j)));
          if (g >= 0) cand.push_back({i, j, g, 0});
        }
      std::sort(cand.begin(), cand.end(), [](const CommutatorTerm& x, const CommutatorTerm& y) {
        return x.i + x.j != y.i + y.j ? x.i + x.j < y.i + y.j : x.i < y.i;
      });
      IMat M = mat_mul(mat_mul(int_root_matrix(d, a, 1), int_root_matrix(d, b, 1)),
                       mat_mul(int_root_matrix(d, a, -1), int_root_matrix(d, b, -1)));
      std::vector<CommutatorTerm> terms;
      for (auto& c : cand) {
        const auto& v = d.root_vector[c.root][0];
        int x = M[v.row][v.col] * v.sign;
        M = mat_mul(int_root_matrix(d, c.root, -x), M);
        if (x != 0) terms.push_back({c.i, c.j, c.root, x});
      }
      if (M != mat_identity(d.n)) throw std::logic_error("commutator does not factor over the root span");
      comm_[a][b] = terms;
    }
  }
}

FMat ChevalleyGroup::root_matrix(int root, const FElem& a) const {
  FMat m = FMat::identity(*ring_, d_->n);
  for (const auto& e : d_->root_vector[root]) m.at(e.row, e.col) = e.sign > 0 ? a : -a;
  return m;
}

FMat ChevalleyGroup::torus_matrix(const std::vector<FElem>& units, const IVec& lambda) const {
  FMat m(*ring_, d_->n);
  for (int i = 0; i < d_->n; ++i) {
    FElem x(*ring_, 1);
    int v = 0;
    for (int j = 0; j < d_->rank; ++j) {
      int ex = d_->torus_exponents[i][j];
      FElem base = ex < 0 ? units[j].inv() : units[j];
      for (int k = 0; k < std::abs(ex); ++k) x *= base;
      if (!lambda.empty()) v += ex * lambda[j];
    }
    m.at(i, i) = x.shift(v);
  }
  return m;
}

FElem ChevalleyGroup::root_value(int root, const std::vector<TElem>& units, const IVec& lambda) const {
  TElem x(*ring_, 1);
  for (int j = 0; j < d_->rank; ++j) x *= units[j].pow(d_->roots[root][j]);
  int v = lambda.empty() ? 0 : dot(d_->roots[root], lambda);
  return FElem(x).shift(v);
}

FMat ChevalleyGroup::matrix(const Generator& g) const {
  if (g.kind == Generator::Root) return root_matrix(g.root, FElem(g.payload));
  if (g.kind == Generator::Torus) {
    std::vector<FElem> u;
    for (const auto& x : g.units) u.push_back(FElem(x));
    return torus_matrix(u, g.lambda);
  }
  FMat m = FMat::identity(*ring_, d_->n);
  for (int k : W_[g.w].word) {
    int s = d_->simple[k];
    m = m * root_matrix(s, FElem(*ring_, 1)) * root_matrix(d_->neg(s), FElem(*ring_, -1)) *
        root_matrix(s, FElem(*ring_, 1));
  }
  return m;
}

FMat ChevalleyGroup::matrix_oracle(const GroupWord& g) const {
  if (&g.ring() != ring_) throw SpecMismatch("word on a different layer");
  FMat m = FMat::identity(*ring_, d_->n);
  for (const auto& x : g.gens()) m = m * matrix(x);
  return m;
}

GroupWord ChevalleyGroup::expand_weyl(const GroupWord& g) const {
  GroupWord out(*d_, *ring_);
  for (const auto& x : g.gens()) {
    if (x.kind != Generator::Weyl) {
      out.push(x);
      continue;
    }
    for (int k : W_[x.w].word) {
      int s = d_->simple[k];
      out.push(Generator::u(s, TElem(*ring_, 1)));
      out.push(Generator::u(d_->neg(s), TElem(*ring_, -1)));
      out.push(Generator::u(s, TElem(*ring_, 1)));
    }
  }
  return out;
}

GroupWord ChevalleyGroup::theta_act(const GroupWord& g, int power) const {
  GroupWord out(*d_, *ring_);
  for (auto x : g.gens()) {
    if (x.kind == Generator::Root) x.payload = x.payload.frobenius(power);
    if (x.kind == Generator::Torus)
      for (auto& u : x.units) u = u.frobenius(power);
    out.push(x);
  }
  return out;
}

GroupWord ChevalleyGroup::h_act(const GroupWord& g, int power) const {
  GroupWord cur = expand_weyl(g);
  int k = ((power % d_->h_order) + d_->h_order) % d_->h_order;
  for (int step = 0; step < k; ++step) {
    GroupWord out(*d_, *ring_);
    for (auto x : cur.gens()) {
      if (x.kind == Generator::Root) {
        x.payload = TElem(*ring_, d_->x_const[x.root]) * x.payload.frobenius(1);
        x.root = d_->h_root[x.root];
      } else {
        x.units = torus_h(*d_, x.units);
        x.lambda = mat_vec(d_->h_cochar, x.lambda);
      }
      out.push(x);
    }
    cur = out;
  }
  return cur;
}

FMat ChevalleyGroup::theta_matrix(const FMat& m, int power) const { return m.frobenius(power); }

FMat ChevalleyGroup::h_matrix(const FMat& m, int power) const {
  if (d_->is_split()) return m;
  int k = ((power % d_->h_order) + d_->h_order) % d_->h_order;
  FMat cur = m;
  int n = d_->n;
  FMat J(*ring_, n);
  for (int i = 0; i < n; ++i) J.at(i, n - 1 - i) = FElem(*ring_, i % 2 ? -1 : 1);
  for (int step = 0; step < k; ++step) cur = J * inverse_of(cur.frobenius(1)).transpose() * J;
  return cur;
}

GroupWord ChevalleyGroup::norm_map_group(const GroupWord& delta, int r) const {
  GroupWord out(*d_, *ring_);
  for (int i = 0; i < r; ++i) out = out * theta_act(delta, i);
  return out;
}

// ------------------------------------------------------------ collection

namespace {

struct Item {
  bool torus = false;
  int root = -1;
  TElem a;
  std::vector<TElem> units;
  IVec lambda;
};

// a * p^k, raising when the shift is not determined at working precision
TElem shifted(const TElem& a, int k) {
  const RingSpec& s = a.spec();
  if (k >= 0) return k >= s.N ? TElem(s, 0) : a * TElem(s, s.ppow[k]);
  if (a.is_zero()) return a;
  if (a.valuation() < -k) throw NotInIwahori("payload leaves the integral root group");
  throw PrecisionExhausted("payload divided by p loses precision");
}

}  // namespace

IwahoriNormalForm normal_form(const ChevalleyGroup& G, const GroupWord& g, int max_steps) {
  const RootDatum& d = G.datum();
  const RingSpec& ring = G.ring();
  int np = d.npos;
  std::vector<Item> items;
  for (const auto& x : g.gens()) {
    if (x.kind == Generator::Weyl) {
      if (x.w != G.weyl().identity()) throw NotInIwahori("Weyl representative in the word");
      continue;
    }
    Item it;
    if (x.kind == Generator::Torus) {
      it.torus = true;
      it.units = x.units;
      it.lambda = x.lambda.empty() ? IVec(d.rank, 0) : x.lambda;
    } else {
      it.root = x.root;
      it.a = x.payload;
      if (it.a.is_zero()) continue;
    }
    items.push_back(it);
  }
  auto key = [&](const Item& it) {
    if (it.torus) return np;
    return d.positive(it.root) ? np + 1 + it.root : it.root - np;
  };
  auto root_item = [&](int root, const TElem& a) {
    Item it;
    it.root = root;
    it.a = a;
    return it;
  };
  auto unit_value = [&](int root, const Item& t) {
    TElem x(ring, 1);
    for (int j = 0; j < d.rank; ++j) x *= t.units[j].pow(d.roots[root][j]);
    return x;
  };
  size_t k = 0;
  int steps = 0;
  while (k + 1 < items.size()) {
    if (++steps > max_steps) throw PrecisionExhausted("collection did not terminate");
    Item y = items[k], x = items[k + 1];
    int ky = key(y), kx = key(x);
    if (ky < kx) {
      ++k;
      continue;
    }
    std::vector<Item> repl;
    if (ky == kx) {
      if (y.torus) {
        Item t = y;
        for (int j = 0; j < d.rank; ++j) t.units[j] = y.units[j] * x.units[j];
        t.lambda = vec_add(y.lambda, x.lambda);
        repl.push_back(t);
      } else {
        TElem s = y.a + x.a;
        if (!s.is_zero()) repl.push_back(root_item(y.root, s));
      }
    } else if (!y.torus && x.torus) {
      // u_b(a) t = t u_b(b(t)^{-1} a)
      TElem a = shifted(unit_value(y.root, x).inv() * y.a, -dot(d.roots[y.root], x.lambda));
      repl.push_back(x);
      if (!a.is_zero()) repl.push_back(root_item(y.root, a));
    } else if (y.torus && !x.torus) {
      // t u_b(a) = u_b(b(t) a) t
      TElem a = shifted(unit_value(x.root, y) * x.a, dot(d.roots[x.root], y.lambda));
      if (!a.is_zero()) repl.push_back(root_item(x.root, a));
      repl.push_back(y);
    } else if (y.root == d.neg(x.root)) {
      // u_a(b) u_{-a}(a') with a positive
      int alpha = y.root;
      TElem b = y.a, a = x.a;
      TElem c = TElem(ring, 1) + TElem(ring, G.opposite_sign(alpha)) * a * b;
      if (!c.is_unit()) throw NotInIwahori("opposite pair outside the big cell");
      TElem ci = c.inv();
      Item t;
      t.torus = true;
      t.units = coroot_point(d, alpha, c);
      t.lambda = IVec(d.rank, 0);
      TElem an = a * ci, bn = b * ci;
      if (!an.is_zero()) repl.push_back(root_item(x.root, an));
      repl.push_back(t);
      if (!bn.is_zero()) repl.push_back(root_item(alpha, bn));
    } else {
      // y x = x y [y^{-1}, x^{-1}]
      repl.push_back(x);
      repl.push_back(y);
      TElem s = -y.a, t = -x.a;
      for (const auto& term : G.commutator(y.root, x.root)) {
        TElem v = TElem(ring, term.C) * s.pow(term.i) * t.pow(term.j);
        if (!v.is_zero()) repl.push_back(root_item(term.root, v));
      }
    }
    items.erase(items.begin() + k, items.begin() + k + 2);
    items.insert(items.begin() + k, repl.begin(), repl.end());
    k = k > 0 ? k - 1 : 0;
  }
  IwahoriNormalForm nf;
  nf.neg.assign(np, TElem(ring, 0));
  nf.pos.assign(np, TElem(ring, 0));
  nf.units.assign(d.rank, TElem(ring, 1));
  nf.lambda.assign(d.rank, 0);
  for (const auto& it : items) {
    if (it.torus) {
      nf.units = it.units;
      nf.lambda = it.lambda;
    } else if (d.positive(it.root)) {
      nf.pos[it.root] = it.a;
    } else {
      nf.neg[it.root - np] = it.a;
    }
  }
  return nf;
}

GroupWord IwahoriNormalForm::to_word(const RootDatum& d, const RingSpec& ring) const {
  GroupWord w(d, ring);
  for (int i = 0; i < d.npos; ++i) w.push(Generator::u(d.neg(i), neg[i]));
  w.push(Generator::t(units, lambda));
  for (int i = 0; i < d.npos; ++i) w.push(Generator::u(i, pos[i]));
  return w;
}

bool IwahoriNormalForm::operator==(const IwahoriNormalForm& o) const {
  return neg == o.neg && pos == o.pos && units == o.units && lambda == o.lambda;
}

bool membership_depth(const ChevalleyGroup& G, const GroupWord& g, const std::vector<int>& depths,
                      int torus_level) {
  IwahoriNormalForm nf;
  try {
    nf = normal_form(G, g);
  } catch (const NotInIwahori&) {
    return false;
  }
  const RootDatum& d = G.datum();
  for (int v : nf.lambda)
    if (v != 0) return false;
  for (int i = 0; i < d.npos; ++i) {
    if (nf.pos[i].valuation() < depths[i]) return false;
    if (nf.neg[i].valuation() < depths[d.neg(i)]) return false;
  }
  for (const auto& u : nf.units) {
    if (!u.is_unit()) return false;
    if (torus_level > 0 && (u - TElem(G.ring(), 1)).valuation() < torus_level) return false;
  }
  return true;
}

}  // namespace unram
