#include "unram/root_data.hpp"

#include <algorithm>
#include <deque>
#include <memory>
#include <mutex>
#include <sstream>

namespace unram {

int dot(const IVec& a, const IVec& b) {
  int s = 0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

IVec mat_vec(const IMat& m, const IVec& v) {
  IVec out(m.size(), 0);
  for (size_t i = 0; i < m.size(); ++i) out[i] = dot(m[i], v);
  return out;
}

IMat mat_mul(const IMat& a, const IMat& b) {
  size_t n = a.size(), k = b.size(), m = b.empty() ? 0 : b[0].size();
  IMat out(n, IVec(m, 0));
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < m; ++j)
      for (size_t l = 0; l < k; ++l) out[i][j] += a[i][l] * b[l][j];
  return out;
}

IMat mat_identity(int n) {
  IMat m(n, IVec(n, 0));
  for (int i = 0; i < n; ++i) m[i][i] = 1;
  return m;
}

IMat mat_transpose(const IMat& m) {
  if (m.empty()) return m;
  IMat t(m[0].size(), IVec(m.size()));
  for (size_t i = 0; i < m.size(); ++i)
    for (size_t j = 0; j < m[0].size(); ++j) t[j][i] = m[i][j];
  return t;
}

IVec vec_add(const IVec& a, const IVec& b) {
  IVec c(a.size());
  for (size_t i = 0; i < a.size(); ++i) c[i] = a[i] + b[i];
  return c;
}

IVec vec_scale(const IVec& a, int s) {
  IVec c(a.size());
  for (size_t i = 0; i < a.size(); ++i) c[i] = a[i] * s;
  return c;
}

int RootDatum::root_index(const IVec& chi) const {
  for (int i = 0; i < num_roots(); ++i)
    if (roots[i] == chi) return i;
  return -1;
}

int RootDatum::sum_index(int i, int j) const { return root_index(vec_add(roots[i], roots[j])); }

IVec RootDatum::two_rho() const {
  IVec s(rank, 0);
  for (int i = 0; i < npos; ++i) s = vec_add(s, roots[i]);
  return s;
}

int RootDatum::pairing_height(const IVec& nu) const { return dot(two_rho(), nu); }

bool RootDatum::is_dominant(const IVec& nu) const {
  for (int i = 0; i < npos; ++i)
    if (dot(roots[i], nu) < 0) return false;
  return true;
}

bool RootDatum::is_regular(const IVec& nu) const {
  for (int i = 0; i < npos; ++i)
    if (dot(roots[i], nu) <= 0) return false;
  return true;
}

IVec RootDatum::restrict_root(int i) const {
  IVec out;
  for (const auto& b : rel_basis) out.push_back(dot(roots[i], b));
  return out;
}

std::string RootDatum::serialize() const {
  std::ostringstream os;
  auto vec = [&](const IVec& v) {
    os << "(";
    for (size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
    os << ")";
  };
  os << "group " << name << "\nrank " << rank << "\npositive_roots " << npos << "\n";
  for (int i = 0; i < num_roots(); ++i) {
    os << "root " << i << " ";
    vec(roots[i]);
    os << " coroot ";
    vec(coroots[i]);
    os << " height " << height[i] << "\n";
  }
  os << "pairing";
  for (int i : simple)
    for (int j : simple) os << " " << dot(roots[i], coroots[j]);
  os << "\nautomorphism";
  for (int v : h_root) os << " " << v;
  os << "\n";
  return os.str();
}

namespace {

struct CatalogEntry {
  std::string name;
  int rank;
  std::vector<IVec> simple_roots;   // X* coordinates
  std::vector<IVec> pos_coeffs;     // positive roots as simple-root expansions
  std::vector<IVec> pos_coroots;    // X_* coordinates
  int n;
  std::vector<std::vector<MatrixEntry>> pos_vectors;
  IMat torus_exponents;
  int weyl_order;
};

std::unique_ptr<RootDatum> assemble(const CatalogEntry& c) {
  auto d = std::make_unique<RootDatum>();
  d->name = c.name;
  d->rank = c.rank;
  d->npos = static_cast<int>(c.pos_coeffs.size());
  d->weyl_order = c.weyl_order;
  d->n = c.n;
  d->torus_exponents = c.torus_exponents;
  for (int sign : {1, -1}) {
    for (int i = 0; i < d->npos; ++i) {
      IVec chi(c.rank, 0);
      int h = 0;
      for (size_t k = 0; k < c.simple_roots.size(); ++k) {
        chi = vec_add(chi, vec_scale(c.simple_roots[k], c.pos_coeffs[i][k]));
        h += c.pos_coeffs[i][k];
      }
      d->roots.push_back(vec_scale(chi, sign));
      d->coroots.push_back(vec_scale(c.pos_coroots[i], sign));
      d->simple_coeffs.push_back(vec_scale(c.pos_coeffs[i], sign));
      d->height.push_back(sign * h);
      std::vector<MatrixEntry> v = c.pos_vectors[i];
      if (sign < 0)
        for (auto& e : v) std::swap(e.row, e.col);
      d->root_vector.push_back(v);
    }
  }
  for (int i = 0; i < d->npos; ++i)
    if (d->height[i] == 1) d->simple.push_back(i);
  d->h_root.resize(d->num_roots());
  for (int i = 0; i < d->num_roots(); ++i) d->h_root[i] = i;
  d->h_cochar = mat_identity(c.rank);
  d->x_const.assign(d->num_roots(), 1);
  for (int k = 0; k < c.rank; ++k) {
    IVec b(c.rank, 0);
    b[k] = 1;
    d->rel_basis.push_back(b);
  }
  return d;
}

std::vector<MatrixEntry> E(int r, int c, int s = 1) { return {{r, c, s}}; }

const std::map<std::string, std::unique_ptr<RootDatum>>& catalog() {
  static std::map<std::string, std::unique_ptr<RootDatum>> cat = [] {
    std::map<std::string, std::unique_ptr<RootDatum>> m;
    m["SL2"] = assemble({"SL2", 1, {{2}}, {{1}}, {{1}}, 2, {E(0, 1)}, {{1}, {-1}}, 2});
    m["GL2"] = assemble({"GL2", 2, {{1, -1}}, {{1}}, {{1, -1}}, 2, {E(0, 1)}, {{1, 0}, {0, 1}}, 2});
    CatalogEntry sl3{"SL3",
                     2,
                     {{2, -1}, {-1, 2}},
                     {{1, 0}, {0, 1}, {1, 1}},
                     {{1, 0}, {0, 1}, {1, 1}},
                     3,
                     {E(0, 1), E(1, 2), E(0, 2)},
                     {{1, 0}, {-1, 1}, {0, -1}},
                     6};
    m["SL3"] = assemble(sl3);
    m["Sp4"] = assemble({"Sp4",
                         2,
                         {{2, -1}, {-2, 2}},
                         {{1, 0}, {0, 1}, {1, 1}, {2, 1}},
                         {{1, 0}, {0, 1}, {1, 2}, {1, 1}},
                         4,
                         {{{0, 1, 1}, {2, 3, -1}}, E(1, 2), {{0, 2, 1}, {1, 3, 1}}, E(0, 3)},
                         {{1, 0}, {-1, 1}, {1, -1}, {-1, 0}},
                         8});
    sl3.name = "SU3";
    auto su3 = assemble(sl3);
    // h(g) = J sigma(g)^{-T} J with J = antidiag(1,-1,1)
    su3->h_order = 2;
    su3->h_cochar = {{0, 1}, {1, 0}};
    su3->h_root = {1, 0, 2, 4, 3, 5};
    su3->x_const = {1, 1, -1, 1, 1, -1};
    su3->rel_basis = {{1, 1}};
    m["SU3"] = std::move(su3);
    return m;
  }();
  return cat;
}

}  // namespace

const RootDatum& build_root_datum(const std::string& name) {
  const auto& cat = catalog();
  auto it = cat.find(name);
  if (it == cat.end()) throw UnknownGroup("unknown group: " + name);
  return *it->second;
}

std::vector<std::string> catalog_names() { return {"SL2", "GL2", "SL3", "Sp4", "SU3"}; }

bool prime_allowed(const RootDatum& d, int p) { return d.weyl_order % p != 0; }

unsigned full_levi_mask(const RootDatum& d) { return (1u << d.simple.size()) - 1; }

// ------------------------------------------------------------ WeylGroup

WeylGroup::WeylGroup(const RootDatum& d) : d_(&d) {
  int nr = d.num_roots();
  std::vector<WeylElement> gens;
  for (int s : d.simple) {
    WeylElement g;
    g.cochar = mat_identity(d.rank);
    for (int i = 0; i < d.rank; ++i)
      for (int j = 0; j < d.rank; ++j) g.cochar[i][j] -= d.coroots[s][i] * d.roots[s][j];
    g.perm.resize(nr);
    for (int r = 0; r < nr; ++r) {
      IVec img = vec_add(d.roots[r], vec_scale(d.roots[s], -dot(d.roots[r], d.coroots[s])));
      g.perm[r] = d.root_index(img);
    }
    gens.push_back(g);
  }
  WeylElement id;
  id.cochar = mat_identity(d.rank);
  id.perm.resize(nr);
  for (int r = 0; r < nr; ++r) id.perm[r] = r;
  elems_.push_back(id);
  lookup_[id.cochar] = 0;
  // BFS by length yields reduced words s_k * w
  std::deque<int> queue{0};
  while (!queue.empty()) {
    int cur = queue.front();
    queue.pop_front();
    for (size_t k = 0; k < gens.size(); ++k) {
      IMat m = mat_mul(gens[k].cochar, elems_[cur].cochar);
      if (lookup_.count(m)) continue;
      WeylElement w;
      w.cochar = m;
      w.perm.resize(nr);
      for (int r = 0; r < nr; ++r) w.perm[r] = gens[k].perm[elems_[cur].perm[r]];
      w.word = elems_[cur].word;
      w.word.insert(w.word.begin(), static_cast<int>(k));
      lookup_[m] = static_cast<int>(elems_.size());
      elems_.push_back(w);
      queue.push_back(static_cast<int>(elems_.size()) - 1);
    }
  }
  int n = size();
  table_.assign(n, std::vector<int>(n));
  inv_.assign(n, 0);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      table_[a][b] = lookup_.at(mat_mul(elems_[a].cochar, elems_[b].cochar));
      if (table_[a][b] == 0) inv_[a] = b;
    }
  for (size_t k = 0; k < gens.size(); ++k) simple_idx_.push_back(lookup_.at(gens[k].cochar));
}

int WeylGroup::index_of(const IMat& cochar) const {
  auto it = lookup_.find(cochar);
  return it == lookup_.end() ? -1 : it->second;
}

int WeylGroup::longest() const {
  int best = 0;
  for (int i = 0; i < size(); ++i)
    if (elems_[i].length() > elems_[best].length()) best = i;
  return best;
}

int WeylGroup::inversions(int a) const {
  int c = 0;
  for (int r = 0; r < d_->npos; ++r)
    if (!d_->positive(elems_[a].perm[r])) ++c;
  return c;
}

std::vector<int> WeylGroup::h_fixed() const {
  std::vector<int> out;
  for (int i = 0; i < size(); ++i)
    if (mat_mul(d_->h_cochar, elems_[i].cochar) == mat_mul(elems_[i].cochar, d_->h_cochar)) out.push_back(i);
  return out;
}

std::vector<int> WeylGroup::levi_subgroup(unsigned mask) const {
  if (mask > full_levi_mask(*d_)) throw InvalidLevi("Levi mask names a nonexistent simple root");
  std::vector<int> out;
  for (int i = 0; i < size(); ++i) {
    bool inside = true;
    for (int k : elems_[i].word)
      if (!(mask >> k & 1u)) inside = false;
    if (inside) out.push_back(i);
  }
  return out;
}

std::vector<int> WeylGroup::min_coset_reps(unsigned mask) const {
  if (mask > full_levi_mask(*d_)) throw InvalidLevi("Levi mask names a nonexistent simple root");
  std::vector<int> out;
  for (int i = 0; i < size(); ++i) {
    const auto& winv = elems_[inv_[i]];
    bool minimal = true;
    for (size_t k = 0; k < d_->simple.size(); ++k)
      if ((mask >> k & 1u) && !d_->positive(winv.perm[d_->simple[k]])) minimal = false;
    if (minimal) out.push_back(i);
  }
  return out;
}

AffineWeylElement affine_mul(const WeylGroup& W, const AffineWeylElement& a, const AffineWeylElement& b) {
  return {vec_add(a.lambda, W[a.w].act_cochar(b.lambda)), W.mul(a.w, b.w)};
}

AffineWeylElement affine_inverse(const WeylGroup& W, const AffineWeylElement& a) {
  int wi = W.inverse(a.w);
  return {vec_scale(W[wi].act_cochar(a.lambda), -1), wi};
}

bool affine_equal(const AffineWeylElement& a, const AffineWeylElement& b) {
  return a.lambda == b.lambda && a.w == b.w;
}

}  // namespace unram
