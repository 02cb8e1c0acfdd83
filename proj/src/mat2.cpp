#include "unram/mat2.hpp"

#include <omp.h>

#include <algorithm>

#include "unram/chevalley.hpp"

namespace unram {

namespace {

// x / p^k for x of valuation >= k; the top k digits become unknown and are left zero
TElem shift_down(const TElem& x, int k) {
  const RingSpec& s = x.spec();
  Coeffs c{};
  for (int i = 0; i < s.e; ++i) c[i] = x.coeff(i) / s.ppow[k];
  return TElem(s, c);
}

TElem ppow_elem(const RingSpec& s, int k) { return TElem(s, s.ppow.at(k)); }

}  // namespace

TElem lift_to(const TElem& x, const RingSpec& ring) {
  if (x.spec().p != ring.p || x.spec().e != ring.e) throw SpecMismatch("lift needs the same p and e");
  return TElem(ring, x.coeffs());
}

ScaledMat2 lift_to(const ScaledMat2& m, const RingSpec& ring) {
  return {lift_to(m.a, ring), lift_to(m.b, ring), lift_to(m.c, ring), lift_to(m.d, ring), m.s};
}

ScaledMat2 ScaledMat2::identity(const RingSpec& r) { return {TElem(r, 1), TElem(r, 0), TElem(r, 0), TElem(r, 1), 0}; }

ScaledMat2 ScaledMat2::upper(const TElem& x, int s) {
  const RingSpec& r = x.spec();
  TElem one = ppow_elem(r, s);
  return {one, x, TElem(r, 0), one, s};
}

ScaledMat2 ScaledMat2::lower(const TElem& x, int s) {
  const RingSpec& r = x.spec();
  TElem one = ppow_elem(r, s);
  return {one, TElem(r, 0), x, one, s};
}

ScaledMat2 ScaledMat2::diag(const TElem& u1, int v1, const TElem& u2, int v2) {
  const RingSpec& r = u1.spec();
  int s = std::max({0, -v1, -v2});
  return {u1 * ppow_elem(r, v1 + s), TElem(r, 0), TElem(r, 0), u2 * ppow_elem(r, v2 + s), s};
}

ScaledMat2 ScaledMat2::operator*(const ScaledMat2& o) const {
  return {a * o.a + b * o.c, a * o.b + b * o.d, c * o.a + d * o.c, c * o.b + d * o.d, s + o.s};
}

ScaledMat2 ScaledMat2::rescale(int new_s) const {
  if (new_s < s) throw std::invalid_argument("rescale can only raise the scale");
  TElem f = ppow_elem(ring(), new_s - s);
  return {a * f, b * f, c * f, d * f, new_s};
}

ScaledMat2 ScaledMat2::frobenius(int power) const {
  return {a.frobenius(power), b.frobenius(power), c.frobenius(power), d.frobenius(power), s};
}

int ScaledMat2::min_val() const { return std::min({val_a(), val_b(), val_c(), val_d()}); }

bool ScaledMat2::operator==(const ScaledMat2& o) const {
  int t = std::max(s, o.s);
  ScaledMat2 x = rescale(t), y = o.rescale(t);
  return x.a == y.a && x.b == y.b && x.c == y.c && x.d == y.d;
}

bool cell_torus(const ScaledMat2& X, const Cell2& cell, TElem* t2) {
  if (X.val_d() != cell.b) return false;
  if (X.val_c() < cell.b + cell.fminus) return false;
  if (X.val_b() < cell.b + cell.fplus) return false;
  *t2 = shift_down(X.d, cell.b + X.s);
  return true;
}

bool in_cartan_cell(const ScaledMat2& X, int det_val, const Cell2& cell) {
  return det_val == cell.a + cell.b && X.min_val() == cell.b;
}

std::vector<CosetRep> i_over_j(const RingSpec& ring, int fplus, int fminus) {
  std::vector<CosetRep> out;
  int64_t nz = 1, ny = 1;
  for (int i = 0; i < ring.e; ++i) {
    nz *= ring.ppow[fminus - 1];
    ny *= ring.ppow[fplus];
  }
  for (int64_t iz = 0; iz < nz; ++iz)
    for (int64_t iy = 0; iy < ny; ++iy) {
      Coeffs cz{}, cy{};
      int64_t tz = iz, ty = iy;
      for (int i = 0; i < ring.e; ++i) {
        cz[i] = (tz % ring.ppow[fminus - 1]) * ring.p;
        tz /= ring.ppow[fminus - 1];
        cy[i] = ty % ring.ppow[fplus];
        ty /= ring.ppow[fplus];
      }
      TElem z(ring, cz), y(ring, cy);
      ScaledMat2 k = ScaledMat2::lower(z, 0) * ScaledMat2::upper(y, 0);
      ScaledMat2 kinv = ScaledMat2::upper(-y, 0) * ScaledMat2::lower(-z, 0);
      out.push_back({k, kinv, TElem(ring, 1)});
    }
  return out;
}

std::vector<CosetRep> k_over_j(const RingSpec& ring, int fplus, int fminus) {
  // K/I is the projective line over the residue field: l(z), z in k, and n_s
  std::vector<CosetRep> kk;
  int64_t q = ring.q();
  for (int64_t code = 0; code < q; ++code) {
    Coeffs c{};
    int64_t t = code;
    for (int i = 0; i < ring.e; ++i) {
      c[i] = t % ring.p;
      t /= ring.p;
    }
    TElem z(ring, c);
    kk.push_back({ScaledMat2::lower(z, 0), ScaledMat2::lower(-z, 0), TElem(ring, 1)});
  }
  TElem zero(ring, 0), one(ring, 1);
  kk.push_back({{zero, one, -one, zero, 0}, {zero, -one, one, zero, 0}, one});
  std::vector<CosetRep> out;
  for (const auto& a : kk)
    for (const auto& b : i_over_j(ring, fplus, fminus)) out.push_back({a.k * b.k, b.kinv * a.kinv, a.det * b.det});
  return out;
}

std::vector<TElem> window_points(const RingSpec& ring, int B, int c) {
  if (B + c >= ring.N) throw PrecisionExhausted("unipotent window exceeds ring precision");
  int64_t per = ring.ppow[B + c];
  int64_t total = 1;
  for (int i = 0; i < ring.e; ++i) total *= per;
  std::vector<TElem> out;
  out.reserve(total);
  for (int64_t code = 0; code < total; ++code) {
    Coeffs cc{};
    int64_t t = code;
    for (int i = 0; i < ring.e; ++i) {
      cc[i] = t % per;
      t /= per;
    }
    out.emplace_back(ring, cc);
  }
  return out;
}

namespace {

struct Prepared {
  const RingSpec* S;
  SmoothCharacter chi;
  std::vector<CosetRep> reps;
  std::vector<ScaledMat2> theta_k;
  std::vector<TElem> det_ratio;  // theta(det k) / det k
  ScaledMat2 delta;
  TElem det_unit;
  std::vector<TElem> window;
};

int scale_budget(const Rank1Orbital& job) { return 2 * job.B + job.delta.s; }

Prepared prepare(const Rank1Orbital& job) {
  const RingSpec& L = *job.ring;
  Prepared P;
  P.S = &RingSpec::get(L.p, L.e, L.N + scale_budget(job));
  P.chi = job.chi->rebind(*P.S);
  P.reps = k_over_j(*P.S, job.cell.fplus, job.cell.fminus);
  for (const auto& r : P.reps) {
    P.theta_k.push_back(job.theta_power ? r.k.frobenius(job.theta_power) : r.k);
    P.det_ratio.push_back((job.theta_power ? r.det.frobenius(job.theta_power) : r.det) * r.det.inv());
  }
  P.delta = lift_to(job.delta, *P.S);
  P.det_unit = lift_to(job.delta_det_unit, *P.S);
  P.window = window_points(*P.S, job.B, job.c);
  return P;
}

int64_t phi_exponent(const Rank1Orbital& job, const Prepared& P, const ScaledMat2& X, const TElem& det_unit,
                     bool* hit) {
  TElem t2;
  *hit = cell_torus(X, job.cell, &t2);
  if (!*hit) return 0;
  TElem t1 = det_unit * t2.inv();
  return job.gl2 ? P.chi.exponent({t1, t2}) : P.chi.exponent({t1});
}

void add_point(const Rank1Orbital& job, const Prepared& P, const TElem& x, Rank1Result& res) {
  ScaledMat2 n_inv = ScaledMat2::upper(-x, job.B);
  TElem tx = job.theta_power ? x.frobenius(job.theta_power) : x;
  ScaledMat2 Y = n_inv * P.delta * ScaledMat2::upper(tx, job.B);
  if (!in_cartan_cell(Y, job.delta_det_val, job.cell)) return;
  ++res.surviving;
  for (size_t i = 0; i < P.reps.size(); ++i) {
    ScaledMat2 X = P.reps[i].kinv * Y * P.theta_k[i];
    ++res.evaluations;
    bool hit = false;
    int64_t k = phi_exponent(job, P, X, P.det_unit * P.det_ratio[i], &hit);
    if (hit) res.counts.add(-k);
  }
}

}  // namespace

Rank1Result rank1_orbital_parallel(const Rank1Orbital& job, int threads) {
  Prepared P = prepare(job);
  const int64_t M = P.chi.order();
  Rank1Result total;
  total.counts = RootCounts(M);
  total.points = static_cast<int64_t>(P.window.size());
  total.weight_exponent = job.c * job.ring->e;
  const int64_t n = total.points;
#pragma omp parallel num_threads(std::max(1, threads))
  {
    Rank1Result local;
    local.counts = RootCounts(M);
#pragma omp for schedule(dynamic, 4)
    for (int64_t i = 0; i < n; ++i) add_point(job, P, P.window[i], local);
#pragma omp critical
    {
      total.counts.merge(local.counts);
      total.surviving += local.surviving;
      total.evaluations += local.evaluations;
    }
  }
  return total;
}

Rank1Result rank1_orbital_serial(const Rank1Orbital& job) {
  const RingSpec& L = *job.ring;
  const RingSpec& S = RingSpec::get(L.p, L.e, L.N + scale_budget(job));
  SmoothCharacter chi = job.chi->rebind(S);
  auto F = [&](const TElem& x, int v) { return FElem(lift_to(x, S)) * FElem::p_power(S, v); };
  auto to_fmat = [&](const ScaledMat2& m) {
    FMat out(S, 2);
    out.at(0, 0) = F(m.a, -m.s);
    out.at(0, 1) = F(m.b, -m.s);
    out.at(1, 0) = F(m.c, -m.s);
    out.at(1, 1) = F(m.d, -m.s);
    return out;
  };
  auto elem = [&](int64_t a, int64_t b, int64_t c, int64_t d) {
    FMat m(S, 2);
    m.at(0, 0) = FElem(S, a);
    m.at(0, 1) = FElem(S, b);
    m.at(1, 0) = FElem(S, c);
    m.at(1, 1) = FElem(S, d);
    return m;
  };
  auto unipotent = [&](const FElem& x, bool up) {
    FMat m = elem(1, 0, 0, 1);
    m.at(up ? 0 : 1, up ? 1 : 0) = x;
    return m;
  };
  // K/J from the Bruhat cells of K, built independently of k_over_j
  std::vector<FMat> ks;
  std::vector<FMat> kk{elem(0, 1, -1, 0)};
  for (int64_t code = 0; code < S.q(); ++code) {
    Coeffs c{};
    int64_t t = code;
    for (int i = 0; i < S.e; ++i) {
      c[i] = t % S.p;
      t /= S.p;
    }
    kk.push_back(unipotent(FElem(TElem(S, c)), false));
  }
  for (const auto& a : kk)
    for (const auto& z : window_points(S, 0, job.cell.fminus - 1))
      for (const auto& y : window_points(S, 0, job.cell.fplus))
        ks.push_back(a * unipotent(FElem(z) * FElem::p_power(S, 1), false) * unipotent(FElem(y), true));
  FMat delta = to_fmat(job.delta);
  Rank1Result res;
  res.counts = RootCounts(chi.order());
  res.weight_exponent = job.c * L.e;
  const Cell2& cell = job.cell;
  for (const auto& xr : window_points(S, job.B, job.c)) {
    ++res.points;
    FElem x = F(xr, -job.B);
    FMat Y = unipotent(-x, true) * delta * unipotent(job.theta_power ? x.frobenius(job.theta_power) : x, true);
    bool any = false;
    for (const auto& k : ks) {
      // k^{-1} by the adjugate, det k = 1 for these representatives
      FMat kinv(S, 2);
      kinv.at(0, 0) = k.at(1, 1);
      kinv.at(0, 1) = -k.at(0, 1);
      kinv.at(1, 0) = -k.at(1, 0);
      kinv.at(1, 1) = k.at(0, 0);
      FMat X = kinv * Y * (job.theta_power ? k.frobenius(job.theta_power) : k);
      ++res.evaluations;
      FElem det = X.det();
      if (det.is_zero_like() || det.valuation() != cell.a + cell.b) continue;
      if (X.at(1, 1).is_zero_like() || X.at(1, 1).valuation() != cell.b) continue;
      if (!X.at(1, 0).val_at_least(cell.b + cell.fminus)) continue;
      if (!X.at(0, 1).val_at_least(cell.b + cell.fplus)) continue;
      any = true;
      FElem f2 = X.at(1, 1) * FElem::p_power(S, -cell.b);
      FElem f1 = det / (X.at(1, 1) * FElem::p_power(S, cell.a));
      if (std::min(f1.rel_prec(), f2.rel_prec()) < chi.level()) throw PrecisionExhausted("torus part below the level");
      TElem t2 = f2.unit_part(), t1 = f1.unit_part();
      int64_t k_exp = job.gl2 ? chi.exponent({t1, t2}) : chi.exponent({t1});
      res.counts.add(-k_exp);
    }
    if (any) ++res.surviving;
  }
  return res;
}

}  // namespace unram
