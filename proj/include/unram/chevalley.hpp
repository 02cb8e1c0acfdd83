#pragma once

#include <string>
#include <vector>

#include "unram/characters.hpp"
#include "unram/padic.hpp"
#include "unram/root_data.hpp"

namespace unram {

struct NotInIwahori : std::runtime_error { using std::runtime_error::runtime_error; };

/* Square matrix over E in the defining representation. */
class FMat {
 public:
  FMat() = default;
  FMat(const RingSpec& s, int n);  // zero matrix
  static FMat identity(const RingSpec& s, int n);

  int size() const { return n_; }
  const RingSpec& ring() const { return *s_; }
  FElem& at(int i, int j) { return a_[i * n_ + j]; }
  const FElem& at(int i, int j) const { return a_[i * n_ + j]; }
  FMat operator*(const FMat& o) const;
  bool equals(const FMat& o) const;  // entrywise at the common precision
  FMat transpose() const;
  FMat frobenius(int power) const;
  FElem det() const;                 // cofactor expansion, n <= 4
  int min_valuation() const;         // over nonzero entries
  std::string str() const;

 private:
  const RingSpec* s_ = nullptr;
  int n_ = 0;
  std::vector<FElem> a_;
};

struct Generator {
  enum Kind { Root, Torus, Weyl };
  Kind kind = Root;
  int root = -1;                 // Root
  TElem payload;                 // Root
  std::vector<TElem> units;      // Torus, X_* coordinates
  IVec lambda;                   // Torus lattice part
  int w = -1;                    // Weyl, index into the WeylGroup

  static Generator u(int root, const TElem& a);
  static Generator t(const std::vector<TElem>& units, const IVec& lambda);
  static Generator n(int w);
};

/* A free word in Chevalley generators over one ring layer. */
class GroupWord {
 public:
  GroupWord() = default;
  GroupWord(const RootDatum& d, const RingSpec& ring) : d_(&d), ring_(&ring) {}

  const RootDatum& datum() const { return *d_; }
  const RingSpec& ring() const { return *ring_; }
  std::vector<Generator>& gens() { return gens_; }
  const std::vector<Generator>& gens() const { return gens_; }
  GroupWord& push(const Generator& g) {
    gens_.push_back(g);
    return *this;
  }
  GroupWord operator*(const GroupWord& o) const;
  GroupWord inverse(const WeylGroup& W) const;
  std::string serialize() const;

 private:
  const RootDatum* d_ = nullptr;
  const RingSpec* ring_ = nullptr;
  std::vector<Generator> gens_;
};

/*
 * Commutator data read off the matrix realization:
 * [u_a(s), u_b(t)] = prod over (i,j) of u_{ia+jb}(C s^i t^j), ordered by i+j
 * then i; and per root the sign eps with
 * u_a(b) u_{-a}(a) = u_{-a}(a/(1+eps ab)) a^vee(1+eps ab) u_a(b/(1+eps ab)).
 */
struct CommutatorTerm {
  int i;
  int j;
  int root;
  int64_t C;
};

class ChevalleyGroup {
 public:
  ChevalleyGroup(const RootDatum& d, const RingSpec& ring);

  const RootDatum& datum() const { return *d_; }
  const RingSpec& ring() const { return *ring_; }
  const WeylGroup& weyl() const { return W_; }
  const std::vector<CommutatorTerm>& commutator(int a, int b) const { return comm_[a][b]; }
  int opposite_sign(int a) const { return eps_[a]; }

  FMat matrix(const Generator& g) const;
  FMat matrix_oracle(const GroupWord& g) const;
  FMat root_matrix(int root, const FElem& a) const;
  FMat torus_matrix(const std::vector<FElem>& units, const IVec& lambda) const;
  // root value beta(t) on a torus generator, as an element of E
  FElem root_value(int root, const std::vector<TElem>& units, const IVec& lambda) const;

  // Weyl generators expanded into u_a(1) u_{-a}(-1) u_a(1) factors
  GroupWord expand_weyl(const GroupWord& g) const;
  // sigma = theta^power (Frobenius on payloads) or h^power (quasi-split twist)
  GroupWord theta_act(const GroupWord& g, int power) const;
  GroupWord h_act(const GroupWord& g, int power) const;
  FMat theta_matrix(const FMat& m, int power) const;
  FMat h_matrix(const FMat& m, int power) const;  // J sigma(m)^{-T} J for SU3
  GroupWord norm_map_group(const GroupWord& delta, int r) const;

 private:
  const RootDatum* d_;
  const RingSpec* ring_;
  WeylGroup W_;
  std::vector<std::vector<std::vector<CommutatorTerm>>> comm_;
  std::vector<int> eps_;
};

/*
 * Iwahori normal form: prod of u_b over negative roots (index order), then a
 * torus point, then prod of u_a over positive roots (index order).  Payloads
 * at precision N; zero payloads are kept as zero.
 */
struct IwahoriNormalForm {
  std::vector<TElem> neg;       // indexed by positive root i, payload of u_{-a_i}
  std::vector<TElem> units;
  IVec lambda;
  std::vector<TElem> pos;
  GroupWord to_word(const RootDatum& d, const RingSpec& ring) const;
  bool operator==(const IwahoriNormalForm& o) const;
};

IwahoriNormalForm normal_form(const ChevalleyGroup& G, const GroupWord& g, int max_steps = 200000);

// depths indexed by root; torus_level 0 means ^0T, l > 0 means units = 1 mod p^l
bool membership_depth(const ChevalleyGroup& G, const GroupWord& g, const std::vector<int>& depths,
                      int torus_level = 0);

}  // namespace unram
