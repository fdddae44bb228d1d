#pragma once

// Monodromy weight filtrations W(N) and W(C), relative weight filtrations,
// multi-index gradings splitting filtration families, polarization-adapted
// gradings, and position indices.

#include <optional>
#include <vector>

#include "hodge/grading.hpp"
#include "hodge/unipotent.hpp"

namespace hodge {

struct NilpotentEndo {
  QMat N;
  int index = 0;  // smallest k with N^{k+1} = 0
};

NilpotentEndo make_nilpotent(const QMat& N);  // throws if not nilpotent

struct Cone {
  std::vector<QMat> generators;  // commuting rational nilpotents
  int dim() const {
    return generators.empty() ? 0 : generators.front().rows();
  }
  QMat combine(const QVec& lambda) const;  // Σ λ_j N_j
  QMat sum() const;                        // Σ N_j
};

Cone make_cone(std::vector<QMat> generators);  // validates the invariants

// The increasing filtration centered at 0 with N·W_l ⊆ W_{l-2} and
// N^l: Gr_l ≅ Gr_{-l}; computed by the kernel/image formula
// W_l = Σ_{j≥0} ker(N^{j+1}) ∩ im(N^{j-l}) and verified against both
// characterizing properties before being returned.
QFilt weight_filtration(const QMat& N);

// Both characterizing properties, checked exactly.
bool check_weight_filtration(const QMat& N, const QFilt& W);

// W(Σ λ_j N_j) at λ = (1,..,1), re-derived at `resamples` random positive
// rational λ; any disagreement throws VerificationFailure.
QFilt cone_weight_filtration(const Cone& c, int resamples = 3,
                             uint64_t seed = 0x77e11);

// The unique filtration M with N·M_l ⊆ M_{l-2} inducing, on every Gr^W_k,
// the weight filtration of the induced nilpotent centered at k.  Returns
// nullopt when the verified candidate fails (nonexistence is a legitimate
// outcome).  The candidate is assembled from the echelon splitting of W.
std::optional<QFilt> relative_weight_filtration(const QMat& N, const QFilt& W);

// ---------------------------------------------------------------------------
// Z^d-gradings.

using MultiIndex = std::vector<int>;

class MultiGrading {
 public:
  MultiGrading() : d_(0), n_(0) {}
  MultiGrading(int index_dim, int ambient_dim) : d_(index_dim), n_(ambient_dim) {}

  int index_dim() const { return d_; }
  int ambient_dim() const { return n_; }

  void set(const MultiIndex& l, QSub s);
  const std::map<MultiIndex, QSub>& pieces() const { return pieces_; }
  QSub piece(const MultiIndex& l) const;

  int total_dim() const;
  bool is_direct_sum() const;

  // component of v in A^l along the other pieces
  QVec project(const QVec& v, const MultiIndex& l) const;
  QMat projector(const MultiIndex& l) const;

  // increasing filtration with steps ⊕_{l_1+..+l_j <= w} A^l
  QFilt partial_sum_filtration(int j) const;

  // A^l pairs to zero with A^m under Q unless l + m = 0
  bool orthogonal_under(const QMat& Q) const;

 private:
  void ensure_solver() const;

  int d_, n_;
  std::map<MultiIndex, QSub> pieces_;
  mutable std::shared_ptr<QMat> solver_;
  mutable std::vector<std::pair<MultiIndex, int>> layout_;  // piece, offset
};

// Distributivity of the lattice generated by the filtration steps, checked
// on all triples of steps; returns a human-readable witness on failure.
std::optional<std::string> distributivity_witness(const std::vector<QFilt>& Ws);

// Z^d-grading A with W^j_w = ⊕_{l_1+..+l_j <= w} A^l for every j, w; the
// identities are verified before returning.
MultiGrading splitting_grading(const std::vector<QFilt>& Ws);

// Replaces A by g^{1/2}·A where g carries A to its Q-dual grading; the
// result satisfies the pairing condition of orthogonal_under(Q) and splits
// the same partial-sum filtrations.  Throws when g fails to be unipotent.
MultiGrading polarization_compatible_grading(const MultiGrading& A,
                                             const QMat& Q);

// Lexicographically largest l with nonzero component of u in A^l.
MultiIndex position(const QVec& u, const MultiGrading& A);

}  // namespace hodge
