#pragma once
// Numerical certification engine: relation residuals, Hermiticity checks,
// spectrum comparison, invariant-subspace leakage, intertwiner search.

#include <optional>

#include "qorep/genmatrix.hpp"

namespace qorep {

// Index-subset restriction for interior-window certification. An empty
// index list means the full space.
struct Restriction {
  std::vector<int> indices;
  std::string desc = "full";
  bool full() const { return indices.empty(); }
};

struct ResidualReport {
  std::string name;
  double residual = 0.0;  // relative to the stated scale of the relation
  bool passed = false;
  std::string restriction = "full";
};

// Operator norm (largest singular value).
double op_norm(const Matrix& A);

// Compress M to the restriction rows/columns (identity if full).
Matrix compress(const Matrix& M, const Restriction& r);

// Trilinear relations (5)-(6): A B^2 - (q+q^-1) B A B + B^2 A = -A and the
// B-against-A counterpart; residuals relative to ||A|| ||B||^2 + ||A||.
std::vector<ResidualReport> check_serre(const Matrix& A, const Matrix& B,
                                        const QContext& ctx,
                                        const Restriction& rest = {});

// Bilinear so3 relations (9)-(11) for the triple (I21, I32, I31).
std::vector<ResidualReport> check_so3_bilinear(const Matrix& I21,
                                               const Matrix& I32,
                                               const Matrix& I31,
                                               const QContext& ctx,
                                               const Restriction& rest = {});

// Commutator relation (7): [A, B] = 0 for |i-j| > 1 generator pairs.
ResidualReport check_commute(const Matrix& A, const Matrix& B,
                             const QContext& ctx, const Restriction& rest = {});

// *-conditions: I21, I43 skew-Hermitian, I32 Hermitian, on the restriction.
std::vector<ResidualReport> check_star(const GenMatrixSet& M,
                                       const QContext& ctx,
                                       const Restriction& rest = {});

// Optimal matching distance between eig(M) and an expected multiset.
struct SpectrumReport {
  double max_deviation = 0.0;
  bool passed = false;
};
SpectrumReport check_spectrum(const Matrix& M,
                              const std::vector<Complex>& expected,
                              const QContext& ctx, double tol = -1.0);

// Leakage of the index subset S across its boundary, maximized over all
// generators in M. two_sided: both off-blocks; otherwise only the outflow
// (complement <- S) rectangle, certifying containment M(S) subset S.
double check_invariant_subspace(const GenMatrixSet& M,
                                const std::vector<int>& S, bool two_sided);

// Intertwiner search: find invertible Lambda with Lambda M1(g) Lambda^{-1}
// = M2(g) for all shared generators. The diagonal ansatz propagates entries
// along the connectivity graph of the named off-diagonal generator (I32)
// and then verifies globally; the general ansatz solves the joint linear
// system by SVD (small dimensions only).
enum class EquivalenceAnsatz { Diagonal, General };
Matrix check_equivalence(const GenMatrixSet& M1, const GenMatrixSet& M2,
                         EquivalenceAnsatz ansatz, const QContext& ctx,
                         const Restriction& rest = {});

// Diagonal-ansatz core on raw matrices: returns the diagonal gauge g with
// g M1 g^{-1} ~ M2 along connectivity, plus the verified residual.
struct DiagonalIntertwiner {
  Eigen::VectorXcd gauge;
  double residual = 0.0;  // relative defect on the restriction
};
DiagonalIntertwiner diagonal_intertwiner(const Matrix& M1, const Matrix& M2,
                                         const QContext& ctx,
                                         const Restriction& rest = {});

}  // namespace qorep
