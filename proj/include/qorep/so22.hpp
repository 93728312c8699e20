#pragma once
// Windowed truncations of the representations T^eps_{bc} of U'_q(so_{2,2}),
// parameter canonicalization (32)-(34), irreducibility (Theorem 1),
// component decomposition (Theorem 2, Cases 1-5) with ladder chains
// (36)-(37), star classification (Theorem 3), and the finite E^{00} block
// equivalence with T_{rs}.

#include <optional>

#include "qorep/genmatrix.hpp"
#include "qorep/verify.hpp"

namespace qorep {

struct RepParams {
  int epsilon = 0;  // 0: integer lattice, 1: half-odd lattice
  Complex b, c;
};

struct WindowBasis {
  int epsilon = 0;
  double K = 0.0;
  std::vector<BasisLabel> labels;  // (k, l): k ascending, then l ascending
};

WindowBasis make_window(int epsilon, double K);

// Indices of window labels with |k| <= K - margin and |l| <= K - margin.
std::vector<int> interior_indices(const std::vector<BasisLabel>& labels,
                                  double K, double margin);
Restriction interior_restriction(const std::vector<BasisLabel>& labels,
                                 double K, double margin);

// Unprimed form (30)-(31). Boundary rows simply drop outgoing transitions.
GenMatrixSet so22_rep(const RepParams& p, double K, const QContext& ctx);

// Primed (square-root symmetrized) form of (35); principal square-root
// branch, meta.nonreal_entries counts entries off the real axis.
GenMatrixSet so22_rep_primed(const RepParams& p, double K, const QContext& ctx);

// Parameter canonicalization under (32)-(34):
// 0 <= Im b, Im c < pi/h and Re b, Re c >= 1/2, with a move log.
std::pair<RepParams, std::vector<std::string>> canonicalize(const RepParams& p,
                                                            const QContext& ctx);

// Theorem 1 irreducibility. Both the literal (all-integer) lattice and the
// parity-refined (eps-lattice) predicate are computed; on disagreement the
// numerical wall detector arbitrates (and the refined answer is returned
// with a diagnostic flag).
struct IrreducibilityVerdict {
  bool irreducible = false;
  bool literal_irreducible = false;
  bool refined_irreducible = false;
  bool predicates_disagree = false;
};
IrreducibilityVerdict classify_irreducible_detail(const RepParams& p,
                                                  const QContext& ctx);
bool classify_irreducible(const RepParams& p, const QContext& ctx);

enum class Theorem2Class { Irreducible, D, F, Q, R, E };

struct Component {
  std::string label;   // "D0", "D+", "Q++", "E+-", ...
  std::string region;  // the defining wall inequalities
  std::vector<int> indices;
  bool empty = false;
  bool bounded = false;     // bounded in every wall direction (two-sided cert)
  double leakage = -1.0;    // cross-boundary leakage (max-abs entry)
  bool star = false;        // Theorem 3 class membership certified
  double star_residual = -1.0;
  int star_class = 0;       // Theorem 3 class number, 0 if none
};

struct ClassificationReport {
  RepParams params;  // canonical
  bool irreducible = false;
  Theorem2Class theorem2_class = Theorem2Class::Irreducible;
  std::vector<Component> components;
  std::optional<int> star_series;  // Theorem 3 class (1)-(9)
  std::vector<std::string> notes;
};

// Theorem 2 decomposition on a window of radius K with numerically
// certified component regions.
ClassificationReport decompose(const RepParams& p, double K, const QContext& ctx);

// One-dimensional chain representations (36)-(37).
enum class LadderTag { D0, F0, Q0, Qplus, Qminus, R0, Rplus, Rminus };
GenMatrixSet ladder_rep(LadderTag tag, const RepParams& p, double K,
                        const QContext& ctx);
// Same with an explicit relative sign between the two chain terms; the
// published formula omits the sign, +1 is the resolved choice.
GenMatrixSet ladder_rep_signed(LadderTag tag, const RepParams& p, double K,
                               const QContext& ctx, int rel_sign);

// Theorem 3 star classification: pattern match then Hermiticity
// certification on interior(3). Returns the class number (1)-(9) or
// nullopt; throws CertificationFailed when pattern and residuals disagree.
std::optional<int> star_classify(const RepParams& p, double K,
                                 const QContext& ctx);

// Certificate that E^{00}_{bc} (finite block of the primed rep) is
// equivalent to T_{rs} with r = b+c-2 and |s| = |c-b|; the sign of s is
// fixed by the joint (I21, I43) spectrum of the block.
struct EquivalenceCertificate {
  int dim = 0;
  Half r, s;
  double spectrum_deviation = 0.0;
  double intertwiner_residual = 0.0;
  Matrix intertwiner;  // maps GT coordinates to E00 coordinates
};
EquivalenceCertificate finite_block_equivalence(Half b, Half c,
                                                const QContext& ctx);

}  // namespace qorep
