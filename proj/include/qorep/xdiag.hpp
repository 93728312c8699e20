#pragma once
// Diagonalization of L = -i T_{rs}(I43) on the fixed-m subspaces V_m via
// q-Racah polynomials; x-basis construction and transition matrices.

#include "qorep/gtrep.hpp"

namespace qorep {

struct SpectrumResult {
  Half m;
  std::vector<double> eigenvalues;  // [x] values, ascending in x
  std::vector<Half> x_labels;       // arithmetic chain of step 2
};

// Spectrum of L on V_m. The x-labels are produced in the sign convention
// fixed by the numerical eigensolver oracle (see module tests): with
// st = max(|s|,|m|), mt = min(|s|,|m|), sgn = sign(s)sign(m),
//   x = sgn * ((st + mt - r) + 2y),  y = 0..r-st.
SpectrumResult spectrum_on_Vm(Half r, Half s, Half m, const QContext& ctx);

// P_n(x), n = 0..r-max(|s|,|m|), by iterating the three-term recurrence
// seeded with P_0 = 1, P_{-1} = 0 on the actual V_m Jacobi block.
std::vector<double> eig_coeffs_recurrence(Half r, Half s, Half m, Half x,
                                          const QContext& ctx);

// Same vector through the closed q-Racah form (normal form s >= m >= 0).
std::vector<double> eig_coeffs_racah(Half r, Half s, Half m, Half x,
                                     const QContext& ctx);

// Orthogonality weight W(x). The displayed closed form is evaluated where
// well-defined and compared against the normalization-forced numerical
// weight (sum_n P_n(x)^2)^{-1}; on mismatch the numerical value is used and
// the report records the discrepancy.
struct WeightReport {
  bool displayed_defined = false;  // all factorial arguments nonnegative
  bool fallback_used = false;
  double mismatch = 0.0;  // |displayed/numerical - 1| when defined
};
double weight_W(Half r, Half s, Half m, Half x, const QContext& ctx,
                WeightReport* report = nullptr);

// Ordered x-basis labels: m ascending, then x descending.
std::vector<BasisLabel> x_basis(Half r, Half s, const QContext& ctx);

// Unitary GT -> x transition matrix (block diagonal over m), including the
// i^{-l} phase adjustment. Columns follow x_basis order, rows gt_basis.
Matrix transition_matrix(Half r, Half s, const QContext& ctx);

// x-basis generator set: I43 = diag(i[x]), I21 = diag(i[m]), I32 from the
// closed-form nearest-neighbor action.
GenMatrixSet so4_rep_xbasis(Half r, Half s, const QContext& ctx);

}  // namespace qorep
