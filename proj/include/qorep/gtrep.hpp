#pragma once
// Finite-dimensional representations T_l of U'_q(so_3) and T_{rs} of
// U'_q(so_4) in the Gel'fand-Tsetlin basis, plus derived generators.

#include "qorep/genmatrix.hpp"

namespace qorep {

struct GTBasis {
  Half r, s;
  std::vector<BasisLabel> labels;  // (l, m): l ascending, m ascending
};

// d(m) in regularized form ((q^m+q^-m)(q^{m+1}+q^{-m-1}))^{-1/2}.
double d_coeff(double m, const QContext& ctx);

// Label list for T_{rs}: |s| <= l <= r, -l <= m <= l.
GTBasis gt_basis(Half r, Half s);

// (2l+1)-dimensional T_l with generators I21, I32 and derived I31.
GenMatrixSet so3_rep(Half l, const QContext& ctx);

// T_{rs} with I21, I32, I43 per the GT formulas and derived I31, I42, I41.
GenMatrixSet so4_rep(Half r, Half s, const QContext& ctx);

// Internal kernels shared with xdiag (exposed for the test oracles).
// Off-diagonal l -> l+1 coefficient of T_{rs}(I43) at (l, m); diagonal term.
double gt_A_off(double r, double s, double l, double m, const QContext& ctx);
double gt_D_diag(double r, double s, double l, double m, const QContext& ctx);

}  // namespace qorep
