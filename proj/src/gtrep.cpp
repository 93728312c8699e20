#include "qorep/gtrep.hpp"

#include <cmath>
#include <map>

#include "qorep/qarith.hpp"

namespace qorep {

namespace {

// Square root of a radicand that is nonnegative by construction; tiny
// negatives from roundoff are clamped, larger ones are a construction bug.
double safe_sqrt(double v, const QContext& ctx, const char* what) {
  if (v < -ctx.tol_zero * 1e3)
    throw InvalidParameter(std::string("negative radicand in ") + what);
  return std::sqrt(v < 0.0 ? 0.0 : v);
}

}  // namespace

double d_coeff(double m, const QContext& ctx) {
  double q = ctx.q;
  double f1 = std::pow(q, m) + std::pow(q, -m);
  double f2 = std::pow(q, m + 1.0) + std::pow(q, -m - 1.0);
  return 1.0 / std::sqrt(f1 * f2);
}

GTBasis gt_basis(Half r, Half s) {
  if (r < s.abs() || r.tw < 0)
    throw InvalidHighestWeight("gt_basis: need r >= |s| >= 0");
  if ((r - s).tw % 2 != 0)
    throw InvalidHighestWeight("gt_basis: r - s must be an integer");
  GTBasis b{r, s, {}};
  for (Half l = s.abs(); l <= r; l = l + 1)
    for (Half m = -l; m <= l; m = m + 1)
      b.labels.push_back({BasisLabel::Kind::GT, l, m});
  return b;
}

double gt_A_off(double r, double s, double l, double m, const QContext& ctx) {
  auto qn = [&](double z) { return q_number(z, ctx); };
  double rad = qn(r - l) * qn(r + l + 2) * qn(l + s + 1) * qn(l - s + 1) *
               qn(l + m + 1) * qn(l - m + 1) /
               (qn(l + 1) * qn(l + 1) * qn(2 * l + 1) * qn(2 * l + 3));
  return safe_sqrt(rad, ctx, "so4 I43 off-diagonal");
}

double gt_D_diag(double r, double s, double l, double m, const QContext& ctx) {
  if (l == 0.0) return 0.0;  // [s][m] vanishes with s=m=0 whenever l can be 0
  auto qn = [&](double z) { return q_number(z, ctx); };
  return qn(r + 1) * qn(s) * qn(m) / (qn(l) * qn(l + 1));
}

namespace {

// Fill the within-l action of I21 (diagonal i[m]) and I32 (tridiagonal in m).
void fill_so3_action(const std::vector<BasisLabel>& labels,
                     const std::map<std::pair<int, int>, int>& idx, Matrix& I21,
                     Matrix& I32, const QContext& ctx) {
  const Complex I(0.0, 1.0);
  auto qn = [&](double z) { return q_number(z, ctx); };
  for (int i = 0; i < static_cast<int>(labels.size()); ++i) {
    double l = labels[i].a.val(), m = labels[i].b.val();
    I21(i, i) = I * qn(m);
    auto up = idx.find({labels[i].a.tw, labels[i].b.tw + 2});
    if (up != idx.end())
      I32(up->second, i) =
          d_coeff(m, ctx) * safe_sqrt(qn(l - m) * qn(l + m + 1), ctx, "so3 I32");
    auto dn = idx.find({labels[i].a.tw, labels[i].b.tw - 2});
    if (dn != idx.end())
      I32(dn->second, i) = -d_coeff(m - 1.0, ctx) *
                           safe_sqrt(qn(l - m + 1) * qn(l + m), ctx, "so3 I32");
  }
}

std::map<std::pair<int, int>, int> index_of(const std::vector<BasisLabel>& labels) {
  std::map<std::pair<int, int>, int> idx;
  for (int i = 0; i < static_cast<int>(labels.size()); ++i)
    idx[{labels[i].a.tw, labels[i].b.tw}] = i;
  return idx;
}

}  // namespace

GenMatrixSet so3_rep(Half l, const QContext& ctx) {
  if (l.tw < 0) throw InvalidSpin("so3_rep: 2l must be a nonnegative integer");
  GenMatrixSet out;
  for (Half m = -l; m <= l; m = m + 1)
    out.basis.push_back({BasisLabel::Kind::GT, l, m});
  int n = out.dim();
  Matrix I21 = Matrix::Zero(n, n), I32 = Matrix::Zero(n, n);
  fill_so3_action(out.basis, index_of(out.basis), I21, I32, ctx);
  out.matrices["I21"] = I21;
  out.matrices["I32"] = I32;
  out.matrices["I31"] = q_commutator(I21, I32, ctx);
  out.meta.family = "so3";
  out.meta.q = ctx.q;
  out.meta.params_real["l"] = l.val();
  return out;
}

GenMatrixSet so4_rep(Half r, Half s, const QContext& ctx) {
  GTBasis gb = gt_basis(r, s);  // validates (r, s)
  GenMatrixSet out;
  out.basis = gb.labels;
  int n = out.dim();
  auto idx = index_of(out.basis);
  Matrix I21 = Matrix::Zero(n, n), I32 = Matrix::Zero(n, n),
         I43 = Matrix::Zero(n, n);
  fill_so3_action(out.basis, idx, I21, I32, ctx);
  const Complex I(0.0, 1.0);
  double rv = r.val(), sv = s.val();
  for (int i = 0; i < n; ++i) {
    double l = out.basis[i].a.val(), m = out.basis[i].b.val();
    I43(i, i) = I * gt_D_diag(rv, sv, l, m, ctx);
    auto up = idx.find({out.basis[i].a.tw + 2, out.basis[i].b.tw});
    if (up != idx.end()) I43(up->second, i) = gt_A_off(rv, sv, l, m, ctx);
    auto dn = idx.find({out.basis[i].a.tw - 2, out.basis[i].b.tw});
    if (dn != idx.end()) I43(dn->second, i) = -gt_A_off(rv, sv, l - 1.0, m, ctx);
  }
  out.matrices["I21"] = I21;
  out.matrices["I32"] = I32;
  out.matrices["I43"] = I43;
  out.matrices["I31"] = q_commutator(I21, I32, ctx);
  out.matrices["I42"] = q_commutator(I32, I43, ctx);
  out.matrices["I41"] = q_commutator(out.matrices["I31"], I43, ctx);
  out.meta.family = "so4";
  out.meta.q = ctx.q;
  out.meta.params_real["r"] = rv;
  out.meta.params_real["s"] = sv;
  return out;
}

}  // namespace qorep
