#include "qorep/verify.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <deque>

namespace qorep {

double op_norm(const Matrix& A) {
  if (A.rows() == 0 || A.cols() == 0) return 0.0;
  return A.jacobiSvd().singularValues()(0);
}

Matrix compress(const Matrix& M, const Restriction& r) {
  if (r.full()) return M;
  Matrix out(r.indices.size(), r.indices.size());
  for (size_t i = 0; i < r.indices.size(); ++i)
    for (size_t j = 0; j < r.indices.size(); ++j)
      out(i, j) = M(r.indices[i], r.indices[j]);
  return out;
}

namespace {

ResidualReport make_report(const std::string& name, double defect, double scale,
                           const QContext& ctx, const Restriction& rest) {
  ResidualReport rep;
  rep.name = name;
  rep.residual = scale > 0.0 ? defect / scale : defect;
  rep.passed = rep.residual <= ctx.tol_rel;
  rep.restriction = rest.desc;
  return rep;
}

}  // namespace

std::vector<ResidualReport> check_serre(const Matrix& A, const Matrix& B,
                                        const QContext& ctx,
                                        const Restriction& rest) {
  if (A.rows() != A.cols() || B.rows() != B.cols() || A.rows() != B.rows())
    throw DimensionMismatch("check_serre: matrices must be square and conformable");
  double a = ctx.q + 1.0 / ctx.q;
  double nA = op_norm(A), nB = op_norm(B);
  Matrix D1 = A * B * B - a * (B * A * B) + B * B * A + A;
  Matrix D2 = B * A * A - a * (A * B * A) + A * A * B + B;
  double s1 = nA * nB * nB + nA;
  double s2 = nB * nA * nA + nB;
  return {make_report("serre(A,B^2)", op_norm(compress(D1, rest)), s1, ctx, rest),
          make_report("serre(B,A^2)", op_norm(compress(D2, rest)), s2, ctx, rest)};
}

std::vector<ResidualReport> check_so3_bilinear(const Matrix& I21,
                                               const Matrix& I32,
                                               const Matrix& I31,
                                               const QContext& ctx,
                                               const Restriction& rest) {
  double r = std::sqrt(ctx.q), ri = 1.0 / r;
  double n1 = op_norm(I21), n2 = op_norm(I32), n3 = op_norm(I31);
  // (9): q^{1/2} I21 I32 - q^{-1/2} I32 I21 = I31
  Matrix D9 = r * (I21 * I32) - ri * (I32 * I21) - I31;
  // (10): q^{1/2} I32 I31 - q^{-1/2} I31 I32 = I21
  Matrix D10 = r * (I32 * I31) - ri * (I31 * I32) - I21;
  // (11): q^{1/2} I31 I21 - q^{-1/2} I21 I31 = I32
  Matrix D11 = r * (I31 * I21) - ri * (I21 * I31) - I32;
  return {
      make_report("bilinear(9)", op_norm(compress(D9, rest)), n1 * n2 + n3, ctx, rest),
      make_report("bilinear(10)", op_norm(compress(D10, rest)), n2 * n3 + n1, ctx, rest),
      make_report("bilinear(11)", op_norm(compress(D11, rest)), n3 * n1 + n2, ctx, rest)};
}

ResidualReport check_commute(const Matrix& A, const Matrix& B,
                             const QContext& ctx, const Restriction& rest) {
  if (A.rows() != B.rows() || A.cols() != B.cols())
    throw DimensionMismatch("check_commute: shapes differ");
  Matrix D = A * B - B * A;
  double scale = op_norm(A) * op_norm(B);
  ResidualReport rep;
  rep.name = "commute";
  rep.residual = scale > 0.0 ? op_norm(compress(D, rest)) / scale
                             : op_norm(compress(D, rest));
  rep.passed = rep.residual <= ctx.tol_zero || op_norm(compress(D, rest)) <= ctx.tol_zero;
  rep.restriction = rest.desc;
  return rep;
}

std::vector<ResidualReport> check_star(const GenMatrixSet& M,
                                       const QContext& ctx,
                                       const Restriction& rest) {
  std::vector<ResidualReport> out;
  auto one = [&](const std::string& g, int sign) {
    if (!M.has(g)) return;
    const Matrix& A = M.at(g);
    Matrix D = compress(A, rest) +
               static_cast<double>(sign) * compress(A, rest).adjoint();
    double scale = op_norm(compress(A, rest));
    ResidualReport rep;
    rep.name = g + (sign > 0 ? "* = -" + g : "* = " + g);
    rep.residual = scale > 0.0 ? op_norm(D) / scale : op_norm(D);
    rep.passed = rep.residual <= ctx.tol_rel;
    rep.restriction = rest.desc;
    out.push_back(rep);
  };
  one("I21", +1);  // I21* = -I21
  one("I32", -1);  // I32* = I32
  one("I43", +1);  // I43* = -I43
  return out;
}

SpectrumReport check_spectrum(const Matrix& M,
                              const std::vector<Complex>& expected,
                              const QContext& ctx, double tol) {
  if (M.rows() != static_cast<long>(expected.size()))
    throw DimensionMismatch("check_spectrum: expected multiset size differs");
  Eigen::ComplexEigenSolver<Matrix> es(M, /*computeEigenvectors=*/false);
  std::vector<Complex> got(es.eigenvalues().data(),
                           es.eigenvalues().data() + M.rows());
  std::vector<Complex> want = expected;
  auto key = [](const Complex& a, const Complex& b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
  };
  std::sort(got.begin(), got.end(), key);
  std::sort(want.begin(), want.end(), key);
  SpectrumReport rep;
  for (size_t i = 0; i < got.size(); ++i)
    rep.max_deviation = std::max(rep.max_deviation, std::abs(got[i] - want[i]));
  rep.passed = rep.max_deviation <= (tol > 0.0 ? tol : ctx.tol_rel);
  return rep;
}

double check_invariant_subspace(const GenMatrixSet& M,
                                const std::vector<int>& S, bool two_sided) {
  int n = M.dim();
  std::vector<char> in_S(n, 0);
  for (int i : S) {
    if (i < 0 || i >= n) throw OutOfRange("check_invariant_subspace: bad index");
    in_S[i] = 1;
  }
  std::vector<int> comp;
  for (int i = 0; i < n; ++i)
    if (!in_S[i]) comp.push_back(i);
  double leak = 0.0;
  for (const auto& [name, A] : M.matrices) {
    Matrix out(comp.size(), S.size());  // complement <- S rows
    for (size_t i = 0; i < comp.size(); ++i)
      for (size_t j = 0; j < S.size(); ++j) out(i, j) = A(comp[i], S[j]);
    leak = std::max(leak, out.size() ? out.cwiseAbs().maxCoeff() : 0.0);
    if (two_sided) {
      Matrix in(S.size(), comp.size());
      for (size_t i = 0; i < S.size(); ++i)
        for (size_t j = 0; j < comp.size(); ++j) in(i, j) = A(S[i], comp[j]);
      leak = std::max(leak, in.size() ? in.cwiseAbs().maxCoeff() : 0.0);
    }
  }
  return leak;
}

DiagonalIntertwiner diagonal_intertwiner(const Matrix& M1, const Matrix& M2,
                                         const QContext& ctx,
                                         const Restriction& rest) {
  if (M1.rows() != M2.rows() || M1.cols() != M2.cols() || M1.rows() != M1.cols())
    throw DimensionMismatch("diagonal_intertwiner: shapes differ");
  const int n = static_cast<int>(M1.rows());
  Eigen::VectorXcd g = Eigen::VectorXcd::Zero(n);
  std::vector<char> seen(n, 0);
  // BFS over the shared connectivity graph, one tree per component.
  for (int root = 0; root < n; ++root) {
    if (seen[root]) continue;
    g(root) = 1.0;
    seen[root] = 1;
    std::deque<int> dq{root};
    while (!dq.empty()) {
      int i = dq.front();
      dq.pop_front();
      for (int j = 0; j < n; ++j) {
        if (seen[j]) continue;
        // g_j M1[j,i] / g_i = M2[j,i]  (and symmetrically via row i)
        if (std::abs(M1(j, i)) > 1e-10 && std::abs(M2(j, i)) > 1e-10) {
          g(j) = g(i) * M2(j, i) / M1(j, i);
        } else if (std::abs(M1(i, j)) > 1e-10 && std::abs(M2(i, j)) > 1e-10) {
          g(j) = g(i) * M1(i, j) / M2(i, j);
        } else {
          continue;
        }
        seen[j] = 1;
        dq.push_back(j);
      }
    }
  }
  Matrix D = g.asDiagonal() * M1 * g.cwiseInverse().asDiagonal() - M2;
  double scale = op_norm(M2);
  DiagonalIntertwiner out;
  out.gauge = g;
  double defect = op_norm(compress(D, rest));
  out.residual = scale > 0.0 ? defect / scale : defect;
  return out;
}

Matrix check_equivalence(const GenMatrixSet& M1, const GenMatrixSet& M2,
                         EquivalenceAnsatz ansatz, const QContext& ctx,
                         const Restriction& rest) {
  if (M1.dim() != M2.dim())
    throw DimensionMismatch("check_equivalence: dimensions differ");
  const int n = M1.dim();
  std::vector<std::string> shared;
  for (const auto& [name, A] : M1.matrices)
    if (M2.has(name)) shared.push_back(name);
  if (shared.empty())
    throw InvalidParameter("check_equivalence: no shared generators");

  if (ansatz == EquivalenceAnsatz::Diagonal) {
    // Propagate along the off-diagonal structure generator; fall back to the
    // first shared generator with off-diagonal entries.
    std::string conn = M1.has("I32") && M2.has("I32") ? "I32" : shared.front();
    DiagonalIntertwiner di = diagonal_intertwiner(M1.at(conn), M2.at(conn), ctx, rest);
    Matrix L = di.gauge.asDiagonal();
    Matrix Linv = di.gauge.cwiseInverse().asDiagonal();
    for (const auto& g : shared) {
      Matrix D = L * M1.at(g) * Linv - M2.at(g);
      double scale = op_norm(M2.at(g));
      double resid = op_norm(compress(D, rest)) / (scale > 0.0 ? scale : 1.0);
      if (resid > ctx.tol_rel)
        throw NotEquivalent("check_equivalence(diagonal): residual " +
                            std::to_string(resid) + " on " + g);
    }
    return L;
  }

  // General ansatz: stack the Sylvester systems Lambda M1(g) - M2(g) Lambda
  // = 0 and take the smallest right singular vector.
  Eigen::MatrixXcd A(static_cast<long>(shared.size()) * n * n, n * n);
  A.setZero();
  long row0 = 0;
  for (const auto& gname : shared) {
    const Matrix& X = M1.at(gname);
    const Matrix& Y = M2.at(gname);
    // vec(L X - Y L): d/dL_{ab} of (L X - Y L)_{ij} = delta_{ia} X_{bj} - Y_{ia} delta_{bj}
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        long row = row0 + i * n + j;
        for (int b = 0; b < n; ++b) A(row, i * n + b) += X(b, j);
        for (int a = 0; a < n; ++a) A(row, a * n + j) -= Y(i, a);
      }
    row0 += static_cast<long>(n) * n;
  }
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(A, Eigen::ComputeThinV);
  Eigen::VectorXcd v = svd.matrixV().col(n * n - 1);
  Matrix L(n, n);
  for (int i = 0; i < n; ++i)
    for (int b = 0; b < n; ++b) L(i, b) = v(i * n + b);
  Eigen::JacobiSVD<Matrix> lsvd(L);
  double cond_min = lsvd.singularValues()(n - 1);
  if (cond_min < 1e-8 * lsvd.singularValues()(0))
    throw SingularIntertwiner("check_equivalence(general): Lambda singular");
  Matrix Linv = L.inverse();
  for (const auto& g : shared) {
    Matrix D = L * M1.at(g) * Linv - M2.at(g);
    double scale = op_norm(M2.at(g));
    double resid = op_norm(compress(D, rest)) / (scale > 0.0 ? scale : 1.0);
    if (resid > ctx.tol_rel)
      throw NotEquivalent("check_equivalence(general): residual " +
                          std::to_string(resid) + " on " + g);
  }
  return L;
}

}  // namespace qorep
