#pragma once
// Labeled generator-matrix bundles shared by all representation families.

#include <Eigen/Dense>
#include <map>
#include <string>
#include <tuple>
#include <vector>

#include "qorep/common.hpp"

namespace qorep {

using Matrix = Eigen::MatrixXcd;

// Discriminated basis label with a deterministic total order.
//   GT:     (l, m)  ordered l ascending, then m ascending
//   X:      (x, m)  ordered m ascending, then x descending
//   Window: (k, l)  ordered k ascending, then l ascending
struct BasisLabel {
  enum class Kind { GT, X, Window } kind = Kind::GT;
  Half a;  // GT: l,  X: x,  Window: k
  Half b;  // GT: m,  X: m,  Window: l

  friend bool operator==(const BasisLabel&, const BasisLabel&) = default;
  friend bool operator<(const BasisLabel& u, const BasisLabel& v) {
    if (u.kind != v.kind) return static_cast<int>(u.kind) < static_cast<int>(v.kind);
    switch (u.kind) {
      case Kind::GT:
      case Kind::Window:
        return std::tie(u.a.tw, u.b.tw) < std::tie(v.a.tw, v.b.tw);
      case Kind::X:  // m ascending, then x descending
        return std::tie(u.b.tw, v.a.tw) < std::tie(v.b.tw, u.a.tw);
    }
    return false;
  }
};

// Construction metadata carried with every matrix set (also serialized).
struct GenMeta {
  std::string family;  // so3 | so4 | so4x | so22 | so22primed | ladder:<tag>
  double q = 0.0;
  std::map<std::string, double> params_real;      // r, s, l, K, eps ...
  std::map<std::string, Complex> params_complex;  // b, c
  int nonreal_entries = 0;  // BranchAmbiguity count (so22primed only)
};

struct GenMatrixSet {
  std::vector<BasisLabel> basis;
  std::map<std::string, Matrix> matrices;  // I21, I32, I43, I31, I42, I41
  GenMeta meta;

  int dim() const { return static_cast<int>(basis.size()); }
  const Matrix& at(const std::string& name) const {
    auto it = matrices.find(name);
    if (it == matrices.end())
      throw InvalidParameter("GenMatrixSet: no generator named " + name);
    return it->second;
  }
  bool has(const std::string& name) const { return matrices.count(name) > 0; }
};

// Deformed q-commutator of Eq.-(8) type: q^{1/2} A B - q^{-1/2} B A.
inline Matrix q_commutator(const Matrix& A, const Matrix& B, const QContext& ctx) {
  double r = std::sqrt(ctx.q);
  return r * (A * B) - (1.0 / r) * (B * A);
}

}  // namespace qorep
