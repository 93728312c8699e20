#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "qorep/gtrep.hpp"
#include "qorep/qarith.hpp"
#include "qorep/verify.hpp"

using namespace qorep;

namespace {

void check_all(const std::vector<ResidualReport>& reports) {
  for (const auto& r : reports) {
    INFO(r.name, " residual ", r.residual);
    CHECK(r.passed);
  }
}

double skew_defect(const Matrix& A) {
  double n = op_norm(A);
  return n == 0.0 ? 0.0 : op_norm(A + A.adjoint()) / n;
}

}  // namespace

TEST_CASE("d_coeff: closed form and classical limit") {
  QContext ctx(1.4);
  double q = ctx.q;
  for (double m : {0.0, 0.5, 1.0, -1.5, 3.0}) {
    double want = 1.0 / std::sqrt((std::pow(q, m) + std::pow(q, -m)) *
                                  (std::pow(q, m + 1) + std::pow(q, -m - 1)));
    CHECK(d_coeff(m, ctx) == doctest::Approx(want).epsilon(1e-14));
  }
  QContext near1(1.0 + 1e-9);
  CHECK(d_coeff(2.0, near1) == doctest::Approx(0.5).epsilon(1e-7));
}

TEST_CASE("gt_basis: validation and dimension count") {
  QContext ctx(1.2);
  CHECK_THROWS_AS(gt_basis(Half::whole(1), Half::whole(2)), InvalidHighestWeight);
  CHECK_THROWS_AS(gt_basis(Half::whole(-1), Half::whole(0)), InvalidHighestWeight);
  CHECK_THROWS_AS(gt_basis(Half::whole(2), Half::nearest(0.5)),
                  InvalidHighestWeight);
  // dim T_rs = (r+1)^2 - s^2
  for (auto [r, s] : std::vector<std::pair<double, double>>{
           {0, 0}, {1, 0}, {2, 1}, {1.5, 0.5}, {2, 2}, {2.5, 1.5}}) {
    GTBasis b = gt_basis(Half::nearest(r), Half::nearest(s));
    double want = (r + 1) * (r + 1) - s * s;
    CHECK(static_cast<double>(b.labels.size()) == doctest::Approx(want));
  }
  // negative s allowed: same l range as |s|
  CHECK(gt_basis(Half::whole(2), Half::whole(-1)).labels.size() ==
        gt_basis(Half::whole(2), Half::whole(1)).labels.size());
}

TEST_CASE("so3_rep: l = 0 and l = 1/2 explicit entries") {
  QContext ctx(1.6);
  GenMatrixSet z = so3_rep(Half::whole(0), ctx);
  CHECK(z.dim() == 1);
  CHECK(std::abs(z.at("I21")(0, 0)) == 0.0);
  CHECK(std::abs(z.at("I32")(0, 0)) == 0.0);

  GenMatrixSet h = so3_rep(Half::nearest(0.5), ctx);
  REQUIRE(h.dim() == 2);  // basis: m = -1/2, +1/2
  CHECK(h.at("I21")(0, 0) == Complex(0.0, q_number(-0.5, ctx)));
  CHECK(h.at("I21")(1, 1) == Complex(0.0, q_number(0.5, ctx)));
  double qh = std::sqrt(ctx.q);
  double want = 1.0 / (qh + 1.0 / qh);
  CHECK(h.at("I32")(1, 0).real() == doctest::Approx(want).epsilon(1e-14));
  CHECK(h.at("I32")(0, 1).real() == doctest::Approx(-want).epsilon(1e-14));
}

TEST_CASE("so3_rep: classical limit recovers so(3) ladder entries") {
  QContext near1(1.0 + 1e-9);
  GenMatrixSet M = so3_rep(Half::whole(1), near1);  // m = -1, 0, 1
  // classical: I32 (m -> m+1) = sqrt((l-m)(l+m+1))/2
  CHECK(M.at("I32")(1, 0).real() ==
        doctest::Approx(std::sqrt(2.0) / 2.0).epsilon(1e-7));
  CHECK(M.at("I32")(2, 1).real() ==
        doctest::Approx(std::sqrt(2.0) / 2.0).epsilon(1e-7));
  CHECK(M.at("I32")(0, 1).real() ==
        doctest::Approx(-std::sqrt(2.0) / 2.0).epsilon(1e-7));
}

TEST_CASE("so3_rep: relations and skew-Hermiticity across l and q") {
  for (double q : {1.25, 0.8, 3.0}) {
    QContext ctx(q);
    for (double l : {0.5, 1.0, 1.5, 3.0}) {
      GenMatrixSet M = so3_rep(Half::nearest(l), ctx);
      check_all(check_serre(M.at("I21"), M.at("I32"), ctx));
      check_all(
          check_so3_bilinear(M.at("I21"), M.at("I32"), M.at("I31"), ctx));
      CHECK(skew_defect(M.at("I21")) <= 1e-13);
      CHECK(skew_defect(M.at("I32")) <= 1e-13);
      // derived generator: adjoint is the opposite-ordered q-commutator
      Matrix opp = q_commutator(M.at("I32"), M.at("I21"), ctx);
      CHECK(op_norm(M.at("I31").adjoint() - opp) <= 1e-13);
    }
  }
}

TEST_CASE("gt_A_off: vanishes at the top rung l = r") {
  QContext ctx(1.3);
  CHECK(gt_A_off(2.0, 1.0, 2.0, 0.0, ctx) == doctest::Approx(0.0));
  CHECK(gt_A_off(1.5, 0.5, 1.5, 0.5, ctx) == doctest::Approx(0.0));
}

TEST_CASE("so4_rep: full relation grid") {
  for (double q : {1.2, 0.8}) {
    QContext ctx(q);
    for (auto [r, s] : std::vector<std::pair<double, double>>{
             {1, 0}, {2, 1}, {1.5, 0.5}, {2, 2}, {2.5, 0.5}, {3, -1}}) {
      GenMatrixSet M = so4_rep(Half::nearest(r), Half::nearest(s), ctx);
      INFO("r = ", r, ", s = ", s, ", q = ", q);
      check_all(check_serre(M.at("I21"), M.at("I32"), ctx));
      check_all(check_serre(M.at("I32"), M.at("I43"), ctx));
      check_all(
          check_so3_bilinear(M.at("I21"), M.at("I32"), M.at("I31"), ctx));
      ResidualReport c = check_commute(M.at("I21"), M.at("I43"), ctx);
      INFO("commute residual ", c.residual);
      CHECK(c.passed);
    }
  }
}

TEST_CASE("so4_rep: compact star (all generators skew-Hermitian)") {
  QContext ctx(1.45);
  for (auto [r, s] : std::vector<std::pair<double, double>>{
           {1, 0}, {2, 1}, {1.5, 1.5}, {2.5, 0.5}}) {
    GenMatrixSet M = so4_rep(Half::nearest(r), Half::nearest(s), ctx);
    for (const char* g : {"I21", "I32", "I43"}) {
      INFO(g);
      CHECK(skew_defect(M.at(g)) <= 1e-13);
    }
    // derived generators: adjoints are the opposite-ordered q-commutators
    CHECK(op_norm(M.at("I31").adjoint() -
                  q_commutator(M.at("I32"), M.at("I21"), ctx)) <= 1e-12);
    CHECK(op_norm(M.at("I42").adjoint() -
                  q_commutator(M.at("I43"), M.at("I32"), ctx)) <= 1e-12);
  }
}

TEST_CASE("so4_rep: I21 spectrum is { i[m] } over the GT basis") {
  QContext ctx(1.35);
  Half r = Half::whole(2), s = Half::whole(1);
  GenMatrixSet M = so4_rep(r, s, ctx);
  std::vector<Complex> expect;
  for (const auto& lb : M.basis)
    expect.push_back(Complex(0.0, q_number(lb.b.val(), ctx)));
  SpectrumReport sp = check_spectrum(M.at("I21"), expect, ctx);
  INFO("deviation ", sp.max_deviation);
  CHECK(sp.passed);
}

TEST_CASE("so4_rep: so3 branching blocks are preserved") {
  QContext ctx(1.3);
  GenMatrixSet M = so4_rep(Half::whole(3), Half::whole(1), ctx);
  // I21, I32, I31 never connect different l
  for (const char* g : {"I21", "I32", "I31"}) {
    const Matrix& A = M.at(g);
    for (int i = 0; i < M.dim(); ++i)
      for (int j = 0; j < M.dim(); ++j)
        if (M.basis[i].a != M.basis[j].a) CHECK(std::abs(A(i, j)) == 0.0);
  }
  // each fixed-l block of I32 equals the so3_rep block for that l
  for (Half l = Half::whole(1); l <= Half::whole(3); l = l + 1) {
    GenMatrixSet S = so3_rep(l, ctx);
    std::vector<int> sel;
    for (int i = 0; i < M.dim(); ++i)
      if (M.basis[i].a == l) sel.push_back(i);
    REQUIRE(static_cast<int>(sel.size()) == S.dim());
    for (int a = 0; a < S.dim(); ++a)
      for (int b = 0; b < S.dim(); ++b)
        CHECK(std::abs(M.at("I32")(sel[a], sel[b]) - S.at("I32")(a, b)) <=
              1e-15);
  }
}

TEST_CASE("so4_rep: I41 satisfies both defining q-commutator chains") {
  for (double q : {1.3, 0.75}) {
    QContext ctx(q);
    GenMatrixSet M = so4_rep(Half::whole(2), Half::whole(1), ctx);
    Matrix via_I31 = q_commutator(M.at("I31"), M.at("I43"), ctx);
    Matrix via_I42 = q_commutator(M.at("I21"), M.at("I42"), ctx);
    CHECK((M.at("I41") - via_I31).norm() <= 1e-12);
    CHECK((M.at("I41") - via_I42).norm() <= 1e-12);
  }
}

TEST_CASE("so4_rep: half-integer series (r,s) = (3/2, 1/2)") {
  QContext ctx(1.5);
  GenMatrixSet M = so4_rep(Half::nearest(1.5), Half::nearest(0.5), ctx);
  CHECK(M.dim() == 6);  // (r+1)^2 - s^2 = 6.25 - 0.25
  check_all(check_serre(M.at("I32"), M.at("I43"), ctx));
  CHECK(skew_defect(M.at("I43")) <= 1e-13);
}
