#include "qorep/qarith.hpp"

#include <cmath>

namespace qorep {

Complex q_number(Complex z, const QContext& ctx) {
  return std::sinh(ctx.h * z) / std::sinh(ctx.h);
}

double q_number(double z, const QContext& ctx) {
  return std::sinh(ctx.h * z) / std::sinh(ctx.h);
}

Complex q_pow(Complex z, const QContext& ctx) {
  return std::exp(ctx.h * z);
}

double q_factorial(int n, const QContext& ctx) {
  if (n < 0) throw InvalidParameter("q_factorial: n must be >= 0");
  double p = 1.0;
  for (int j = 1; j <= n; ++j) p *= q_number(static_cast<double>(j), ctx);
  return p;
}

double q_double_factorial(int n, const QContext& ctx) {
  if (n < 0) throw InvalidParameter("q_double_factorial: n must be >= 0");
  double p = 1.0;
  for (int j = n; j >= 1; j -= 2) p *= q_number(static_cast<double>(j), ctx);
  return p;
}

Complex q_pochhammer(Complex a, double Q, int n) {
  if (n < 0) throw InvalidParameter("q_pochhammer: n must be >= 0");
  Complex p = 1.0;
  Complex f = 1.0;
  for (int j = 0; j < n; ++j) {
    p *= (1.0 - a * f);
    f *= Q;
  }
  return p;
}

namespace {

// If a == Q^{-N} for a nonnegative integer N (to relative tolerance), return
// N, else -1. Used both for termination detection and pole screening.
int pochhammer_zero_index(Complex a, double Q) {
  if (std::abs(a.imag()) > 1e-9 * (1.0 + std::abs(a))) return -1;
  double ar = a.real();
  if (ar <= 0.0) return -1;
  double N = -std::log(ar) / std::log(Q);
  double Nr = std::round(N);
  if (Nr < -0.5) return -1;
  if (std::abs(N - Nr) > 1e-6 * (1.0 + std::abs(N))) return -1;
  // confirm at full precision
  if (std::abs(ar - std::pow(Q, -Nr)) > 1e-9 * std::pow(Q, -Nr)) return -1;
  return static_cast<int>(Nr);
}

}  // namespace

Complex phi43(const std::array<Complex, 4>& num,
              const std::array<Complex, 3>& den, double Q, Complex z) {
  if (!(Q > 0.0) || Q == 1.0)
    throw InvalidParameter("phi43: Q must be positive and != 1");
  int N = -1;
  for (const Complex& a : num) {
    int k = pochhammer_zero_index(a, Q);
    if (k >= 0 && (N < 0 || k < N)) N = k;
  }
  if (N < 0)
    throw DivergentSeries("phi43: no numerator parameter of the form Q^{-N}");

  Complex sum = 1.0;   // j = 0 term
  Complex term = 1.0;
  Complex Qjm1 = 1.0;  // Q^{j-1} inside the loop
  for (int j = 1; j <= N; ++j) {
    // term_j / term_{j-1} = z * prod(1 - a Q^{j-1}) / ((1-Q^j) prod(1 - b Q^{j-1}))
    Complex numprod = z;
    for (const Complex& a : num) numprod *= (1.0 - a * Qjm1);
    term *= numprod;
    if (std::abs(term) == 0.0) break;  // a numerator Pochhammer died: all later terms vanish
    Complex base = (1.0 - Qjm1 * Q);   // (1 - Q^j)
    term /= base;
    for (const Complex& b : den) {
      Complex f = (1.0 - b * Qjm1);
      if (std::abs(f) < 1e-12 * (1.0 + std::abs(b * Qjm1)))
        throw PoleInDenominator(
            "phi43: denominator Pochhammer vanishes at a surviving term");
      term /= f;
    }
    sum += term;
    Qjm1 *= Q;
  }
  return sum;
}

Complex racah_poly(const RacahParams& p) {
  if (p.n < 0 || p.y < 0)
    throw InvalidParameter("racah_poly: n and y must be >= 0");
  const double Q = p.Q;
  std::array<Complex, 4> num = {
      std::pow(Q, -static_cast<double>(p.y)),
      p.gamma_p * p.delta_p * std::pow(Q, static_cast<double>(p.y) + 1.0),
      std::pow(Q, -static_cast<double>(p.n)),
      p.alpha * p.beta * std::pow(Q, static_cast<double>(p.n) + 1.0)};
  std::array<Complex, 3> den = {p.alpha * Q, p.beta * p.delta_p * Q,
                                p.gamma_p * Q};
  return phi43(num, den, Q, Q);
}

}  // namespace qorep
