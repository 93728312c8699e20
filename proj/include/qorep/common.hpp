#pragma once
// Shared scalar types, tolerances, and error hierarchy.

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

namespace qorep {

using Complex = std::complex<double>;

// ---- error hierarchy ----------------------------------------------------
// Every thrown error derives from Error so callers can catch the library
// root; CLI maps parameter errors to exit code 2 and check failures to 1.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct InvalidParameter : Error { using Error::Error; };
struct DivergentSeries : Error { using Error::Error; };
struct PoleInDenominator : Error { using Error::Error; };
struct InvalidSpin : InvalidParameter { using InvalidParameter::InvalidParameter; };
struct InvalidHighestWeight : InvalidParameter { using InvalidParameter::InvalidParameter; };
struct OutOfRange : InvalidParameter { using InvalidParameter::InvalidParameter; };
struct NotUnitary : Error { using Error::Error; };
struct ParityMismatch : InvalidParameter { using InvalidParameter::InvalidParameter; };
struct TagConditionViolated : InvalidParameter { using InvalidParameter::InvalidParameter; };
struct WallTooCloseToWindow : InvalidParameter { using InvalidParameter::InvalidParameter; };
struct DimensionMismatch : InvalidParameter { using InvalidParameter::InvalidParameter; };
struct NotEquivalent : Error { using Error::Error; };
struct SingularIntertwiner : Error { using Error::Error; };
struct EquivalenceFailed : Error { using Error::Error; };
struct CertificationFailed : Error { using Error::Error; };

// ---- deformation context ------------------------------------------------
struct QContext {
  double q;
  double h;  // ln q, recomputed from q on construction
  double tol_rel = 1e-10;
  double tol_zero = 1e-12;

  explicit QContext(double q_, double tol_rel_ = 1e-10, double tol_zero_ = 1e-12)
      : q(q_), h(std::log(q_)), tol_rel(tol_rel_), tol_zero(tol_zero_) {
    if (!(q > 0.0) || q == 1.0)
      throw InvalidParameter("QContext: q must be positive and != 1");
    if (!(tol_zero > 0.0 && tol_zero <= tol_rel && tol_rel < 1.0))
      throw InvalidParameter("QContext: need 0 < tol_zero <= tol_rel < 1");
  }

  // Imaginary-axis geometry of [z]: zeros at i*pi*t/h, period 2*pi*i/h.
  // |h| keeps these positive for q < 1 as well.
  double im_half_period() const { return M_PI / std::abs(h); }   // pi/h
  double im_quarter() const { return M_PI / (2.0 * std::abs(h)); }  // pi/2h
};

// ---- exact half-integer labels ------------------------------------------
// Stored as twice the value so label arithmetic (interlacing, lattice
// membership, orderings) is exact integer arithmetic.
struct Half {
  int tw = 0;  // twice the value

  constexpr Half() = default;
  constexpr explicit Half(int twice) : tw(twice) {}
  static constexpr Half whole(int n) { return Half(2 * n); }
  static Half nearest(double v) {
    return Half(static_cast<int>(std::lround(2.0 * v)));
  }
  double val() const { return tw / 2.0; }
  bool is_integer() const { return tw % 2 == 0; }
  bool is_half_odd() const { return tw % 2 != 0; }

  friend constexpr Half operator+(Half a, Half b) { return Half(a.tw + b.tw); }
  friend constexpr Half operator-(Half a, Half b) { return Half(a.tw - b.tw); }
  friend constexpr Half operator-(Half a) { return Half(-a.tw); }
  friend constexpr bool operator==(Half a, Half b) { return a.tw == b.tw; }
  friend constexpr auto operator<=>(Half a, Half b) { return a.tw <=> b.tw; }
  Half abs() const { return Half(tw < 0 ? -tw : tw); }
};

inline Half operator+(Half a, int n) { return Half(a.tw + 2 * n); }
inline Half operator-(Half a, int n) { return Half(a.tw - 2 * n); }

}  // namespace qorep
