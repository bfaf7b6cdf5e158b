#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "wsr/limits.hpp"
#include "wsr/multiindex.hpp"

namespace wsr {

using Complex = std::complex<double>;

/// Finitely supported Fourier coefficients f^(k) of a periodic function on [0,1]^d.
/// Exact zeros are never stored.
class CoefficientVector {
 public:
  explicit CoefficientVector(std::size_t dimension);
  /// Duplicate frequencies are summed; resulting zeros are dropped.
  CoefficientVector(std::size_t dimension, const std::vector<std::pair<MultiIndex, Complex>>& terms);

  /// Coefficients given on an index set, in its enumeration order.
  static CoefficientVector from_dense(const IndexSet& set, const std::vector<Complex>& values);

  std::size_t dimension() const { return dimension_; }
  std::size_t support_size() const { return terms_.size(); }
  bool empty() const { return terms_.empty(); }
  const std::map<MultiIndex, Complex>& terms() const { return terms_; }

  /// Zero for frequencies outside the support.
  Complex operator[](const MultiIndex& k) const;

  /// Values on `set` in enumeration order.
  std::vector<Complex> on(const IndexSet& set) const;

  /// Largest |k|_inf over the support (0 when empty).
  std::int64_t max_frequency() const;

  CoefficientVector scaled(Complex a) const;
  friend CoefficientVector operator+(const CoefficientVector& a, const CoefficientVector& b);
  friend CoefficientVector operator-(const CoefficientVector& a, const CoefficientVector& b);
  friend bool operator==(const CoefficientVector&, const CoefficientVector&) = default;

 private:
  std::size_t dimension_;
  std::map<MultiIndex, Complex> terms_;
};

enum class ClassKind { WienerBall, LogClass, MixedSobolev, Hoelder };

/// Constants of the Hoelder projection bound (c3 ln m)^d / m^alpha.
struct HoelderConstants {
  double c1 = 2.5;  // Lebesgue-constant factor, >= sup_{m>=2} L_m / ln m
  double c2 = 3.0;  // Jackson factor
  double c3() const;
};

struct ClassSpec {
  ClassKind kind = ClassKind::WienerBall;
  std::size_t dimension = 1;
  double smoothness = 1.0;  // MixedSobolev only, s > 1/2
  double alpha = 1.0;       // Hoelder only, 0 < alpha <= 1
  HoelderConstants hoelder;

  static ClassSpec wiener_ball(std::size_t d);
  static ClassSpec log_class(std::size_t d);
  static ClassSpec mixed_sobolev(std::size_t d, double s);
  static ClassSpec hoelder_class(std::size_t d, double alpha, HoelderConstants c = {});

  /// Throws PreconditionError if parameters are out of range.
  void validate() const;
  std::string name() const;
};

struct ConstraintValue {
  std::string name;
  double value;  // member iff value <= 1
};

struct MembershipReport {
  bool member = false;
  /// Set for the Hoelder class: only a sufficient coefficient condition was checked.
  bool sufficient_condition_only = false;
  std::vector<ConstraintValue> constraints;
  /// min over constraints of (1 - value).
  double slack() const;
};

/// Nonnegative amplitude modulus factor used by the class constraint for frequency k.
double class_weight(const ClassSpec& spec, const MultiIndex& k);

double wiener_norm(const CoefficientVector& c);

/// 2^(1-alpha) (2 pi |k|_2)^alpha: Hoelder-constant contribution of a unit-modulus character.
double hoelder_character_factor(double alpha, const MultiIndex& k);

/// `tol` absorbs rounding on extremal members (value 1 + 1e-15 counts as member).
MembershipReport membership(const ClassSpec& spec, const CoefficientVector& c, double tol = 1e-12);

/// Random extremal member: random support in [-max_freq, max_freq]^d, uniform phases,
/// moduli uniform in (0, 1], rescaled so the binding constraint equals 1.
CoefficientVector random_member(const ClassSpec& spec, std::size_t support_budget,
                                std::int64_t max_freq, std::uint64_t seed);

/// P_Lambda: restriction to the index set.
CoefficientVector project(const CoefficientVector& c, const IndexSet& set);

/// sum_{k not in Lambda} |c_k|, an upper bound on ||f - P_Lambda f||_inf.
double tail_wiener_norm(const CoefficientVector& c, const IndexSet& set);

/// Best s-term approximation error in the Wiener norm.
double sigma_s(const CoefficientVector& c, std::size_t s);

/// Riemann zeta for x > 1: direct summation with an Euler-Maclaurin tail.
double zeta(double x);

/// 1 + 2 zeta(2s) = sum_{k in Z} max(1, |k|)^(-2s).
double sobolev_sum_constant(double s);

/// Class-level upper bound on sup_f ||f - P_{[-m,m]^d} f||_inf. Nonincreasing in m.
double projection_error_bound(const ClassSpec& spec, std::int64_t m);

struct ClassBoundReport {
  std::int64_t m = 0;
  double projection_error_bound = 0.0;
  double log_cardinality = 0.0;
  /// Closed-form log N estimate for the class where one is available.
  std::optional<double> reference_log_cardinality;
  std::optional<bool> within_reference;
};

/// Smallest m with projection_error_bound(spec, m) <= eps, 0 < eps <= 1.
ClassBoundReport plan_truncation(const ClassSpec& spec, double eps, const Limits& limits = {});

/// Closed-form log N bound from the class analysis (LogClass: 2d/eps; MixedSobolev:
/// d/(2s-1) ln(d c_s^d eps^-2)); nullopt where the constants are not explicit.
std::optional<double> reference_log_cardinality(const ClassSpec& spec, double eps);

/// L1 norm over one period of the order-m Dirichlet kernel by composite midpoint
/// quadrature. Requires quadrature_points >= 64 m.
double lebesgue_constant(std::int64_t m, std::int64_t quadrature_points);

nlohmann::json to_json(const CoefficientVector& c);
CoefficientVector coefficient_vector_from_json(const nlohmann::json& j);

nlohmann::json to_json(const ClassSpec& spec);
ClassSpec class_spec_from_json(const nlohmann::json& j, std::size_t dimension);

}  // namespace wsr
