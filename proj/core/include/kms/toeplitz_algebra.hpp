#pragma once

#include <compare>
#include <map>
#include <string>
#include <string_view>

#include "kms/subinvariance.hpp"
#include "kms/torus_measure.hpp"

namespace kms {

/// The spanning element V_p U_n V_q^* of block B_m.
struct Word {
  IntVector p;  ///< in N^k
  IntVector n;  ///< in Z^d
  IntVector q;  ///< in N^k
  int level = 1;

  static Word identity(Dimensions dims, int level = 1);

  auto operator<=>(const Word&) const = default;
  bool operator==(const Word&) const = default;
};

std::string to_string(const Word& w);

/// Parses "V[p1,..,pk] U[n1,..,nd] V*[q1,..,qk] @ m". The "@ m" suffix is
/// optional (level 1). Throws WordParseError.
Word parse_word(std::string_view text);

/// Coefficients with modulus below this are dropped after every operation.
inline constexpr double kPruneThreshold = 1e-15;

/// Finite linear combination of words of one level.
class AlgebraElement {
 public:
  using Terms = std::map<Word, Complex>;

  AlgebraElement() = default;
  explicit AlgebraElement(int level) : level_(level) {}
  AlgebraElement(const Word& w, Complex c = 1.0);

  int level() const { return level_; }
  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  /// Adds c * w (w must share the element's level) and prunes.
  void add(const Word& w, Complex c);
  Complex coefficient(const Word& w) const;

  AlgebraElement& operator+=(const AlgebraElement& other);
  AlgebraElement& operator-=(const AlgebraElement& other);
  AlgebraElement& operator*=(Complex c);

 private:
  int level_ = 1;
  Terms terms_;
};

AlgebraElement operator+(AlgebraElement a, const AlgebraElement& b);
AlgebraElement operator-(AlgebraElement a, const AlgebraElement& b);
AlgebraElement operator*(Complex c, AlgebraElement a);

/// Largest coefficient modulus of a - b.
double max_coefficient_distance(const AlgebraElement& a, const AlgebraElement& b);

/// Product of two spanning words in normal form:
/// (p,n,q)(p',n',q') = e^{2 pi i ((q v p' - q).theta n + (q v p' - p').theta n')}
///                     (p + (q v p') - q, n + n', q' + (q v p') - p').
/// Returns the phase and writes the product word into `out`.
Complex multiply_words(const Word& a, const Word& b, const RealMatrix& theta, Word& out);

/// Bilinear extension of multiply_words; throws LevelMismatch.
AlgebraElement multiply(const AlgebraElement& a, const AlgebraElement& b, const RealMatrix& theta);

/// (p,n,q) -> (q,-n,p) with conjugated coefficients.
AlgebraElement adjoint(const AlgebraElement& a);

/// Scales each word by e^{i t (p-q).r}. Real t is the dynamics; t = i beta is
/// the analytic continuation used by the KMS condition.
AlgebraElement apply_dynamics(const AlgebraElement& a, Complex t, const RealVector& r);

/// phi_nu(V_p U_n V_q^*) = delta_{p,q} e^{-beta p.r} moment(nu, n), extended linearly.
Complex state_eval(const TorusMeasure& nu, const BlockParams& P, const AlgebraElement& a);

/// |phi_nu(ab) - phi_nu(b alpha_{i beta}(a))|.
double kms_residual(const TorusMeasure& nu, const BlockParams& P, const AlgebraElement& a, const AlgebraElement& b);

}  // namespace kms
