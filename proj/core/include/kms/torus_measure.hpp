#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "kms/linalg.hpp"

namespace kms {

/// A point of S^d = R^d / Z^d, stored as its representative in [0,1)^d.
class TorusPoint {
 public:
  TorusPoint() = default;
  explicit TorusPoint(const RealVector& coords) : coords_(reduce_mod1(coords)) {}
  TorusPoint(std::initializer_list<double> coords);

  const RealVector& coords() const { return coords_; }
  int dim() const { return static_cast<int>(coords_.size()); }

 private:
  RealVector coords_;
};

using MomentIndex = IntVector;
using MomentMultiplier = std::function<Complex(const MomentIndex&)>;

struct Atom {
  TorusPoint x;
  Complex weight;
};

/// Finite (possibly signed or complex) measure on S^d, represented by its
/// Fourier moments  moment(n) = \int e^{2 pi i x.n} dmu(x).
///
/// Values are immutable and cheap to copy; derived measures share their base.
class TorusMeasure {
 public:
  struct Atomic {
    std::vector<Atom> atoms;
  };
  struct FourierTable {
    int radius = 0;                ///< moments stored for |n_i| <= radius
    std::vector<Complex> moments;  ///< row-major over the box, axis 0 slowest
  };
  struct Multiplied;
  struct Pushforward;

  TorusMeasure() = default;

  static TorusMeasure atomic(int dim, std::vector<Atom> atoms);
  static TorusMeasure point_mass(const TorusPoint& x, Complex weight = 1.0);
  /// Table of moments over the box |n_i| <= radius; must be Hermitian.
  static TorusMeasure fourier_table(int dim, int radius, std::vector<Complex> moments);
  /// Builds a table by evaluating `source` over the box.
  static TorusMeasure tabulate(const TorusMeasure& source, int radius);
  /// moment(result, n) = multiplier(n) * moment(base, n).
  static TorusMeasure multiplied(const TorusMeasure& base, MomentMultiplier multiplier, std::string tag);
  /// Normalised Lebesgue measure.
  static TorusMeasure uniform(int dim);

  int dim() const { return dim_; }
  bool empty() const { return rep_ == nullptr; }

  Complex moment(const MomentIndex& n) const;
  /// Real part of moment(0).
  double mass() const;
  /// Largest r such that every moment with |n_i| <= r is available; nullopt
  /// when all moments are.
  std::optional<int> moment_radius() const;

  /// Atoms when the representation is atomic, otherwise nullptr.
  const Atomic* as_atomic() const;
  const FourierTable* as_table() const;
  /// Tag of the outermost multiplier, or an empty string.
  std::string tag() const;
  std::string describe() const;

 private:
  using Rep = std::variant<Atomic, FourierTable, std::shared_ptr<const Multiplied>,
                           std::shared_ptr<const Pushforward>>;
  TorusMeasure(int dim, std::shared_ptr<const Rep> rep) : dim_(dim), rep_(std::move(rep)) {}

  friend TorusMeasure pushforward_dual(const TorusMeasure& mu, const IntMatrix& E);

  int dim_ = 0;
  std::shared_ptr<const Rep> rep_;
};

struct TorusMeasure::Multiplied {
  TorusMeasure base;
  MomentMultiplier multiplier;
  std::string tag;
};

struct TorusMeasure::Pushforward {
  TorusMeasure base;
  IntMatrix E;  ///< pushforward along x -> E^T x, so moment(n) = moment(base, E n)
};

/// Index of n within a FourierTable box, or nullopt when outside.
std::optional<std::size_t> box_offset(const MomentIndex& n, int radius);
/// All n with |n_i| <= radius, in table order.
std::vector<MomentIndex> box_indices(int dim, int radius);

/// R_{y*} mu: moment(n) picks up e^{2 pi i y.n}. Atomic measures are shifted
/// atom by atom; other representations get a moment multiplier.
TorusMeasure translate(const TorusMeasure& mu, const RealVector& y);

/// E^T_* mu, the pushforward under x -> E^T x mod Z^d; moment(n) = moment(mu, E n).
TorusMeasure pushforward_dual(const TorusMeasure& mu, const IntMatrix& E);

/// c * mu.
TorusMeasure scale(const TorusMeasure& mu, Complex c);

enum class PositivityCheck { FejerGrid, MomentMatrix };

struct PositivityWitness {
  PositivityCheck check = PositivityCheck::FejerGrid;
  RealVector point;              ///< grid point (FejerGrid)
  double value = 0.0;            ///< density value or smallest eigenvalue
  Eigen::VectorXcd eigenvector;  ///< (MomentMatrix)
};

struct PositivityVerdict {
  enum class Kind { Positive, NotPositive, Inconclusive };
  Kind kind = Kind::Inconclusive;
  double min_density = 0.0;
  double min_eigenvalue = 0.0;
  std::optional<PositivityWitness> witness;

  bool positive() const { return kind == Kind::Positive; }
};

struct PositivityOptions {
  int grid = 0;  ///< points per axis; 0 picks 256 / 64 / 16 for d = 1 / 2 / >= 3
  double tol = 1e-8;
  int box = 5;  ///< Fejer order and moment-matrix box radius
};

int default_positivity_grid(int dim);

/// Necessary-condition certificate of nonnegativity: the Fejer mean of order
/// `box` sampled on a uniform grid, and the smallest eigenvalue of the
/// multilevel Toeplitz matrix T[n, n'] = moment(n - n') over [0, box]^d.
/// Either dropping below -tol yields NotPositive with a witness. The box is
/// clamped to moment_radius() for measures built from finite tables.
PositivityVerdict positivity_test(const TorusMeasure& lambda, const PositivityOptions& options = {});
PositivityVerdict positivity_test(const TorusMeasure& lambda, int grid, double tol);

}  // namespace kms
