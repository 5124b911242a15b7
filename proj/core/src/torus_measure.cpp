#include "kms/torus_measure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "kms/errors.hpp"

namespace kms {

TorusPoint::TorusPoint(std::initializer_list<double> coords) {
  RealVector v(static_cast<Eigen::Index>(coords.size()));
  Eigen::Index i = 0;
  for (double c : coords) v(i++) = c;
  coords_ = reduce_mod1(v);
}

std::optional<std::size_t> box_offset(const MomentIndex& n, int radius) {
  std::size_t offset = 0;
  const auto side = static_cast<std::size_t>(2 * radius + 1);
  for (auto ni : n) {
    if (ni < -radius || ni > radius) return std::nullopt;
    offset = offset * side + static_cast<std::size_t>(ni + radius);
  }
  return offset;
}

std::vector<MomentIndex> box_indices(int dim, int radius) {
  std::vector<MomentIndex> out;
  MomentIndex n(static_cast<std::size_t>(dim), -radius);
  while (true) {
    out.push_back(n);
    int axis = dim - 1;
    while (axis >= 0 && n[static_cast<std::size_t>(axis)] == radius) {
      n[static_cast<std::size_t>(axis)] = -radius;
      --axis;
    }
    if (axis < 0) break;
    ++n[static_cast<std::size_t>(axis)];
  }
  return out;
}

TorusMeasure TorusMeasure::atomic(int dim, std::vector<Atom> atoms) {
  for (const auto& a : atoms) {
    if (a.x.dim() != dim) raise(Errc::InvalidArgument, "atom dimension differs from measure dimension");
  }
  return TorusMeasure(dim, std::make_shared<const Rep>(Atomic{std::move(atoms)}));
}

TorusMeasure TorusMeasure::point_mass(const TorusPoint& x, Complex weight) {
  return atomic(x.dim(), {Atom{x, weight}});
}

TorusMeasure TorusMeasure::fourier_table(int dim, int radius, std::vector<Complex> moments) {
  if (radius < 0) raise(Errc::InvalidArgument, "negative table radius");
  std::size_t expected = 1;
  for (int i = 0; i < dim; ++i) expected *= static_cast<std::size_t>(2 * radius + 1);
  if (moments.size() != expected) raise(Errc::InvalidArgument, "table size does not match box");
  const auto indices = box_indices(dim, radius);
  for (const auto& n : indices) {
    const Complex a = moments[*box_offset(n, radius)];
    const Complex b = moments[*box_offset(negate(n), radius)];
    if (std::abs(a - std::conj(b)) > 1e-12 * std::max(1.0, std::abs(a))) {
      raise(Errc::InvalidArgument, "moment table is not Hermitian");
    }
  }
  return TorusMeasure(dim, std::make_shared<const Rep>(FourierTable{radius, std::move(moments)}));
}

TorusMeasure TorusMeasure::tabulate(const TorusMeasure& source, int radius) {
  const auto indices = box_indices(source.dim(), radius);
  std::vector<Complex> moments;
  moments.reserve(indices.size());
  for (const auto& n : indices) moments.push_back(source.moment(n));
  return TorusMeasure(source.dim(), std::make_shared<const Rep>(FourierTable{radius, std::move(moments)}));
}

TorusMeasure TorusMeasure::multiplied(const TorusMeasure& base, MomentMultiplier multiplier, std::string tag) {
  if (base.empty()) raise(Errc::InvalidArgument, "multiplied: empty base measure");
  auto m = std::make_shared<const Multiplied>(Multiplied{base, std::move(multiplier), std::move(tag)});
  return TorusMeasure(base.dim(), std::make_shared<const Rep>(std::move(m)));
}

TorusMeasure TorusMeasure::uniform(int dim) {
  RealVector origin = RealVector::Zero(dim);
  return multiplied(point_mass(TorusPoint(origin)),
                    [](const MomentIndex& n) { return is_zero(n) ? Complex(1.0) : Complex(0.0); }, "lebesgue");
}

Complex TorusMeasure::moment(const MomentIndex& n) const {
  if (empty()) raise(Errc::InvalidArgument, "moment of an empty measure");
  if (static_cast<int>(n.size()) != dim_) raise(Errc::InvalidArgument, "moment index has wrong dimension");
  struct Visitor {
    const MomentIndex& n;
    Complex operator()(const Atomic& a) const {
      Complex sum = 0.0;
      for (const auto& atom : a.atoms) {
        double t = 0.0;
        for (std::size_t i = 0; i < n.size(); ++i) {
          t += atom.x.coords()(static_cast<Eigen::Index>(i)) * static_cast<double>(n[i]);
        }
        sum += atom.weight * character(t);
      }
      return sum;
    }
    Complex operator()(const FourierTable& t) const {
      const auto offset = box_offset(n, t.radius);
      if (!offset) {
        std::ostringstream os;
        os << "index outside table box of radius " << t.radius;
        raise(Errc::OutOfBox, os.str());
      }
      return t.moments[*offset];
    }
    Complex operator()(const std::shared_ptr<const Multiplied>& m) const {
      const Complex factor = m->multiplier(n);
      if (factor == Complex(0.0)) return 0.0;
      return factor * m->base.moment(n);
    }
    Complex operator()(const std::shared_ptr<const Pushforward>& p) const {
      return p->base.moment(multiply(p->E, n));
    }
  };
  return std::visit(Visitor{n}, *rep_);
}

double TorusMeasure::mass() const { return moment(MomentIndex(static_cast<std::size_t>(dim_), 0)).real(); }

std::optional<int> TorusMeasure::moment_radius() const {
  if (empty()) return std::nullopt;
  struct Visitor {
    std::optional<int> operator()(const Atomic&) const { return std::nullopt; }
    std::optional<int> operator()(const FourierTable& t) const { return t.radius; }
    std::optional<int> operator()(const std::shared_ptr<const Multiplied>& m) const { return m->base.moment_radius(); }
    std::optional<int> operator()(const std::shared_ptr<const Pushforward>& p) const {
      const auto base = p->base.moment_radius();
      if (!base) return std::nullopt;
      // |(E n)_i| <= (max absolute row sum of E) * max_i |n_i|.
      const std::int64_t row = p->E.cwiseAbs().rowwise().sum().maxCoeff();
      return static_cast<int>(*base / std::max<std::int64_t>(row, 1));
    }
  };
  return std::visit(Visitor{}, *rep_);
}

const TorusMeasure::Atomic* TorusMeasure::as_atomic() const {
  return rep_ ? std::get_if<Atomic>(rep_.get()) : nullptr;
}

const TorusMeasure::FourierTable* TorusMeasure::as_table() const {
  return rep_ ? std::get_if<FourierTable>(rep_.get()) : nullptr;
}

std::string TorusMeasure::tag() const {
  if (!rep_) return {};
  if (const auto* m = std::get_if<std::shared_ptr<const Multiplied>>(rep_.get())) return (*m)->tag;
  return {};
}

std::string TorusMeasure::describe() const {
  if (!rep_) return "empty";
  struct Visitor {
    std::string operator()(const Atomic& a) const { return "atomic(" + std::to_string(a.atoms.size()) + ")"; }
    std::string operator()(const FourierTable& t) const { return "table(radius " + std::to_string(t.radius) + ")"; }
    std::string operator()(const std::shared_ptr<const Multiplied>& m) const {
      return m->tag + "[" + m->base.describe() + "]";
    }
    std::string operator()(const std::shared_ptr<const Pushforward>& p) const {
      return "pushforward[" + p->base.describe() + "]";
    }
  };
  return std::visit(Visitor{}, *rep_);
}

TorusMeasure translate(const TorusMeasure& mu, const RealVector& y) {
  if (y.size() != mu.dim()) raise(Errc::InvalidArgument, "translation vector has wrong dimension");
  if (const auto* a = mu.as_atomic()) {
    std::vector<Atom> shifted;
    shifted.reserve(a->atoms.size());
    for (const auto& atom : a->atoms) shifted.push_back({TorusPoint(RealVector(atom.x.coords() + y)), atom.weight});
    return TorusMeasure::atomic(mu.dim(), std::move(shifted));
  }
  return TorusMeasure::multiplied(
      mu, [y](const MomentIndex& n) { return character(dot(n, y)); }, "translate");
}

TorusMeasure pushforward_dual(const TorusMeasure& mu, const IntMatrix& E) {
  if (E.rows() != mu.dim() || E.cols() != mu.dim()) raise(Errc::InvalidArgument, "E has wrong dimension");
  if (determinant(E) == 0) raise(Errc::SingularMatrix, "pushforward along a singular matrix");
  if (const auto* a = mu.as_atomic()) {
    const RealMatrix Et = E.transpose().cast<double>();
    std::vector<Atom> mapped;
    mapped.reserve(a->atoms.size());
    for (const auto& atom : a->atoms) mapped.push_back({TorusPoint(RealVector(Et * atom.x.coords())), atom.weight});
    return TorusMeasure::atomic(mu.dim(), std::move(mapped));
  }
  auto p = std::make_shared<const TorusMeasure::Pushforward>(TorusMeasure::Pushforward{mu, E});
  return TorusMeasure(mu.dim(), std::make_shared<const TorusMeasure::Rep>(std::move(p)));
}

TorusMeasure scale(const TorusMeasure& mu, Complex c) {
  if (const auto* a = mu.as_atomic()) {
    std::vector<Atom> atoms = a->atoms;
    for (auto& atom : atoms) atom.weight *= c;
    return TorusMeasure::atomic(mu.dim(), std::move(atoms));
  }
  return TorusMeasure::multiplied(
      mu, [c](const MomentIndex&) { return c; }, "scale");
}

int default_positivity_grid(int dim) {
  if (dim <= 1) return 256;
  if (dim == 2) return 64;
  return 16;
}

PositivityVerdict positivity_test(const TorusMeasure& lambda, int grid, double tol) {
  PositivityOptions opts;
  opts.grid = grid;
  opts.tol = tol;
  return positivity_test(lambda, opts);
}

PositivityVerdict positivity_test(const TorusMeasure& lambda, const PositivityOptions& options) {
  const int d = lambda.dim();
  const auto radius = lambda.moment_radius();
  const int N = radius ? std::min(options.box, *radius) : options.box;
  const int grid = options.grid > 0 ? options.grid : default_positivity_grid(d);
  if (N < 0) raise(Errc::InvalidArgument, "negative positivity box");

  const auto indices = box_indices(d, N);
  std::vector<Complex> moments(indices.size());
  for (std::size_t i = 0; i < indices.size(); ++i) moments[i] = lambda.moment(indices[i]);

  PositivityVerdict verdict;

  // Fejer mean on the grid. Per-axis tables of e^{-2 pi i x n} keep the
  // inner loop to multiplications.
  const auto side = static_cast<std::size_t>(2 * N + 1);
  std::vector<std::vector<Complex>> phase(static_cast<std::size_t>(grid), std::vector<Complex>(side));
  for (int g = 0; g < grid; ++g) {
    const double x = static_cast<double>(g) / grid;
    for (int n = -N; n <= N; ++n) phase[static_cast<std::size_t>(g)][static_cast<std::size_t>(n + N)] = character(-x * n);
  }
  std::vector<Complex> weighted(indices.size());
  for (std::size_t i = 0; i < indices.size(); ++i) {
    double w = 1.0;
    for (auto ni : indices[i]) w *= 1.0 - static_cast<double>(std::abs(ni)) / (N + 1);
    weighted[i] = w * moments[i];
  }
  double min_density = std::numeric_limits<double>::infinity();
  std::vector<int> argmin(static_cast<std::size_t>(d), 0);
  std::vector<int> g(static_cast<std::size_t>(d), 0);
  while (true) {
    Complex f = 0.0;
    for (std::size_t i = 0; i < indices.size(); ++i) {
      Complex term = weighted[i];
      for (int a = 0; a < d; ++a) {
        term *= phase[static_cast<std::size_t>(g[static_cast<std::size_t>(a)])]
                     [static_cast<std::size_t>(indices[i][static_cast<std::size_t>(a)] + N)];
      }
      f += term;
    }
    if (f.real() < min_density) {
      min_density = f.real();
      argmin = g;
    }
    int axis = d - 1;
    while (axis >= 0 && g[static_cast<std::size_t>(axis)] == grid - 1) {
      g[static_cast<std::size_t>(axis)] = 0;
      --axis;
    }
    if (axis < 0) break;
    ++g[static_cast<std::size_t>(axis)];
  }
  verdict.min_density = min_density;

  // Multilevel Toeplitz moment matrix over [0, N]^d.
  const auto corner = box_indices(d, N);
  std::vector<MomentIndex> nonneg;
  for (const auto& n : corner) {
    if (is_nonnegative(n)) nonneg.push_back(n);
  }
  const auto dimT = static_cast<Eigen::Index>(nonneg.size());
  Eigen::MatrixXcd T(dimT, dimT);
  for (Eigen::Index a = 0; a < dimT; ++a) {
    for (Eigen::Index b = 0; b < dimT; ++b) {
      const auto diff = subtract(nonneg[static_cast<std::size_t>(a)], nonneg[static_cast<std::size_t>(b)]);
      T(a, b) = moments[*box_offset(diff, N)];
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(T);
  verdict.min_eigenvalue = solver.eigenvalues()(0);

  if (min_density < -options.tol) {
    PositivityWitness w;
    w.check = PositivityCheck::FejerGrid;
    w.point = RealVector(d);
    for (int a = 0; a < d; ++a) w.point(a) = static_cast<double>(argmin[static_cast<std::size_t>(a)]) / grid;
    w.value = min_density;
    verdict.kind = PositivityVerdict::Kind::NotPositive;
    verdict.witness = w;
  } else if (verdict.min_eigenvalue < -options.tol) {
    PositivityWitness w;
    w.check = PositivityCheck::MomentMatrix;
    w.value = verdict.min_eigenvalue;
    w.eigenvector = solver.eigenvectors().col(0);
    verdict.kind = PositivityVerdict::Kind::NotPositive;
    verdict.witness = w;
  } else {
    verdict.kind = PositivityVerdict::Kind::Positive;
  }
  return verdict;
}

}  // namespace kms
