#include "kms/sampling.hpp"

namespace kms {

namespace {

IntVector random_ints(std::mt19937_64& rng, int size, int lo, int hi) {
  std::uniform_int_distribution<int> dist(lo, hi);
  IntVector out(static_cast<std::size_t>(size));
  for (auto& v : out) v = dist(rng);
  return out;
}

}  // namespace

Word random_word(std::mt19937_64& rng, Dimensions dims, int level, WordBounds bounds) {
  Word w;
  w.p = random_ints(rng, dims.k, 0, bounds.max_p);
  w.n = random_ints(rng, dims.d, -bounds.max_n, bounds.max_n);
  w.q = random_ints(rng, dims.k, 0, bounds.max_p);
  w.level = level;
  return w;
}

AlgebraElement random_element(std::mt19937_64& rng, Dimensions dims, int terms, int level, WordBounds bounds) {
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  AlgebraElement a(level);
  for (int i = 0; i < terms; ++i) a.add(random_word(rng, dims, level, bounds), Complex(coef(rng), coef(rng)));
  return a;
}

TorusMeasure random_probability_measure(std::mt19937_64& rng, int dim, int atoms) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<Atom> out;
  double total = 0.0;
  for (int i = 0; i < atoms; ++i) {
    RealVector x(dim);
    for (int j = 0; j < dim; ++j) x(j) = unit(rng);
    const double w = 0.1 + unit(rng);
    total += w;
    out.push_back(Atom{TorusPoint(x), w});
  }
  for (auto& a : out) a.weight /= total;
  return TorusMeasure::atomic(dim, std::move(out));
}

BlockParams random_block_params(std::mt19937_64& rng, Dimensions dims) {
  std::uniform_real_distribution<double> th(0.0, 2.0);
  std::uniform_real_distribution<double> rr(0.25, 2.0);
  std::uniform_real_distribution<double> bb(0.5, 2.0);
  BlockParams P;
  P.theta = RealMatrix(dims.k, dims.d);
  for (int j = 0; j < dims.k; ++j)
    for (int i = 0; i < dims.d; ++i) P.theta(j, i) = th(rng);
  P.r = RealVector(dims.k);
  for (int j = 0; j < dims.k; ++j) P.r(j) = rr(rng);
  P.beta = bb(rng);
  return P;
}

Scenario example_scenario_2x2(double beta, int depth) {
  RealMatrix theta1(2, 2);
  theta1 << 1.0, 0.5, 0.25, 2.0;
  RealVector r1(2);
  r1 << 1.0, 1.5;
  IntMatrix E(2, 2);
  E << 2, 0, 0, 3;
  const std::vector<IntVector> Ds(static_cast<std::size_t>(depth), IntVector{3, 2});
  const std::vector<IntMatrix> Es(static_cast<std::size_t>(depth), E);
  return derive_scenario(Dimensions{2, 2}, beta, theta1, r1, Ds, Es, depth);
}

}  // namespace kms
