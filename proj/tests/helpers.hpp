#pragma once

#include <random>

#include "acoint/montecarlo.hpp"
#include "acoint/varmodel.hpp"

namespace testing_support {

using acoint::Matrix;

inline Matrix gaussian_matrix(int rows, int cols, std::mt19937_64& rng, double sd = 1.0) {
  std::normal_distribution<double> nd(0.0, sd);
  Matrix m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = nd(rng);
  return m;
}

/// One draw of the bivariate VAR(2) design as a data set.
inline acoint::TimeSeriesMatrix design_sample(int r0, double gamma, acoint::Innovation inn, int T,
                                              std::uint64_t seed, int rep = 0) {
  acoint::DgpSpec d = acoint::DgpSpec::for_rank(r0, gamma, inn, T);
  d.seed = seed;
  return acoint::simulate_dgp(d, rep);
}

/// Random walk plus noise in p dimensions, K initial rows.
inline acoint::TimeSeriesMatrix random_walk(int p, int T, int K, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  Matrix e = gaussian_matrix(T + K, p, rng);
  Matrix x(T + K, p);
  x.row(0) = e.row(0);
  for (int t = 1; t < T + K; ++t) x.row(t) = x.row(t - 1) + e.row(t);
  return acoint::TimeSeriesMatrix::from_observations(x, K);
}

}  // namespace testing_support
