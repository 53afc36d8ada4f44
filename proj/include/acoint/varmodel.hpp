#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "acoint/error.hpp"

namespace acoint {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Deterministic terms of the VECM: (i) none, (ii) constant restricted to
/// the cointegrating space, (iii) linear trend restricted to the
/// cointegrating space plus an unrestricted constant.
enum class DeterministicCase { None, RestrictedConstant, RestrictedTrend };

const char* to_string(DeterministicCase det);
DeterministicCase parse_deterministic(const std::string& name);

/// Columns of D_t (entering through alpha rho').
int restricted_dim(DeterministicCase det);
/// Columns of d_t (entering through phi).
int unrestricted_dim(DeterministicCase det);

/// Observed levels X_1..X_T together with the fixed initial values.
///
/// Row t-1 of values() is X_t'. presample() holds X_{1-K}..X_0 in time order,
/// so its last row is X_0. Estimation at lag k only reads the last k rows.
class TimeSeriesMatrix {
 public:
  TimeSeriesMatrix() = default;
  TimeSeriesMatrix(Matrix values, Matrix presample,
                   std::vector<std::string> names = {});

  const Matrix& values() const { return values_; }
  const Matrix& presample() const { return presample_; }
  const std::vector<std::string>& names() const { return names_; }
  int p() const { return static_cast<int>(values_.cols()); }
  int T() const { return static_cast<int>(values_.rows()); }
  int presample_rows() const { return static_cast<int>(presample_.rows()); }

  /// X_t for t in [1 - presample_rows(), T].
  Eigen::RowVectorXd level(int t) const;

  /// Split a full observation block: the first n_presample rows become the
  /// initial values.
  static TimeSeriesMatrix from_observations(const Matrix& all, int n_presample,
                                            std::vector<std::string> names = {});

 private:
  Matrix values_;
  Matrix presample_;
  std::vector<std::string> names_;
};

/// Identifies one candidate model H_{k,r}.
struct VecmSpec {
  int p = 0;
  int k = 1;
  int r = 0;
  DeterministicCase det = DeterministicCase::None;
  int K = 1;

  void validate() const;
  /// Rows of the augmented cointegrating vector (p + dim D).
  int p1() const { return p + restricted_dim(det); }
  /// Columns of the short-run regressor block (p(k-1) + dim d).
  int z_cols() const { return p * (k - 1) + unrestricted_dim(det); }
};

/// Parameters of the VECM. beta is p x r (the X_{t-1} part only); rho is
/// dim(D) x r so that the augmented cointegrating matrix is [beta; rho].
struct VecmParams {
  Matrix alpha;
  Matrix beta;
  std::vector<Matrix> gamma;
  Matrix rho;
  Matrix phi;

  /// Zero-rank, zero-dynamics parameters of the right shape.
  static VecmParams zeros(const VecmSpec& spec);

  Matrix beta_augmented() const;
  /// [Gamma_1 : ... : Gamma_{k-1} : phi], the coefficient on z.
  Matrix psi() const;
  /// alpha [beta; rho]', the coefficient on the augmented X_{t-1}.
  Matrix pi_augmented() const;

  /// Inverse of psi()/beta_augmented(): rebuild from stacked blocks.
  static VecmParams from_blocks(const VecmSpec& spec, const Matrix& alpha,
                                const Matrix& beta_aug, const Matrix& psi);

  void check(const VecmSpec& spec) const;
};

/// Regression blocks of the VECM over t = 1..T.
struct LagDesign {
  Matrix dy;     ///< T x p, Delta X_t
  Matrix x_lag;  ///< T x (p + dim D), (X_{t-1}', D_t')
  Matrix z;      ///< T x (p(k-1) + dim d), (Delta X_{t-1}', ..., d_t')
  std::vector<int> t_index;
  int p = 0;
  int k = 1;
  DeterministicCase det = DeterministicCase::None;

  int T() const { return static_cast<int>(dy.rows()); }
  int p1() const { return static_cast<int>(x_lag.cols()); }
};

/// Minimum usable T for estimation with maximum lag K.
int minimum_sample(int p, int K);

LagDesign build_lag_design(const TimeSeriesMatrix& data, const VecmSpec& spec);

/// Forward recursion of the VECM driven by the given innovations. presample
/// must hold at least spec.k rows; it is copied into the result verbatim.
TimeSeriesMatrix simulate_vecm(const VecmParams& params, const VecmSpec& spec,
                               const Matrix& innovations,
                               const Matrix& presample);

/// Delta X_t - alpha beta~' X~_{t-1} - Psi z_t for every row of the design.
Matrix vecm_residuals(const LagDesign& design, const VecmParams& params);

struct I1Report {
  int unit_root_count = 0;
  double max_other_root_modulus = 0.0;
  int alpha_rank = 0;
  int beta_rank = 0;
  std::vector<double> companion_moduli;  ///< sorted descending
  bool roots_ok = false;
  bool rank_ok = false;
  bool pass() const { return roots_ok && rank_ok; }
};

/// Checks the I(1, r) conditions through the eigenvalues of the companion
/// matrix of the levels VAR: p - r eigenvalues equal to one and the rest
/// strictly inside the unit circle, with alpha and beta of full column rank.
I1Report check_i1_conditions(const VecmParams& params, const VecmSpec& spec,
                             double tol = 1e-8);

/// Levels-VAR coefficient matrices A_1..A_k implied by the VECM.
std::vector<Matrix> levels_coefficients(const VecmParams& params, int k);

}  // namespace acoint
