#pragma once

#include <iosfwd>
#include <vector>

#include "acoint/varmodel.hpp"

namespace acoint {

enum class Kernel { Gaussian, Epanechnikov };

const char* to_string(Kernel k);
Kernel parse_kernel(const std::string& name);

/// Smoothing kernel. Always two-sided: weights use leads and lags.
struct KernelSpec {
  Kernel kernel = Kernel::Gaussian;

  double operator()(double x) const;
};

/// Estimated covariance path Sigma_1..Sigma_T, with the per-t quantities the
/// weighted estimators need cached alongside.
struct VolatilityPath {
  std::vector<Matrix> sigmas;
  std::vector<Matrix> sqrts;      ///< lower Cholesky factors
  std::vector<Matrix> inverses;
  std::vector<double> log_dets;
  double bandwidth = 0.0;
  int ridge_repairs = 0;          ///< number of t where PD repair was applied

  int T() const { return static_cast<int>(sigmas.size()); }
  int p() const { return sigmas.empty() ? 0 : static_cast<int>(sigmas.front().rows()); }
  double sum_log_det() const;

  /// Sigma_t = I_p for all t (the standard, non-adaptive weighting).
  static VolatilityPath identity(int T, int p);
  /// Build from explicit covariance matrices; each must be SPD.
  static VolatilityPath from_sigmas(std::vector<Matrix> sigmas, double bandwidth = 0.0);
};

/// Residuals of an unrestricted levels VAR(K), t = 1..T, with or without
/// an intercept column.
Matrix levels_var_residuals(const TimeSeriesMatrix& data, int K, bool intercept = true);

/// Kernel weights K((t-s)/(T h)) for the given t (1-based), normalised to
/// sum to one. With leave_one_out the s = t weight is zeroed first.
Vector kernel_weights(int T, int t, double h, const KernelSpec& ks, bool leave_one_out = false);

VolatilityPath kernel_covariance_path(const Matrix& residuals, double h,
                                      const KernelSpec& ks = {});

/// Leave-one-out criterion sum_t || Sigma_t^{-t}(h) - e_t e_t' ||_F^2.
double cv_objective(const Matrix& residuals, double h, const KernelSpec& ks = {});

/// 15 log-spaced points on [0.02, 0.5].
std::vector<double> default_bandwidth_grid();

/// argmin of cv_objective over the grid; ties go to the smaller h.
double select_bandwidth(const Matrix& residuals, const KernelSpec& ks,
                        const std::vector<double>& grid);

/// Full pipeline: levels VAR(K) residuals, CV bandwidth, kernel path.
VolatilityPath estimate_volatility(const TimeSeriesMatrix& data, int K,
                                   const KernelSpec& ks = {},
                                   const std::vector<double>& grid = default_bandwidth_grid(),
                                   bool intercept = true);

/// CSV dump: t, bandwidth, then vech(Sigma_t) column by column.
void write_volatility_csv(std::ostream& out, const VolatilityPath& vol);

}  // namespace acoint
