#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "rumba/int_matrix.hpp"
#include "rumba/random.hpp"

namespace rumba {

/// Poisson variate generator for a fixed rate. Inversion by sequential search
/// below kInversionLimit, PTRS transformed rejection (Hormann 1993) above.
/// Construction precomputes the per-rate constants so repeated draws at the
/// same rate are cheap.
class PoissonSampler {
 public:
  static constexpr double kInversionLimit = 10.0;

  explicit PoissonSampler(double lambda = 0.0);

  double rate() const noexcept { return lambda_; }
  std::int64_t operator()(Rng& rng) const;

 private:
  std::int64_t inversion(Rng& rng) const;
  std::int64_t ptrs(Rng& rng) const;

  double lambda_ = 0.0;
  double exp_neg_ = 1.0;  // e^-lambda
  // PTRS constants
  double slam_ = 0, loglam_ = 0, b_ = 0, a_ = 0, inv_alpha_ = 0, vr_ = 0;
};

std::int64_t poisson_draw(double lambda, Rng& rng);

/// log(n!) for n >= 0; exact table for small n, Stirling series above.
double log_factorial(std::int64_t n);

struct RateVector {
  std::vector<double> lambda_plus;
  std::vector<double> lambda_minus;

  std::size_t size() const noexcept { return lambda_plus.size(); }
};

struct CoefficientDraw {
  IntVector y_plus;
  IntVector y_minus;
  IntVector y;  // y_plus - y_minus
};

/// Independent componentwise Poisson draws: for each k, Y+_k then Y-_k.
CoefficientDraw sample_coefficient_vector(const RateVector& rates, Rng& rng);

/// Gamma shape/rate parameters for the K positive and K negative Poisson
/// rates. Shapes are kept as prior + integer sufficient statistic so that
/// every update is exact and order-independent; alpha_plus()/beta_plus()
/// materialise the real-valued parameters.
class GammaParams {
 public:
  GammaParams() = default;
  GammaParams(std::vector<double> alpha0_plus, std::vector<double> alpha0_minus,
              std::vector<double> beta0_plus, std::vector<double> beta0_minus);

  /// alpha0 = `alpha0` and beta0 = `beta0` in every component.
  static GammaParams uniform(std::size_t k, double alpha0, double beta0);

  std::size_t size() const noexcept { return alpha0_plus_.size(); }

  std::vector<double> alpha_plus() const;
  std::vector<double> alpha_minus() const;
  std::vector<double> beta_plus() const;
  std::vector<double> beta_minus() const;

  /// lambda = alpha / beta elementwise.
  RateVector rates() const;

  const IntVector& sum_plus() const noexcept { return sum_plus_; }
  const IntVector& sum_minus() const noexcept { return sum_minus_; }
  std::int64_t accepted() const noexcept { return accepted_; }

  /// Parameters with the accumulated statistics cleared (back to the prior).
  GammaParams prior() const;

  /// In-place conjugate update by one batch of summed statistics.
  void absorb(std::span<const std::int64_t> sum_plus, std::span<const std::int64_t> sum_minus,
              std::int64_t count);

  friend bool operator==(const GammaParams&, const GammaParams&) = default;

 private:
  std::vector<double> alpha0_plus_, alpha0_minus_, beta0_plus_, beta0_minus_;
  IntVector sum_plus_, sum_minus_;
  std::int64_t accepted_ = 0;
};

using AcceptedPair = std::pair<IntVector, IntVector>;  // (Y+, Y-)

/// alpha+- += sum of accepted Y+-, beta+- += number of accepted pairs.
GammaParams posterior_update(const GammaParams& params,
                             std::span<const AcceptedPair> accepted);

/// Modified Bessel function of the first kind, integer order, by its power
/// series. I_{-n} = I_n.
double bessel_i(std::int64_t order, double z);

/// P(Y+ - Y- = y) for independent Poisson(lambda_plus), Poisson(lambda_minus).
double skellam_pmf(std::int64_t y, double lambda_plus, double lambda_minus);

struct SkellamPartials {
  double d_lambda_plus;
  double d_lambda_minus;
};

/// Closed-form partial derivatives of skellam_pmf in each rate. Both rates
/// must be positive.
SkellamPartials skellam_pmf_partials(std::int64_t y, double lambda_plus, double lambda_minus);

}  // namespace rumba
