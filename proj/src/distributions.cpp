#include "rumba/distributions.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "rumba/checked.hpp"
#include "rumba/error.hpp"

namespace rumba {

namespace {

void check_rate(double lambda, const char* op) {
  if (!std::isfinite(lambda) || lambda < 0.0)
    throw InputError(std::string(op) + ": rate must be finite and nonnegative, got " +
                     std::to_string(lambda));
}

constexpr std::size_t kLogFactTable = 256;

const std::array<double, kLogFactTable>& log_fact_table() {
  static const auto table = [] {
    std::array<double, kLogFactTable> t{};
    t[0] = 0.0;
    for (std::size_t i = 1; i < kLogFactTable; ++i)
      t[i] = t[i - 1] + std::log(static_cast<double>(i));
    return t;
  }();
  return table;
}

}  // namespace

double log_factorial(std::int64_t n) {
  if (n < 0) throw InputError("log_factorial of a negative number");
  if (static_cast<std::size_t>(n) < kLogFactTable) return log_fact_table()[n];
  // Stirling series for log Gamma(n + 1).
  const double x = static_cast<double>(n) + 1.0;
  const double inv = 1.0 / x;
  const double inv2 = inv * inv;
  return (x - 0.5) * std::log(x) - x + 0.5 * std::log(2.0 * std::numbers::pi) +
         inv * (1.0 / 12.0 - inv2 * (1.0 / 360.0 - inv2 * (1.0 / 1260.0)));
}

PoissonSampler::PoissonSampler(double lambda) : lambda_(lambda) {
  check_rate(lambda, "poisson");
  if (lambda_ < kInversionLimit) {
    exp_neg_ = std::exp(-lambda_);
  } else {
    slam_ = std::sqrt(lambda_);
    loglam_ = std::log(lambda_);
    b_ = 0.931 + 2.53 * slam_;
    a_ = -0.059 + 0.02483 * b_;
    inv_alpha_ = 1.1239 + 1.1328 / (b_ - 3.4);
    vr_ = 0.9277 - 3.6224 / (b_ - 2.0);
  }
}

std::int64_t PoissonSampler::operator()(Rng& rng) const {
  if (lambda_ == 0.0) return 0;
  return lambda_ < kInversionLimit ? inversion(rng) : ptrs(rng);
}

std::int64_t PoissonSampler::inversion(Rng& rng) const {
  // Past this many terms the remaining tail mass is below double resolution;
  // reaching it means u fell into the rounding gap near 1, so redraw.
  const auto cap = static_cast<std::int64_t>(lambda_ + 20.0 * std::sqrt(lambda_) + 40.0);
  for (;;) {
    const double u = rng.uniform();
    double p = exp_neg_;
    double cdf = p;
    std::int64_t k = 0;
    while (u >= cdf && k < cap) {
      ++k;
      p *= lambda_ / static_cast<double>(k);
      cdf += p;
    }
    if (k < cap) return k;
  }
}

std::int64_t PoissonSampler::ptrs(Rng& rng) const {
  for (;;) {
    const double u = rng.uniform() - 0.5;
    const double v = rng.uniform();
    const double us = 0.5 - std::fabs(u);
    const auto k = static_cast<std::int64_t>(std::floor((2.0 * a_ / us + b_) * u + lambda_ + 0.43));
    if (us >= 0.07 && v <= vr_) return k;
    if (k < 0 || (us < 0.013 && v > us)) continue;
    if (std::log(v) + std::log(inv_alpha_) - std::log(a_ / (us * us) + b_) <=
        -lambda_ + static_cast<double>(k) * loglam_ - log_factorial(k))
      return k;
  }
}

std::int64_t poisson_draw(double lambda, Rng& rng) { return PoissonSampler(lambda)(rng); }

CoefficientDraw sample_coefficient_vector(const RateVector& rates, Rng& rng) {
  const std::size_t k = rates.size();
  if (rates.lambda_minus.size() != k) throw InputError("rate vector length mismatch");
  CoefficientDraw d{IntVector(k), IntVector(k), IntVector(k)};
  for (std::size_t i = 0; i < k; ++i) {
    d.y_plus[i] = poisson_draw(rates.lambda_plus[i], rng);
    d.y_minus[i] = poisson_draw(rates.lambda_minus[i], rng);
    d.y[i] = d.y_plus[i] - d.y_minus[i];
  }
  return d;
}

GammaParams::GammaParams(std::vector<double> alpha0_plus, std::vector<double> alpha0_minus,
                         std::vector<double> beta0_plus, std::vector<double> beta0_minus)
    : alpha0_plus_(std::move(alpha0_plus)),
      alpha0_minus_(std::move(alpha0_minus)),
      beta0_plus_(std::move(beta0_plus)),
      beta0_minus_(std::move(beta0_minus)) {
  const std::size_t k = alpha0_plus_.size();
  if (alpha0_minus_.size() != k || beta0_plus_.size() != k || beta0_minus_.size() != k)
    throw InputError("gamma parameter vectors must all have length " + std::to_string(k));
  for (std::size_t i = 0; i < k; ++i) {
    for (double a : {alpha0_plus_[i], alpha0_minus_[i]})
      if (!std::isfinite(a) || a < 0.0)
        throw InputError("gamma shape must be finite and nonnegative");
    for (double b : {beta0_plus_[i], beta0_minus_[i]})
      if (!std::isfinite(b) || b <= 0.0)
        throw InputError("gamma rate must be finite and positive");
  }
  sum_plus_.assign(k, 0);
  sum_minus_.assign(k, 0);
}

GammaParams GammaParams::uniform(std::size_t k, double alpha0, double beta0) {
  return GammaParams(std::vector<double>(k, alpha0), std::vector<double>(k, alpha0),
                     std::vector<double>(k, beta0), std::vector<double>(k, beta0));
}

namespace {

std::vector<double> shifted(const std::vector<double>& base, const IntVector& add) {
  std::vector<double> out(base.size());
  for (std::size_t i = 0; i < base.size(); ++i)
    out[i] = base[i] + static_cast<double>(add[i]);
  return out;
}

std::vector<double> shifted(const std::vector<double>& base, std::int64_t add) {
  std::vector<double> out(base.size());
  for (std::size_t i = 0; i < base.size(); ++i) out[i] = base[i] + static_cast<double>(add);
  return out;
}

}  // namespace

std::vector<double> GammaParams::alpha_plus() const { return shifted(alpha0_plus_, sum_plus_); }
std::vector<double> GammaParams::alpha_minus() const {
  return shifted(alpha0_minus_, sum_minus_);
}
std::vector<double> GammaParams::beta_plus() const { return shifted(beta0_plus_, accepted_); }
std::vector<double> GammaParams::beta_minus() const { return shifted(beta0_minus_, accepted_); }

RateVector GammaParams::rates() const {
  RateVector r{alpha_plus(), alpha_minus()};
  const auto bp = beta_plus();
  const auto bm = beta_minus();
  for (std::size_t i = 0; i < size(); ++i) {
    r.lambda_plus[i] /= bp[i];
    r.lambda_minus[i] /= bm[i];
  }
  return r;
}

GammaParams GammaParams::prior() const {
  return GammaParams(alpha0_plus_, alpha0_minus_, beta0_plus_, beta0_minus_);
}

void GammaParams::absorb(std::span<const std::int64_t> sum_plus,
                         std::span<const std::int64_t> sum_minus, std::int64_t count) {
  if (sum_plus.size() != size() || sum_minus.size() != size())
    throw InputError("posterior update length mismatch: expected " + std::to_string(size()));
  if (count < 0) throw InputError("negative accepted count");
  for (std::size_t i = 0; i < size(); ++i) {
    if (sum_plus[i] < 0 || sum_minus[i] < 0)
      throw InputError("posterior update with negative Poisson counts");
    sum_plus_[i] = checked::add(sum_plus_[i], sum_plus[i], "posterior_update");
    sum_minus_[i] = checked::add(sum_minus_[i], sum_minus[i], "posterior_update");
  }
  accepted_ = checked::add(accepted_, count, "posterior_update");
}

GammaParams posterior_update(const GammaParams& params,
                             std::span<const AcceptedPair> accepted) {
  const std::size_t k = params.size();
  IntVector sp(k, 0), sm(k, 0);
  for (const auto& [yp, ym] : accepted) {
    if (yp.size() != k || ym.size() != k)
      throw InputError("accepted coefficient vector has length " +
                       std::to_string(yp.size()) + ", expected " + std::to_string(k));
    for (std::size_t i = 0; i < k; ++i) {
      sp[i] = checked::add(sp[i], yp[i], "posterior_update");
      sm[i] = checked::add(sm[i], ym[i], "posterior_update");
    }
  }
  GammaParams out = params;
  out.absorb(sp, sm, static_cast<std::int64_t>(accepted.size()));
  return out;
}

double bessel_i(std::int64_t order, double z) {
  if (!std::isfinite(z)) throw InputError("bessel_i: non-finite argument");
  const std::int64_t n = order < 0 ? -order : order;
  if (z == 0.0) return n == 0 ? 1.0 : 0.0;
  const double half = 0.5 * std::fabs(z);
  const double q = half * half;
  // Leading term (z/2)^n / n!, then t_{m+1} = t_m * (z/2)^2 / ((m+1)(m+1+n)).
  double term = std::exp(static_cast<double>(n) * std::log(half) - log_factorial(n));
  double sum = term;
  for (std::int64_t m = 0;; ++m) {
    term *= q / (static_cast<double>(m + 1) * static_cast<double>(m + 1 + n));
    sum += term;
    if (term <= 1e-16 * sum) break;
  }
  // Odd orders are odd functions of z.
  if (z < 0.0 && (n % 2 == 1)) sum = -sum;
  return sum;
}

namespace {

double poisson_pmf(std::int64_t k, double lambda) {
  if (k < 0) return 0.0;
  if (lambda == 0.0) return k == 0 ? 1.0 : 0.0;
  return std::exp(-lambda + static_cast<double>(k) * std::log(lambda) - log_factorial(k));
}

}  // namespace

double skellam_pmf(std::int64_t y, double lambda_plus, double lambda_minus) {
  check_rate(lambda_plus, "skellam_pmf");
  check_rate(lambda_minus, "skellam_pmf");
  if (lambda_minus == 0.0) return poisson_pmf(y, lambda_plus);
  if (lambda_plus == 0.0) return poisson_pmf(-y, lambda_minus);
  const double z = 2.0 * std::sqrt(lambda_plus * lambda_minus);
  return std::exp(-(lambda_plus + lambda_minus) +
                  0.5 * static_cast<double>(y) * std::log(lambda_plus / lambda_minus)) *
         bessel_i(y, z);
}

SkellamPartials skellam_pmf_partials(std::int64_t y, double lambda_plus, double lambda_minus) {
  check_rate(lambda_plus, "skellam_pmf_partials");
  check_rate(lambda_minus, "skellam_pmf_partials");
  if (lambda_plus == 0.0 || lambda_minus == 0.0)
    throw InputError("skellam_pmf_partials: rates must be positive");
  const double ratio = lambda_plus / lambda_minus;
  const double z = 2.0 * std::sqrt(lambda_plus * lambda_minus);
  const double prefactor = std::exp(-(lambda_plus + lambda_minus) +
                                    0.5 * static_cast<double>(y) * std::log(ratio));
  const double iy = bessel_i(y, z);
  const double iy1 = bessel_i(y + 1, z);
  const double yd = static_cast<double>(y);
  return SkellamPartials{
      prefactor * ((yd / lambda_plus - 1.0) * iy + iy1 / std::sqrt(ratio)),
      prefactor * (-iy + std::sqrt(ratio) * iy1),
  };
}

}  // namespace rumba
