#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

namespace schurand {

// Weighted least squares fit of y = intercept + slope * x.
struct FitResult {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  int n_points = 0;
};

// weights[i] multiplies the squared residual at point i; pass an empty vector
// for an unweighted fit. R^2 is computed against the weighted mean.
inline FitResult linear_fit(const std::vector<double>& x,
                            const std::vector<double>& y,
                            const std::vector<double>& weights = {}) {
  const std::size_t n = x.size();
  if (y.size() != n) throw std::invalid_argument("linear_fit: size mismatch");
  if (n < 2) throw std::invalid_argument("linear_fit: need at least 2 points");
  if (!weights.empty() && weights.size() != n)
    throw std::invalid_argument("linear_fit: weight size mismatch");

  double sw = 0.0, swx = 0.0, swy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double w = weights.empty() ? 1.0 : weights[i];
    sw += w;
    swx += w * x[i];
    swy += w * y[i];
  }
  double xbar = swx / sw, ybar = swy / sw;

  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double w = weights.empty() ? 1.0 : weights[i];
    sxx += w * (x[i] - xbar) * (x[i] - xbar);
    sxy += w * (x[i] - xbar) * (y[i] - ybar);
  }
  if (sxx == 0.0) throw std::invalid_argument("linear_fit: degenerate x");

  FitResult fit;
  fit.slope = sxy / sxx;
  fit.intercept = ybar - fit.slope * xbar;
  fit.n_points = static_cast<int>(n);

  double ss_res = 0.0, ss_tot = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double w = weights.empty() ? 1.0 : weights[i];
    double pred = fit.intercept + fit.slope * x[i];
    ss_res += w * (y[i] - pred) * (y[i] - pred);
    ss_tot += w * (y[i] - ybar) * (y[i] - ybar);
  }
  fit.r_squared = (ss_tot == 0.0) ? 1.0 : 1.0 - ss_res / ss_tot;
  return fit;
}

// Power-law fit value = c * x^slope via log-log least squares. Only strictly
// positive values enter; points with value <= 0 are skipped. If stderrs is
// nonempty, each point is weighted by 1/sigma_log^2 with sigma_log =
// stderr/value (delta method); points with stderr <= 0 get weight from the
// smallest positive relative error present.
inline FitResult power_law_fit(const std::vector<double>& x,
                               const std::vector<double>& value,
                               const std::vector<double>& stderrs = {}) {
  if (value.size() != x.size())
    throw std::invalid_argument("power_law_fit: size mismatch");
  std::vector<double> lx, ly, w;
  bool weighted = !stderrs.empty();
  if (weighted && stderrs.size() != x.size())
    throw std::invalid_argument("power_law_fit: stderr size mismatch");

  double min_rel = 0.0;
  if (weighted) {
    for (std::size_t i = 0; i < x.size(); ++i)
      if (value[i] > 0.0 && stderrs[i] > 0.0) {
        double rel = stderrs[i] / value[i];
        if (min_rel == 0.0 || rel < min_rel) min_rel = rel;
      }
    if (min_rel == 0.0) weighted = false;  // no usable error bars
  }

  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(value[i] > 0.0) || !(x[i] > 0.0)) continue;
    lx.push_back(std::log(x[i]));
    ly.push_back(std::log(value[i]));
    if (weighted) {
      double rel = stderrs[i] > 0.0 ? stderrs[i] / value[i] : min_rel;
      w.push_back(1.0 / (rel * rel));
    }
  }
  if (lx.size() < 2)
    throw std::invalid_argument("power_law_fit: fewer than 2 positive points");
  return linear_fit(lx, ly, w);
}

}  // namespace schurand
