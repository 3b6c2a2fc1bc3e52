#pragma once

#include <span>

namespace fermichain {

/// Ordinary least-squares line y = slope * x + intercept.
/// `max_rel_residual` is max_i |y_i - fit_i| / |y_i| (points with y_i = 0 use the absolute value);
/// `rms_residual` is the root-mean-square of y_i - fit_i.
struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double max_rel_residual = 0.0;
  double rms_residual = 0.0;
};

LineFit fit_line(std::span<const double> x, std::span<const double> y);

}  // namespace fermichain
