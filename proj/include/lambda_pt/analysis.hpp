#pragma once

// Post-processing of sampled population curves: peak location, peak
// spacing and log-linear rate fits.

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace lambda_pt {

struct Peak {
  double t;
  double value;
};

/// Interior local maxima with value >= min_height, refined by a parabola
/// through the three samples around each maximum. Assumes a uniform grid
/// near each peak.
inline std::vector<Peak> find_peaks(std::span<const double> t, std::span<const double> y,
                                    double min_height = 0.0) {
  if (t.size() != y.size()) throw std::invalid_argument("find_peaks: size mismatch");
  std::vector<Peak> peaks;
  for (std::size_t k = 1; k + 1 < y.size(); ++k) {
    if (!(y[k] > y[k - 1] && y[k] >= y[k + 1]) || y[k] < min_height) continue;
    const double h = t[k + 1] - t[k];
    const double denom = y[k - 1] - 2.0 * y[k] + y[k + 1];
    double offset = 0.0;
    double value = y[k];
    if (denom < 0.0) {
      offset = 0.5 * (y[k - 1] - y[k + 1]) / denom;
      value = y[k] - 0.25 * (y[k - 1] - y[k + 1]) * offset;
    }
    peaks.push_back({t[k] + offset * h, value});
  }
  return peaks;
}

// Mean spacing between first and last peak.
inline double mean_peak_spacing(std::span<const Peak> peaks) {
  if (peaks.size() < 2) throw std::invalid_argument("mean_peak_spacing: need at least two peaks");
  return (peaks.back().t - peaks.front().t) / static_cast<double>(peaks.size() - 1);
}

struct LinearFit {
  double slope;
  double intercept;
};

inline LinearFit least_squares_line(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("least_squares_line: bad input");
  const double n = static_cast<double>(x.size());
  double sx = 0.0, sy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  const double slope = sxy / sxx;
  return {slope, my - slope * mx};
}

/// Decay rate -d/dt log(value) across a sequence of peaks.
inline double peak_decay_rate(std::span<const Peak> peaks) {
  std::vector<double> x, y;
  for (const auto& p : peaks) {
    x.push_back(p.t);
    y.push_back(std::log(p.value));
  }
  return -least_squares_line(x, y).slope;
}

}  // namespace lambda_pt
