#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rinfer/panel.hpp"

namespace rinfer {

struct StatisticValue {
  double value = 0.0;         // treated mean minus control mean
  double treated_mean = 0.0;  // average over units of treated window means
  double control_mean = 0.0;
};

// Difference in means across units; throws if any component is non-finite.
StatisticValue diff_in_means(const UnitAverages& ua);

struct DetrendFit {
  std::vector<double> intercept;  // per unit
  std::vector<double> slope;      // per unit, outcome change per period
  int halfwidth = 0;
  bool pre_only = false;
  // Residual domain, inclusive panel periods of the source panel.
  int fit_begin = 0;
  int fit_end = 0;
  // Periods the regression was estimated on (narrower under pre_only).
  int sample_begin = 0;
  int sample_end = 0;
};

struct DetrendResult {
  PanelDataset residuals;  // covers [fit_begin, fit_end] of the source panel
  DetrendFit fit;
};

// Per-unit ordinary least squares of the outcome on (1, t) over the clipped
// window of halfwidth periods either side of adoption; residuals are
// evaluated over that whole clipped span. With pre_only the coefficients are
// estimated from pre-adoption periods only. Throws when fewer than 3
// estimation periods remain. Appends a note to warnings when the span is
// clipped at a panel edge.
DetrendResult detrend(const PanelDataset& panel, const AdoptionTime& adoption,
                      int halfwidth, bool pre_only = false,
                      std::vector<std::string>* warnings = nullptr);

enum class Combiner { max_abs, mean_abs, hotelling };

const char* combiner_name(Combiner c);
Combiner parse_combiner(const std::string& name);

// Moments of a reference sample of L-dimensional statistic vectors, with the
// covariance pseudo-inverted (eigenvalues below 1e-10 of the largest are
// dropped) so degenerate directions cannot blow up the quadratic form.
struct HotellingModel {
  int dim = 0;
  std::vector<double> mean;  // dim
  std::vector<double> pinv;  // row-major dim x dim
};

// reference is row-major rows x dim. Requires rows >= dim + 2.
HotellingModel hotelling_fit(const double* reference, uint64_t rows, int dim);

double hotelling_apply(const HotellingModel& model, const double* v);

// Collapses a vector of per-window statistics to a scalar. max_abs and
// mean_abs ignore the reference sample; hotelling centers and scales by it.
double combine(const double* stat_vector, int dim, const double* reference,
               uint64_t reference_rows, Combiner method);

}  // namespace rinfer
