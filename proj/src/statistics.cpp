#include "rinfer/statistics.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

#include "rinfer/error.hpp"

namespace rinfer {

StatisticValue diff_in_means(const UnitAverages& ua) {
  const int n = static_cast<int>(ua.treated.size());
  require(n >= 1 && ua.control.size() == ua.treated.size(),
          "unit averages are empty or ragged");
  double ts = 0.0, cs = 0.0;
  for (int i = 0; i < n; ++i) {
    ts += ua.treated[i];
    cs += ua.control[i];
  }
  StatisticValue s;
  s.treated_mean = ts / n;
  s.control_mean = cs / n;
  s.value = s.treated_mean - s.control_mean;
  require(std::isfinite(s.value) && std::isfinite(s.treated_mean) &&
              std::isfinite(s.control_mean),
          "statistic is not finite");
  return s;
}

DetrendResult detrend(const PanelDataset& panel, const AdoptionTime& adoption,
                      int halfwidth, bool pre_only,
                      std::vector<std::string>* warnings) {
  require(halfwidth >= 1, "detrend halfwidth must be at least 1");
  const int a0 = adoption.period;
  int begin = a0 - halfwidth;
  int end = a0 + halfwidth - 1;
  if (begin < 1 || end > panel.num_periods) {
    begin = std::max(begin, 1);
    end = std::min(end, panel.num_periods);
    if (warnings)
      warnings->push_back("detrend span clipped to panel bounds: periods " +
                          std::to_string(begin) + ".." + std::to_string(end));
  }
  int sample_begin = begin;
  int sample_end = pre_only ? a0 - 1 : end;
  int m = sample_end - sample_begin + 1;
  if (m < 3)
    fail("detrend fit window has " + std::to_string(std::max(m, 0)) +
         " periods; need at least 3");

  DetrendResult res;
  res.fit.halfwidth = halfwidth;
  res.fit.pre_only = pre_only;
  res.fit.fit_begin = begin;
  res.fit.fit_end = end;
  res.fit.sample_begin = sample_begin;
  res.fit.sample_end = sample_end;
  res.fit.intercept.resize(panel.n());
  res.fit.slope.resize(panel.n());

  res.residuals.units = panel.units;
  res.residuals.start = panel.date_of(begin);
  res.residuals.num_periods = end - begin + 1;
  res.residuals.values.resize(static_cast<size_t>(panel.n()) *
                              res.residuals.num_periods);

  // Closed-form per-unit least squares of y on (1, t): the regressor moments
  // depend only on the sample period range.
  const double t_mean = sample_begin + (m - 1) / 2.0;
  const double ss_t = static_cast<double>(m) *
                      (static_cast<double>(m) * m - 1.0) / 12.0;
  for (int i = 0; i < panel.n(); ++i) {
    double y_sum = 0.0, cross = 0.0;
    for (int t = sample_begin; t <= sample_end; ++t) y_sum += panel.at(i, t);
    const double y_mean = y_sum / m;
    for (int t = sample_begin; t <= sample_end; ++t)
      cross += (t - t_mean) * (panel.at(i, t) - y_mean);
    const double slope = cross / ss_t;
    const double intercept = y_mean - slope * t_mean;
    res.fit.slope[i] = slope;
    res.fit.intercept[i] = intercept;
    for (int t = begin; t <= end; ++t)
      res.residuals.at(i, t - begin + 1) =
          panel.at(i, t) - intercept - slope * t;
  }
  return res;
}

const char* combiner_name(Combiner c) {
  switch (c) {
    case Combiner::max_abs:
      return "max";
    case Combiner::mean_abs:
      return "mean";
    default:
      return "hotelling";
  }
}

Combiner parse_combiner(const std::string& name) {
  if (name == "max") return Combiner::max_abs;
  if (name == "mean") return Combiner::mean_abs;
  if (name == "hotelling") return Combiner::hotelling;
  fail("unknown combiner '" + name + "' (expected max, mean, or hotelling)");
}

HotellingModel hotelling_fit(const double* reference, uint64_t rows, int dim) {
  require(dim >= 1, "hotelling: dimension must be at least 1");
  require(rows >= static_cast<uint64_t>(dim) + 2,
          "hotelling: need at least dim + 2 reference draws, got " +
              std::to_string(rows));
  HotellingModel model;
  model.dim = dim;
  model.mean.assign(dim, 0.0);
  for (uint64_t r = 0; r < rows; ++r)
    for (int c = 0; c < dim; ++c) model.mean[c] += reference[r * dim + c];
  for (int c = 0; c < dim; ++c) model.mean[c] /= static_cast<double>(rows);

  Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(dim, dim);
  Eigen::VectorXd centered(dim);
  for (uint64_t r = 0; r < rows; ++r) {
    for (int c = 0; c < dim; ++c)
      centered(c) = reference[r * dim + c] - model.mean[c];
    cov.noalias() += centered * centered.transpose();
  }
  cov /= static_cast<double>(rows - 1);

  // Pseudo-inverse through the eigendecomposition; directions with
  // eigenvalues below 1e-10 of the largest are treated as degenerate.
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov);
  require(eig.info() == Eigen::Success,
          "hotelling: eigendecomposition failed");
  const Eigen::VectorXd& values = eig.eigenvalues();
  double largest = values.cwiseAbs().maxCoeff();
  if (largest <= 0.0)
    fail("hotelling: reference covariance is identically zero");
  Eigen::VectorXd inv_values(dim);
  for (int c = 0; c < dim; ++c)
    inv_values(c) = values(c) > 1e-10 * largest ? 1.0 / values(c) : 0.0;
  Eigen::MatrixXd pinv = eig.eigenvectors() * inv_values.asDiagonal() *
                         eig.eigenvectors().transpose();
  model.pinv.resize(static_cast<size_t>(dim) * dim);
  for (int r = 0; r < dim; ++r)
    for (int c = 0; c < dim; ++c) model.pinv[r * dim + c] = pinv(r, c);
  return model;
}

double hotelling_apply(const HotellingModel& model, const double* v) {
  const int dim = model.dim;
  double q = 0.0;
  for (int r = 0; r < dim; ++r) {
    double row = 0.0;
    for (int c = 0; c < dim; ++c)
      row += model.pinv[r * dim + c] * (v[c] - model.mean[c]);
    q += (v[r] - model.mean[r]) * row;
  }
  return q;
}

double combine(const double* stat_vector, int dim, const double* reference,
               uint64_t reference_rows, Combiner method) {
  require(dim >= 1, "combine: empty statistic vector");
  switch (method) {
    case Combiner::max_abs: {
      double best = 0.0;
      for (int c = 0; c < dim; ++c)
        best = std::max(best, std::fabs(stat_vector[c]));
      return best;
    }
    case Combiner::mean_abs: {
      double sum = 0.0;
      for (int c = 0; c < dim; ++c) sum += stat_vector[c];
      return std::fabs(sum / dim);
    }
    default: {
      require(reference != nullptr,
              "combine: hotelling needs a reference sample");
      HotellingModel model = hotelling_fit(reference, reference_rows, dim);
      return hotelling_apply(model, stat_vector);
    }
  }
}

}  // namespace rinfer
