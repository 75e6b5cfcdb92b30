#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "rinfer/assignment.hpp"
#include "rinfer/calendar.hpp"

namespace rinfer {

// Balanced daily panel: n units by T periods, period t (1-based) falling on
// calendar date start + (t - 1) days. Unit order is the sorted order of the
// unit labels.
struct PanelDataset {
  std::vector<std::string> units;
  Date start{};
  int num_periods = 0;
  std::vector<double> values;  // row-major n x T

  int n() const { return static_cast<int>(units.size()); }
  int periods() const { return num_periods; }

  double at(int unit, int period) const {
    return values[static_cast<size_t>(unit) * num_periods + (period - 1)];
  }
  double& at(int unit, int period) {
    return values[static_cast<size_t>(unit) * num_periods + (period - 1)];
  }

  Date date_of(int period) const;
  bool contains(Date d) const;
  // 1-based period index; throws if the date lies outside the panel.
  int period_of(Date d) const;
};

struct LoadOptions {
  std::string unit_column = "unit";
  std::string date_column = "date";
  std::string value_column = "count";
  std::string category_column;  // optional
  std::string category_filter;  // keep only rows with this category value
  bool strict_missing = false;  // error on absent cells instead of zero-fill
  char delimiter = 0;           // 0 = auto-detect comma vs tab from header
};

// Reads a UTF-8 delimited event stream with a header row, filters, sums
// duplicate (unit, day) rows, and densifies over the full date range of the
// remaining rows, zero-filling absent cells (or erroring under
// strict_missing). Throws Error naming the line number on malformed rows.
PanelDataset load_panel(std::istream& in, const LoadOptions& opts = {});
PanelDataset load_panel_file(const std::string& path,
                             const LoadOptions& opts = {});

struct AdoptionTime {
  Date date{};
  int period = 0;  // 1-based index within the panel
};

// Throws if the date is outside the panel.
AdoptionTime resolve_adoption(const PanelDataset& panel, Date date);

// Symmetric analysis window: tau periods before adoption and tau after,
// covering periods a0 - tau .. a0 + tau - 1. Column c of the slab holds
// period a0 - tau + c; the first post-adoption column is tau.
struct WindowView {
  int tau = 0;
  int adoption_period = 0;
  Date adoption_date{};
  int n = 0;
  std::vector<double> slab;  // row-major n x 2*tau

  int cols() const { return 2 * tau; }
  int first_post_col() const { return tau; }
  double at(int unit, int col) const { return slab[unit * cols() + col]; }
  double& at(int unit, int col) { return slab[unit * cols() + col]; }
  // Panel period covered by slab column c.
  int period_of_col(int col) const { return adoption_period - tau + col; }
};

// Throws when the window does not fit, naming the missing periods.
WindowView window(const PanelDataset& panel, const AdoptionTime& adoption,
                  int tau);

struct UnitAverages {
  std::vector<double> treated;  // mean outcome over treated cells, per unit
  std::vector<double> control;  // mean outcome over control cells, per unit
};

// Per-unit treated/control window means under an assignment. Throws if any
// unit ends up with an empty treated or control side.
UnitAverages unit_averages(const WindowView& view, const AssignmentDraw& draw);

}  // namespace rinfer
