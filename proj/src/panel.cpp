#include "rinfer/panel.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <map>
#include <sstream>

#include "rinfer/error.hpp"

namespace rinfer {

Date PanelDataset::date_of(int period) const {
  return start + std::chrono::days{period - 1};
}

bool PanelDataset::contains(Date d) const {
  auto diff = (d - start).count();
  return diff >= 0 && diff < num_periods;
}

int PanelDataset::period_of(Date d) const {
  if (!contains(d))
    fail("date " + format_date(d) + " outside panel range " +
         format_date(start) + ".." + format_date(date_of(num_periods)));
  return static_cast<int>((d - start).count()) + 1;
}

namespace {

std::vector<std::string> split_line(const std::string& line, char delim) {
  std::vector<std::string> fields;
  std::string cur;
  for (char ch : line) {
    if (ch == delim) {
      fields.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  fields.push_back(cur);
  return fields;
}

std::string strip(const std::string& s) {
  size_t b = s.find_first_not_of(" \r\n\t");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \r\n\t");
  return s.substr(b, e - b + 1);
}

int find_column(const std::vector<std::string>& header, const std::string& name,
                const char* what) {
  for (size_t i = 0; i < header.size(); ++i)
    if (strip(header[i]) == name) return static_cast<int>(i);
  fail(std::string("missing ") + what + " column '" + name +
       "' in header row");
}

double parse_value(const std::string& text, size_t line_no) {
  const std::string t = strip(text);
  if (t.empty())
    fail("line " + std::to_string(line_no) + ": empty count field");
  char* end = nullptr;
  double v = std::strtod(t.c_str(), &end);
  if (end != t.c_str() + t.size())
    fail("line " + std::to_string(line_no) + ": non-numeric count '" + t +
         "'");
  return v;
}

}  // namespace

PanelDataset load_panel(std::istream& in, const LoadOptions& opts) {
  std::string header_line;
  if (!std::getline(in, header_line)) fail("empty input: no header row");
  // Strip a UTF-8 byte-order mark if present.
  if (header_line.size() >= 3 && header_line.compare(0, 3, "\xEF\xBB\xBF") == 0)
    header_line.erase(0, 3);

  char delim = opts.delimiter;
  if (delim == 0)
    delim = header_line.find('\t') != std::string::npos ? '\t' : ',';

  auto header = split_line(header_line, delim);
  int unit_col = find_column(header, opts.unit_column, "unit");
  int date_col = find_column(header, opts.date_column, "date");
  int value_col = find_column(header, opts.value_column, "count");
  int cat_col = -1;
  if (!opts.category_filter.empty()) {
    require(!opts.category_column.empty(),
            "category filter given without a category column name");
    cat_col = find_column(header, opts.category_column, "category");
  } else if (!opts.category_column.empty()) {
    cat_col = find_column(header, opts.category_column, "category");
  }
  int max_col = std::max({unit_col, date_col, value_col, cat_col});

  std::map<std::pair<std::string, Date>, double> cells;
  Date min_date{}, max_date{};
  bool any = false;

  std::string line;
  size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (strip(line).empty()) continue;
    auto fields = split_line(line, delim);
    if (static_cast<int>(fields.size()) <= max_col)
      fail("line " + std::to_string(line_no) + ": expected at least " +
           std::to_string(max_col + 1) + " fields, got " +
           std::to_string(fields.size()));
    if (cat_col >= 0 && !opts.category_filter.empty() &&
        strip(fields[cat_col]) != opts.category_filter)
      continue;
    std::string unit = strip(fields[unit_col]);
    if (unit.empty())
      fail("line " + std::to_string(line_no) + ": empty unit label");
    Date d;
    try {
      d = parse_date(strip(fields[date_col]));
    } catch (const Error& e) {
      fail("line " + std::to_string(line_no) + ": " + e.what());
    }
    double v = parse_value(fields[value_col], line_no);
    cells[{unit, d}] += v;  // duplicate (unit, day) rows accumulate
    if (!any || d < min_date) min_date = d;
    if (!any || d > max_date) max_date = d;
    any = true;
  }
  if (!any)
    fail(opts.category_filter.empty()
             ? "no data rows in input"
             : "no rows left after filtering category '" +
                   opts.category_filter + "'");

  PanelDataset panel;
  panel.start = min_date;
  panel.num_periods = static_cast<int>((max_date - min_date).count()) + 1;
  std::vector<std::string> units;
  for (const auto& [key, value] : cells) units.push_back(key.first);
  std::sort(units.begin(), units.end());
  units.erase(std::unique(units.begin(), units.end()), units.end());
  panel.units = std::move(units);
  panel.values.assign(
      static_cast<size_t>(panel.n()) * panel.num_periods, 0.0);

  std::map<std::string, int> unit_index;
  for (int i = 0; i < panel.n(); ++i) unit_index[panel.units[i]] = i;
  for (const auto& [key, value] : cells) {
    int i = unit_index[key.first];
    int t = static_cast<int>((key.second - min_date).count()) + 1;
    panel.at(i, t) = value;
  }

  if (opts.strict_missing) {
    size_t have = cells.size();
    size_t want = static_cast<size_t>(panel.n()) * panel.num_periods;
    if (have != want) {
      // Name the first absent cell to make the failure actionable.
      for (int i = 0; i < panel.n(); ++i)
        for (int t = 1; t <= panel.num_periods; ++t)
          if (!cells.count({panel.units[i], panel.date_of(t)}))
            fail("strict-missing: no row for unit '" + panel.units[i] +
                 "' on " + format_date(panel.date_of(t)) + " (" +
                 std::to_string(want - have) + " cells absent)");
    }
  }
  return panel;
}

PanelDataset load_panel_file(const std::string& path,
                             const LoadOptions& opts) {
  std::ifstream in(path);
  if (!in) fail("cannot open input file '" + path + "'");
  return load_panel(in, opts);
}

AdoptionTime resolve_adoption(const PanelDataset& panel, Date date) {
  AdoptionTime a;
  a.date = date;
  a.period = panel.period_of(date);
  return a;
}

WindowView window(const PanelDataset& panel, const AdoptionTime& adoption,
                  int tau) {
  require(tau >= 1, "window halfwidth tau must be at least 1");
  int a0 = adoption.period;
  int first = a0 - tau, last = a0 + tau - 1;
  if (first < 1 || last > panel.num_periods) {
    std::ostringstream msg;
    msg << "window of halfwidth " << tau << " around period " << a0 << " ("
        << format_date(adoption.date) << ") needs periods " << first << ".."
        << last << " but the panel covers 1.." << panel.num_periods;
    if (first < 1) msg << "; missing " << first << ".." << 0;
    if (last > panel.num_periods)
      msg << "; missing " << panel.num_periods + 1 << ".." << last;
    fail(msg.str());
  }
  WindowView v;
  v.tau = tau;
  v.adoption_period = a0;
  v.adoption_date = adoption.date;
  v.n = panel.n();
  v.slab.resize(static_cast<size_t>(v.n) * v.cols());
  for (int i = 0; i < v.n; ++i)
    for (int c = 0; c < v.cols(); ++c) v.at(i, c) = panel.at(i, first + c);
  return v;
}

UnitAverages unit_averages(const WindowView& view,
                           const AssignmentDraw& draw) {
  require(draw.n() == view.n,
          "assignment draw covers " + std::to_string(draw.n()) +
              " units but the window has " + std::to_string(view.n));
  UnitAverages ua;
  ua.treated.resize(view.n);
  ua.control.resize(view.n);
  for (int i = 0; i < view.n; ++i) {
    double ts = 0.0, cs = 0.0;
    int tn = 0, cn = 0;
    for (int c = 0; c < view.cols(); ++c) {
      if (treated_in_column(draw, i, c, view.tau)) {
        ts += view.at(i, c);
        ++tn;
      } else {
        cs += view.at(i, c);
        ++cn;
      }
    }
    if (tn == 0 || cn == 0)
      fail("assignment leaves unit " + std::to_string(i) +
           " with an empty treated or control side");
    ua.treated[i] = ts / tn;
    ua.control[i] = cs / cn;
  }
  return ua;
}

}  // namespace rinfer
