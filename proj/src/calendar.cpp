#include "rinfer/calendar.hpp"

#include <cstdio>

#include "rinfer/error.hpp"

namespace rinfer {

using std::chrono::day;
using std::chrono::month;
using std::chrono::months;
using std::chrono::weekday;
using std::chrono::year;
using std::chrono::year_month_day;

Date parse_date(const std::string& text) {
  int y = 0;
  unsigned m = 0, d = 0;
  char tail = 0;
  if (text.size() != 10 ||
      std::sscanf(text.c_str(), "%4d-%2u-%2u%c", &y, &m, &d, &tail) != 3)
    fail("invalid date '" + text + "': expected YYYY-MM-DD");
  year_month_day ymd{year{y}, month{m}, day{d}};
  if (!ymd.ok()) fail("invalid date '" + text + "': no such calendar day");
  return Date{ymd};
}

std::string format_date(Date d) {
  year_month_day ymd{d};
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", int(ymd.year()),
                unsigned(ymd.month()), unsigned(ymd.day()));
  return buf;
}

int weekday_occurrence(Date d) {
  year_month_day ymd{d};
  return (int(unsigned(ymd.day())) - 1) / 7 + 1;
}

Date nth_weekday_of_month(int y, unsigned m, int k, weekday wd) {
  auto ymwd = year{y} / month{m} / wd[static_cast<unsigned>(k)];
  if (!ymwd.ok())
    fail("no occurrence " + std::to_string(k) + " of that weekday in " +
         std::to_string(y) + "-" + std::to_string(m));
  return Date{ymwd};
}

Date same_date_in_year(Date d, int target_year) {
  year_month_day ymd{d};
  year_month_day shifted{year{target_year}, ymd.month(), ymd.day()};
  if (!shifted.ok())
    fail("date " + format_date(d) + " does not exist in year " +
         std::to_string(target_year));
  return Date{shifted};
}

Date same_weekday_in_year(Date d, int target_year) {
  year_month_day ymd{d};
  weekday wd{Date{d}};
  return nth_weekday_of_month(target_year, unsigned(ymd.month()),
                              weekday_occurrence(d), wd);
}

int year_of(Date d) { return int(year_month_day{d}.year()); }

}  // namespace rinfer
