#pragma once

#include <chrono>
#include <string>

namespace rinfer {

using Date = std::chrono::sys_days;

// Parses strict ISO-8601 "YYYY-MM-DD". Throws Error on malformed or
// non-existent dates.
Date parse_date(const std::string& text);

std::string format_date(Date d);

// Weekday occurrence within the month, 1-based (Nov 1 2017 is the first
// Wednesday of its month, so occurrence 1).
int weekday_occurrence(Date d);

// The k-th occurrence of the given weekday in (year, month). Throws if the
// month has no such occurrence.
Date nth_weekday_of_month(int year, unsigned month, int k,
                          std::chrono::weekday wd);

// Same calendar month/day in another year. Throws for Feb 29 mapped onto a
// non-leap year.
Date same_date_in_year(Date d, int year);

// Same (weekday, occurrence-in-month) rule in another year: the first
// Wednesday of November stays the first Wednesday of November.
Date same_weekday_in_year(Date d, int year);

int year_of(Date d);

}  // namespace rinfer
