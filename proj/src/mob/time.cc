// Copyright 2026 The locemb Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "locemb/mob/time.h"

#include <array>
#include <chrono>
#include <cstdio>
#include <stdexcept>

namespace locemb::mob {
namespace {

[[noreturn]] void bad(std::string_view text) {
  throw std::invalid_argument("unrecognised timestamp format: '" +
                              std::string(text) + "'");
}

int digits(std::string_view s, std::size_t pos, std::size_t n,
           std::string_view whole) {
  if (pos + n > s.size()) bad(whole);
  int v = 0;
  for (std::size_t i = pos; i < pos + n; ++i) {
    if (s[i] < '0' || s[i] > '9') bad(whole);
    v = v * 10 + (s[i] - '0');
  }
  return v;
}

std::int64_t civil_to_epoch(int y, int mo, int d, int h, int mi, int s,
                            std::string_view whole) {
  using namespace std::chrono;
  const year_month_day ymd{year{y}, month{static_cast<unsigned>(mo)},
                           day{static_cast<unsigned>(d)}};
  if (!ymd.ok() || h > 23 || mi > 59 || s > 60) bad(whole);
  const auto days = sys_days(ymd).time_since_epoch().count();
  return static_cast<std::int64_t>(days) * kSecondsPerDay + h * 3600 +
         mi * 60 + s;
}

// Parses "+HH:MM", "+HHMM", "Z" starting at pos; returns offset seconds.
std::int64_t parse_offset(std::string_view s, std::size_t pos,
                          std::string_view whole) {
  if (pos == s.size()) return 0;
  if (s[pos] == 'Z' && pos + 1 == s.size()) return 0;
  if (s[pos] != '+' && s[pos] != '-') bad(whole);
  const int sign = s[pos] == '-' ? -1 : 1;
  const int hh = digits(s, pos + 1, 2, whole);
  std::size_t p = pos + 3;
  if (p < s.size() && s[p] == ':') ++p;
  const int mm = digits(s, p, 2, whole);
  if (p + 2 != s.size()) bad(whole);
  return sign * (hh * 3600 + mm * 60);
}

std::int64_t parse_iso(std::string_view s) {
  const int y = digits(s, 0, 4, s);
  if (s[4] != '-' || s.size() < 19 || s[7] != '-' ||
      (s[10] != 'T' && s[10] != ' ') || s[13] != ':' || s[16] != ':') {
    bad(s);
  }
  const int mo = digits(s, 5, 2, s), d = digits(s, 8, 2, s);
  const int h = digits(s, 11, 2, s), mi = digits(s, 14, 2, s),
            sec = digits(s, 17, 2, s);
  std::size_t pos = 19;
  if (pos < s.size() && s[pos] == '.') {
    ++pos;
    while (pos < s.size() && s[pos] >= '0' && s[pos] <= '9') ++pos;
  }
  return civil_to_epoch(y, mo, d, h, mi, sec, s) - parse_offset(s, pos, s);
}

// "Tue Apr 03 18:00:09 +0000 2012"
std::int64_t parse_fsq(std::string_view s) {
  static constexpr std::array<std::string_view, 12> kMonths = {
      "Jan", "Feb", "Mar", "Apr", "May", "Jun",
      "Jul", "Aug", "Sep", "Oct", "Nov", "Dec"};
  if (s.size() != 30 || s[3] != ' ' || s[7] != ' ' || s[10] != ' ' ||
      s[19] != ' ' || s[25] != ' ') {
    bad(s);
  }
  int mo = 0;
  for (std::size_t i = 0; i < kMonths.size(); ++i) {
    if (s.substr(4, 3) == kMonths[i]) mo = static_cast<int>(i) + 1;
  }
  if (mo == 0) bad(s);
  const int d = digits(s, 8, 2, s);
  const int h = digits(s, 11, 2, s), mi = digits(s, 14, 2, s),
            sec = digits(s, 17, 2, s);
  const std::int64_t offset = parse_offset(s.substr(0, 25), 20, s);
  const int y = digits(s, 26, 4, s);
  return civil_to_epoch(y, mo, d, h, mi, sec, s) - offset;
}

}  // namespace

std::int64_t parse_timestamp(std::string_view text) {
  while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
  while (!text.empty() && (text.back() == ' ' || text.back() == '\r')) {
    text.remove_suffix(1);
  }
  if (text.empty()) bad(text);
  bool all_digits = true;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const bool sign = i == 0 && text[i] == '-' && text.size() > 1;
    if (!sign && (text[i] < '0' || text[i] > '9')) all_digits = false;
  }
  if (all_digits) {
    if (text.size() > 18) bad(text);
    return std::stoll(std::string(text));
  }
  if (text.size() >= 19 && text[4] == '-') return parse_iso(text);
  if (text.size() == 30) return parse_fsq(text);
  bad(text);
}

std::string format_utc(std::int64_t t) {
  using namespace std::chrono;
  const std::int64_t day_number = utc_day(t);
  const std::int64_t rem = t - day_number * kSecondsPerDay;
  const year_month_day ymd{sys_days{days{day_number}}};
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%04d-%02u-%02uT%02d:%02d:%02dZ",
                static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()),
                static_cast<unsigned>(ymd.day()), static_cast<int>(rem / 3600),
                static_cast<int>(rem % 3600 / 60), static_cast<int>(rem % 60));
  return buf;
}

}  // namespace locemb::mob
