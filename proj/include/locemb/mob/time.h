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

#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace locemb::mob {

inline constexpr std::int64_t kSecondsPerDay = 86400;

// Accepted forms, all normalised to UTC seconds:
//   1333476009                         integer epoch seconds
//   2012-04-03T18:00:09Z               ISO 8601 ('T' or ' ' separator,
//   2012-04-03 18:00:09+09:00          optional fraction, Z or +-HH:MM)
//   Tue Apr 03 18:00:09 +0000 2012     Foursquare dump format
// Anything else throws std::invalid_argument.
std::int64_t parse_timestamp(std::string_view text);

std::string format_utc(std::int64_t t);

// Floor division, so times before the epoch land on the right day.
inline std::int64_t utc_day(std::int64_t t) {
  return t >= 0 ? t / kSecondsPerDay : -((-t + kSecondsPerDay - 1) / kSecondsPerDay);
}
inline int hour_of_day(std::int64_t t) {
  return static_cast<int>((t - utc_day(t) * kSecondsPerDay) / 3600);
}
// Monday = 0.
inline int day_of_week(std::int64_t t) {
  const std::int64_t d = (utc_day(t) + 3) % 7;
  return static_cast<int>(d < 0 ? d + 7 : d);
}

}  // namespace locemb::mob
