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

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace locemb::mob {

// Splits one comma-separated line. Fields may be double-quoted; a doubled
// quote inside a quoted field is a literal quote. Throws on an unterminated
// quote.
std::vector<std::string> split_csv_line(std::string_view line);

// Quotes the field when it contains a comma, quote or newline.
std::string csv_field(std::string_view field);

// Strict numeric parsing of a whole field.
double parse_double(std::string_view field);

// Error raised for malformed input rows; what() names the file and line.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& source, std::size_t line,
             const std::string& message);
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace locemb::mob
