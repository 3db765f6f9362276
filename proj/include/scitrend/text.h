// Copyright 2026 The scitrend Authors.
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

#ifndef SCITREND_TEXT_H_
#define SCITREND_TEXT_H_

#include <string>
#include <string_view>
#include <vector>

namespace scitrend {

// ASCII-only case folding; bytes >= 0x80 pass through untouched.
std::string AsciiLower(std::string_view s);

std::string_view Trim(std::string_view s);

// Case-folds, trims, and collapses internal whitespace runs to one space.
std::string NormalizeKey(std::string_view s);

std::vector<std::string_view> SplitChar(std::string_view s, char sep);

// Splits on '\n', dropping a trailing '\r' from each line.
std::vector<std::string_view> SplitLines(std::string_view s);

bool IsWordByte(unsigned char c);

}  // namespace scitrend

#endif  // SCITREND_TEXT_H_
