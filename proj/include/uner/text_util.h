// Copyright 2026 The UNER Corpus Authors.
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

#ifndef UNER_TEXT_UTIL_H_
#define UNER_TEXT_UTIL_H_

#include <string>
#include <string_view>
#include <vector>

namespace uner {

// Strips leading and trailing Unicode whitespace.
std::string TrimWhitespace(std::string_view s);

// Decodes %XX escapes. Returns the input unchanged if the decoded bytes are
// not valid UTF-8; malformed escapes are kept literally.
std::string PercentDecode(std::string_view s);

// Decodes &amp; &lt; &gt; &quot; &#39; in one left-to-right pass.
std::string UnescapeHtmlEntities(std::string_view s);

std::vector<std::string> SplitString(std::string_view s, char separator);
std::string JoinStrings(const std::vector<std::string>& parts,
                        std::string_view separator);

}  // namespace uner

#endif  // UNER_TEXT_UTIL_H_
