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

#ifndef UNER_UNICODE_H_
#define UNER_UNICODE_H_

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

// UTF-8 helpers and character classes. Every offset in this project counts
// Unicode scalar values, not bytes.

namespace uner {

// Returns nullopt if `s` is not well-formed UTF-8.
std::optional<std::u32string> DecodeUtf8(std::string_view s);

// Decodes well-formed UTF-8; ill-formed sequences become U+FFFD.
std::u32string DecodeUtf8Lossy(std::string_view s);

bool IsValidUtf8(std::string_view s);

std::string EncodeUtf8(std::u32string_view s);
void AppendUtf8(char32_t c, std::string* out);

// Number of scalar values in well-formed UTF-8.
std::size_t CodePointLength(std::string_view s);

// White_Space property.
bool IsWhitespace(char32_t c);

// General categories P* and S*.
bool IsPunctuationOrSymbol(char32_t c);

// General category L*.
bool IsLetter(char32_t c);

// Lu or Lt.
bool IsUppercase(char32_t c);

}  // namespace uner

#endif  // UNER_UNICODE_H_
