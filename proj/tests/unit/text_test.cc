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

#include <gtest/gtest.h>

#include "uner/text_util.h"
#include "uner/unicode.h"

namespace uner {
namespace {

TEST(UnicodeTest, DecodeRejectsIllFormedInput) {
  EXPECT_FALSE(DecodeUtf8("\xC3").has_value());
  EXPECT_FALSE(DecodeUtf8("\xED\xA0\x80").has_value());  // surrogate
  EXPECT_EQ(DecodeUtf8("Zo\xC3\xAB").value(), U"Zoë");
  EXPECT_EQ(DecodeUtf8Lossy("a\xFF"), U"a�");
}

TEST(UnicodeTest, EncodeRoundTrip) {
  const std::u32string s = U"İstanbul € 😀";
  EXPECT_EQ(DecodeUtf8(EncodeUtf8(s)).value(), s);
  EXPECT_EQ(CodePointLength(EncodeUtf8(s)), s.size());
}

TEST(UnicodeTest, CharacterClasses) {
  EXPECT_TRUE(IsWhitespace(U' '));
  EXPECT_TRUE(IsWhitespace(U'\n'));
  EXPECT_FALSE(IsWhitespace(U'x'));
  EXPECT_TRUE(IsPunctuationOrSymbol(U','));
  EXPECT_TRUE(IsPunctuationOrSymbol(U'€'));
  EXPECT_TRUE(IsPunctuationOrSymbol(U'+'));
  EXPECT_FALSE(IsPunctuationOrSymbol(U'é'));
  EXPECT_TRUE(IsLetter(U'ë'));
  EXPECT_FALSE(IsLetter(U'7'));
  EXPECT_TRUE(IsUppercase(U'É'));
  EXPECT_TRUE(IsUppercase(U'ǅ'));  // titlecase
  EXPECT_FALSE(IsUppercase(U'e'));
}

TEST(TextUtilTest, PercentDecode) {
  EXPECT_EQ(PercentDecode("2015%20European%20Games"), "2015 European Games");
  EXPECT_EQ(PercentDecode("Z%C3%BCrich"), "Zürich");
  EXPECT_EQ(PercentDecode("100%"), "100%");
  EXPECT_EQ(PercentDecode("%zz"), "%zz");
  EXPECT_EQ(PercentDecode("%41%"), "A%");
  // Decoding to invalid UTF-8 keeps the raw text.
  EXPECT_EQ(PercentDecode("%FF"), "%FF");
}

TEST(TextUtilTest, UnescapeIsSinglePass) {
  EXPECT_EQ(UnescapeHtmlEntities("a &amp; b &lt;&gt; &quot;&#39;"), "a & b <> \"'");
  EXPECT_EQ(UnescapeHtmlEntities("&amp;lt;"), "&lt;");
  EXPECT_EQ(UnescapeHtmlEntities("&nbsp;"), "&nbsp;");
}

TEST(TextUtilTest, TrimSplitJoin) {
  EXPECT_EQ(TrimWhitespace("  x y \n"), "x y");
  EXPECT_EQ(TrimWhitespace("   "), "");
  EXPECT_EQ(SplitString("a,,b", ','), (std::vector<std::string>{"a", "", "b"}));
  EXPECT_EQ(SplitString("", ','), (std::vector<std::string>{""}));
  EXPECT_EQ(JoinStrings({"a", "b", "c"}, " "), "a b c");
}

}  // namespace
}  // namespace uner
