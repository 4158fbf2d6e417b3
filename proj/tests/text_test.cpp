#include "vscript/text.hpp"

#include <gtest/gtest.h>

using namespace vscript;
using Tokens = std::vector<std::string>;

TEST(Tokenize, LowercasesAndSplitsPunctuation) {
    EXPECT_EQ(text::tokenize("Hello, World!"), (Tokens{"hello", ",", "world", "!"}));
    EXPECT_EQ(text::tokenize("  a\tb\n"), (Tokens{"a", "b"}));
    EXPECT_TRUE(text::tokenize("").empty());
}

TEST(Tokenize, WordTokensDropPunctuation) {
    EXPECT_EQ(text::word_tokens("Hi -- there."), (Tokens{"hi", "there"}));
}

TEST(Whitespace, NormalizeCollapsesRuns) {
    EXPECT_EQ(text::normalize_whitespace("  a \n\t b  "), "a b");
    EXPECT_EQ(text::trim("\t x \n"), "x");
}

TEST(Whitespace, SplitLinesStripsCarriageReturns) {
    EXPECT_EQ(text::split_lines("a\r\nb\n"), (Tokens{"a", "b", ""}));
}

TEST(Hashing, Fnv1aKnownValues) {
    EXPECT_EQ(text::fnv1a64(""), 0xcbf29ce484222325ULL);
    EXPECT_EQ(text::fnv1a64("a"), 0xaf63dc4c8601ec8cULL);
}

TEST(Hashing, DeriveSeedSeparatesLabelsAndOrdinals) {
    EXPECT_NE(text::derive_seed(1, "dialogue", 0), text::derive_seed(1, "scene", 0));
    EXPECT_NE(text::derive_seed(1, "dialogue", 0), text::derive_seed(1, "dialogue", 1));
    EXPECT_EQ(text::derive_seed(9, "x", 3), text::derive_seed(9, "x", 3));
}

TEST(SplitMix, ReproducibleAndBounded) {
    text::SplitMix64 a(42), b(42);
    for (int i = 0; i < 100; ++i) {
        auto x = a.below(7);
        EXPECT_EQ(x, b.below(7));
        EXPECT_LT(x, 7u);
        double u = a.uniform();
        b.uniform();
        EXPECT_GE(u, 0.0);
        EXPECT_LT(u, 1.0);
    }
}
