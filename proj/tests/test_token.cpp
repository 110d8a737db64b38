#include <catch2/catch_amalgamated.hpp>

#include "seedsel/token.hpp"

using seedsel::scan;
using seedsel::tokenize;

TEST_CASE("statements split into identifiers, operators, and punctuation") {
    CHECK(tokenize("int x = 1;") == std::vector<std::string>{"int", "x", "=", "1", ";"});
    CHECK(tokenize("foo(bar)") == std::vector<std::string>{"foo", "(", "bar", ")"});
    CHECK(tokenize("").empty());
    CHECK(tokenize("   \t\n").empty());
}

TEST_CASE("multi-character operators use maximal munch") {
    CHECK(tokenize("a >>>= b") == std::vector<std::string>{"a", ">>>=", "b"});
    CHECK(tokenize("a>>>b") == std::vector<std::string>{"a", ">>>", "b"});
    CHECK(tokenize("a>>b") == std::vector<std::string>{"a", ">>", "b"});
    CHECK(tokenize("x<=y") == std::vector<std::string>{"x", "<=", "y"});
    CHECK(tokenize("i++ + ++j") == std::vector<std::string>{"i", "++", "+", "++", "j"});
    CHECK(tokenize("a&&b||c") == std::vector<std::string>{"a", "&&", "b", "||", "c"});
}

TEST_CASE("numeric literals stay single tokens") {
    CHECK(tokenize("x = 0x1fL;") == std::vector<std::string>{"x", "=", "0x1fL", ";"});
    CHECK(tokenize("y = 1.5e-3f;") == std::vector<std::string>{"y", "=", "1.5e-3f", ";"});
    CHECK(tokenize("z = 12;") == std::vector<std::string>{"z", "=", "12", ";"});
    CHECK(tokenize("1..2") == std::vector<std::string>{"1", ".", ".", "2"});
    CHECK(tokenize("3-4") == std::vector<std::string>{"3", "-", "4"});
}

TEST_CASE("string and character literals are kept verbatim") {
    CHECK(tokenize("s = \"a b\";") == std::vector<std::string>{"s", "=", "\"a b\"", ";"});
    CHECK(tokenize("s = \"a\\\"b\";") == std::vector<std::string>{"s", "=", "\"a\\\"b\"", ";"});
    CHECK(tokenize("c = 'x';") == std::vector<std::string>{"c", "=", "'x'", ";"});
    CHECK(tokenize("c = '\\n';") == std::vector<std::string>{"c", "=", "'\\n'", ";"});
}

TEST_CASE("comments and whitespace are discarded") {
    CHECK(tokenize("a // rest\nb") == std::vector<std::string>{"a", "b"});
    CHECK(tokenize("a /* x\ny */ b") == std::vector<std::string>{"a", "b"});
    CHECK(tokenize("/* only */").empty());
    CHECK(tokenize("a / b") == std::vector<std::string>{"a", "/", "b"});
}

TEST_CASE("identifiers allow underscores and digits after the first character") {
    CHECK(tokenize("_x9 y_") == std::vector<std::string>{"_x9", "y_"});
    CHECK(tokenize("9x") == std::vector<std::string>{"9x"}); // digit start: one literal token
}

TEST_CASE("scan reports one-based line and column positions") {
    const auto toks = scan("a = 1;\n  b = 2;");
    REQUIRE(toks.size() == 8);
    CHECK(toks[0].text == "a");
    CHECK(toks[0].line == 1);
    CHECK(toks[0].col == 1);
    CHECK(toks[4].text == "b");
    CHECK(toks[4].line == 2);
    CHECK(toks[4].col == 3);
}

TEST_CASE("scanning the same text twice gives identical tokens") {
    const std::string src = "while (x < 10) { x += 1; /* inc */ }";
    CHECK(tokenize(src) == tokenize(src));
}
