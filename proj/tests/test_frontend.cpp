#include "doctest.h"

#include "pi/frontend.hpp"

using namespace pi;

TEST_CASE("parser shapes") {
    CHECK(parse_process("0").is_nil());
    Process p = parse_process("nu x. x!y.0 | z(w).0");
    REQUIRE(p.kind() == Kind::Res);
    CHECK(p.body().kind() == Kind::Par);

    Process q = parse_process("a!b.0 | b!c.0 | c!a.0");
    REQUIRE(q.kind() == Kind::Par);
    CHECK(q.left().kind() == Kind::Par);
    CHECK(print_process(q) == "a!b.0 | b!c.0 | c!a.0");

    Process r = parse_process("a!b.0 | (b!c.0 | c!a.0)");
    CHECK(print_process(r) == "a!b.0 | (b!c.0 | c!a.0)");
}

TEST_CASE("parse errors carry spans") {
    try {
        parse_process("x!y");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.span().begin == 3);
        CHECK(e.span().begin <= e.span().end);
        CHECK(e.expected().count("'.'") == 1);
    }
    CHECK_THROWS_AS(parse_process("x(y.0"), ParseError);
    CHECK_THROWS_AS(parse_process("nu . 0"), ParseError);
    CHECK_THROWS_AS(parse_process("0 0"), ParseError);
    CHECK_THROWS_AS(parse_process(""), ParseError);
    CHECK_THROWS_AS(parse_process("x!nu.0"), ParseError);
}

TEST_CASE("printer") {
    CHECK(print_process(Process::nil()) == "0");
    CHECK(print_process(parse_process("(nu x. x!a.0) | b!c.0")) == "(nu x. x!a.0) | b!c.0");
    CHECK(print_process(parse_process("x(y).(y!a.0 | 0)")) == "x(y).(y!a.0 | 0)");
    CHECK(print_process(parse_process("x(y).nu z. z!y.0")) == "x(y).nu z. z!y.0");
    // A binder whose hint collides with a free name is shown with a suffix.
    Process clash = substitute(parse_process("nu y. x!z.0"), Name::intern("y"), Name::intern("z"));
    CHECK(print_process(clash) == "nu y1. x!y.0");
}

TEST_CASE("round trips on tricky inputs") {
    const char* samples[] = {
        "0",
        "nu x. nu x. x!x.0",
        "x(x).x(x).x!x.0",
        "(nu a. a!b.0 | 0) | nu c. 0",
        "x!y.(0 | 0) | y(z).nu w. (w!z.0 | z(v).0)",
        "nu y1. nu y. y1!y.0",
        "n#3!m#0.0",
    };
    for (const char* s : samples) {
        Process p = parse_process(s);
        std::string printed = print_process(p);
        CAPTURE(printed);
        CHECK(parse_process(printed) == p);
        CHECK(print_process(parse_process(printed)) == printed);
    }
}

TEST_CASE("generated names print and parse back") {
    Name g = Name::generated("w", 7);
    CHECK(g.text() == "w#7");
    CHECK(parse_name("w#7") == g);
    CHECK_THROWS_AS(parse_name("w#"), ParseError);
}
