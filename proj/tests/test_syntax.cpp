#include "doctest.h"

#include "pi/frontend.hpp"
#include "pi/syntax.hpp"

using namespace pi;

namespace {
Process P(const char* s) { return parse_process(s); }
Name N(const char* s) { return Name::intern(s); }
}  // namespace

TEST_CASE("free names") {
    CHECK(free_names(P("0")).empty());
    CHECK(free_names(P("x!y.0")) == NameSet{N("x"), N("y")});
    CHECK(free_names(P("nu y. x!y.0")) == NameSet{N("x")});
    CHECK(free_names(P("x(y).y!z.0")) == NameSet{N("x"), N("z")});
}

TEST_CASE("substitution") {
    CHECK(substitute(P("z!z.0"), N("y"), N("z")) == P("y!y.0"));

    Process captured = substitute(P("nu y. x!z.0"), N("y"), N("z"));
    REQUIRE(captured.kind() == Kind::Res);
    CHECK(captured.has_free(N("y")));
    CHECK(captured == P("nu q. x!y.0"));
    CHECK(print_process(captured) == "nu y1. x!y.0");

    Process p = P("x(y).(y!x.0 | nu x. x!y.0)");
    CHECK(substitute(p, N("x"), N("x")) == p);
    CHECK(substitute(p, N("w"), N("a")) == p);
}

TEST_CASE("alpha equivalence") {
    CHECK(alpha_eq(P("x(y).y!a.0"), P("x(z).z!a.0")));
    CHECK_FALSE(alpha_eq(P("x(y).y!a.0"), P("x(y).a!y.0")));
    CHECK(alpha_eq(P("nu x. nu y. x!y.0"), P("nu y. nu x. y!x.0")));
    CHECK_FALSE(alpha_eq(P("nu x. nu y. x!y.0"), P("nu x. nu y. y!x.0")));
    CHECK(P("x(y).y!a.0").hash() == P("x(z).z!a.0").hash());
}

TEST_CASE("fresh names") {
    NameSet avoid{N("x"), N("y")};
    Name a = fresh_name(avoid);
    CHECK_FALSE(avoid.contains(a));
    CHECK(a == fresh_name(avoid));
    CHECK(a.is_generated());
    CHECK(fresh_name({}) == fresh_name({}));

    NameSupply s(avoid);
    Name b = s.next("w");
    Name c = s.next("w");
    CHECK(b != c);
    CHECK(b.hint() == "w");
    CHECK(Name::intern(b.text()) == b);
}

TEST_CASE("open and close are inverse on fresh names") {
    Process p = P("x(y).nu z. (y!z.0 | z(u).u!x.0)");
    Name w = fresh_name(p.free_names(), "w");
    Process body = p.open_body(w);
    CHECK(body.locally_closed());
    CHECK(Process::input(N("x"), w, body) == p);
    Abstraction abs = Abstraction::bind(w, body);
    CHECK(abs.instantiate(w) == body);
}

TEST_CASE("abstraction instantiation commutes with swapping") {
    Process body = P("x!w.w(v).v!a.0");
    Abstraction abs = Abstraction::bind(N("w"), body);
    Name m = N("m"), n = N("n");
    Process at_m = abs.instantiate(m);
    Process at_n = abs.instantiate(n);
    CHECK(substitute(at_m, n, m) == at_n);
}
