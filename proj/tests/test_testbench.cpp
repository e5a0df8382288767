#include "doctest.h"

#include "pi/frontend.hpp"
#include "pi/lts_late.hpp"
#include "pi/testbench.hpp"

#include <functional>
#include <unordered_set>

using namespace pi;

namespace {
Process P(const char* s) { return parse_process(s); }

GenConfig exhaustive(int depth, std::size_t pool) {
    GenConfig cfg;
    cfg.max_depth = depth;
    cfg.pool = default_pool(pool);
    return cfg;
}

// Concrete strings over the grammar; the binder at nesting level k is
// always named bk, so distinct strings are distinct up to alpha.
std::vector<std::string> strings(int depth, const std::vector<std::string>& names) {
    std::vector<std::string> out{"0"};
    if (depth == 0) return out;
    std::string b = "b" + std::to_string(names.size());
    std::vector<std::string> wider = names;
    wider.push_back(b);
    auto inner = strings(depth - 1, wider);
    auto same = strings(depth - 1, names);
    for (const auto& c : names)
        for (const auto& body : inner) out.push_back(c + "(" + b + ").(" + body + ")");
    for (const auto& c : names)
        for (const auto& a : names)
            for (const auto& body : same) out.push_back(c + "!" + a + ".(" + body + ")");
    for (const auto& l : same)
        for (const auto& r : same) out.push_back("(" + l + ") | (" + r + ")");
    for (const auto& body : inner) out.push_back("nu " + b + ".(" + body + ")");
    return out;
}
}  // namespace

TEST_CASE("enumeration at depth 0 and 1") {
    auto d0 = enumerate_processes(exhaustive(0, 1));
    REQUIRE(d0.size() == 1);
    CHECK(d0[0].is_nil());

    auto d1 = enumerate_processes(exhaustive(1, 1));
    std::unordered_set<Process, ProcessHash> set(d1.begin(), d1.end());
    for (const char* s : {"x(y).0", "x!x.0", "0|0", "nu y.0", "0"}) CHECK(set.count(P(s)) == 1);
    CHECK(d1.size() == 5);
}

TEST_CASE("enumeration agrees with an independent recount") {
    for (int depth : {1, 2, 3}) {
        for (std::size_t pool : {1u, 2u}) {
            if (depth == 3 && pool == 2) continue;
            CAPTURE(depth);
            CAPTURE(pool);
            GenConfig cfg = exhaustive(depth, pool);
            std::vector<std::string> names;
            for (Name n : cfg.pool) names.push_back(n.text());
            std::unordered_set<Process, ProcessHash> expected;
            for (const auto& s : strings(depth, names)) expected.insert(parse_process(s));
            auto got = enumerate_processes(cfg);
            std::unordered_set<Process, ProcessHash> got_set(got.begin(), got.end());
            CHECK(got.size() == got_set.size());
            CHECK(got_set == expected);
            CHECK(corpus_size(depth, pool) == got.size());
        }
    }
    CHECK(corpus_size(2, 2) == 163);
}

TEST_CASE("enumeration is deterministic and refuses large corpora") {
    auto a = enumerate_processes(exhaustive(2, 2));
    auto b = enumerate_processes(exhaustive(2, 2));
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i] == b[i]);
    GenConfig big = exhaustive(5, 2);
    big.cap = 1000;
    try {
        enumerate_processes(big);
        FAIL("expected a refusal");
    } catch (const CorpusTooLarge& e) {
        CHECK(e.estimate() > 1000);
    }
}

TEST_CASE("random processes") {
    GenConfig cfg;
    cfg.mode = GenMode::Random;
    cfg.max_depth = 4;
    cfg.pool = default_pool(2);
    cfg.seed = 42;
    CHECK(random_process(cfg) == random_process(cfg));
    cfg.sample_count = 10000;
    auto samples = random_corpus(cfg);
    auto again = random_corpus(cfg);
    REQUIRE(samples.size() == 10000);
    NameSet pool;
    for (Name n : cfg.pool) pool.insert(n);
    std::size_t distinct_depths = 0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        CHECK(samples[i] == again[i]);
        CHECK(samples[i].depth() <= 4);
        CHECK(samples[i].free_names().subset_of(pool));
        CHECK(samples[i].locally_closed());
        if (samples[i].depth() == 4) ++distinct_depths;
    }
    CHECK(distinct_depths > 0);
    GenConfig empty = cfg;
    empty.pool.clear();
    CHECK_THROWS(random_process(empty));
}

TEST_CASE("congruence oracle") {
    CHECK(cong_oracle(P("a!b.0 | 0"), P("a!b.0"), 1) == OracleVerdict::Yes);
    CHECK(cong_oracle(P("nu z. a!b.0"), P("a!b.0"), 5) == OracleVerdict::Yes);
    CHECK(cong_oracle(P("nu z. a!b.0"), P("a!b.0"), 2) == OracleVerdict::NoWithinBudget);
    CHECK(cong_oracle(P("x!y.0"), P("y!x.0"), 3) == OracleVerdict::NoWithinBudget);
    CHECK(cong_oracle(P("(nu w. x!w.0) | y!x.0"), P("nu w.(y!x.0 | x!w.0)"), 2) == OracleVerdict::Yes);
    CHECK(cong_oracle(P("(nu w. x!w.0) | w!x.0"), P("nu w.(x!w.0 | w!x.0)"), 3) == OracleVerdict::NoWithinBudget);
}

TEST_CASE("step oracle on the late examples") {
    auto a = step_oracle(P("x!y.0"));
    REQUIRE(a.size() == 1);
    CHECK(a[0] == Transition::free(Action::free_out(Name::intern("x"), Name::intern("y")), P("0")));
    auto b = step_oracle(P("x(z).z!a.0"));
    REQUIRE(b.size() == 1);
    CHECK(b[0].abs == Abstraction::bind(Name::intern("w"), P("w!a.0")));
    auto c = step_oracle(P("nu z. x!z.0"));
    REQUIRE(c.size() == 1);
    CHECK(c[0].action == Action::bound_out(Name::intern("x")));
    CHECK(step_oracle(P("nu x. x!y.0")).empty());
    CHECK(step_oracle(P("0")).empty());
}

TEST_CASE("suite driver") {
    GenConfig cfg = exhaustive(2, 2);
    SuiteReport none = run_suite(cfg, {});
    CHECK(none.attempts() == 0);
    CHECK(none.all_passed());

    SuiteReport full = run_suite(cfg, builtin_properties());
    CHECK(full.all_passed());
    CHECK(full.attempts() == 163 * builtin_properties().size());
    CAPTURE(full.render());

    SuiteOptions two;
    two.threads = 2;
    SuiteReport threaded = run_suite(cfg, builtin_properties(), two);
    for (std::size_t i = 0; i < full.properties.size(); ++i)
        CHECK(threaded.properties[i].cases == full.properties[i].cases);

    CHECK_THROWS_AS(select_properties({"no-such-property"}), std::invalid_argument);
}

TEST_CASE("a broken checker is caught and shrunk") {
    Property broken{"broken", "rejects anything with a parallel composition", [](const Process& p) {
                        std::function<bool(const Process&)> has_par = [&](const Process& q) -> bool {
                            switch (q.kind()) {
                                case Kind::Par: return true;
                                case Kind::Nil: return false;
                                default: return has_par(q.kind() == Kind::Out ? q.body() : q.open_body(Name::intern("k")));
                            }
                        };
                        return has_par(p) ? PropertyOutcome::fail("found a parallel composition")
                                          : PropertyOutcome::pass(1);
                    }};
    SuiteReport r = run_suite(exhaustive(2, 2), {broken});
    REQUIRE(r.properties.size() == 1);
    CHECK(r.properties[0].failed > 0);
    REQUIRE(r.properties[0].first_failure);
    CHECK(r.properties[0].first_failure->process == "0 | 0");
}
