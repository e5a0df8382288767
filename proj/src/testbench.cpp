#include "pi/testbench.hpp"

#include <algorithm>
#include <atomic>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <sstream>
#include <thread>
#include <unordered_set>

#include "pi/frontend.hpp"

namespace pi {

std::vector<Name> default_pool(std::size_t n) {
    static const char* const letters[] = {"x", "y", "z", "a", "b", "c", "d", "e"};
    std::vector<Name> out;
    for (std::size_t i = 0; i < n; ++i)
        out.push_back(i < 8 ? Name::intern(letters[i]) : Name::intern("n" + std::to_string(i)));
    return out;
}

CorpusTooLarge::CorpusTooLarge(std::uint64_t estimate)
    : std::runtime_error("corpus of about " + std::to_string(estimate) + " processes exceeds the configured cap"),
      estimate_(estimate) {}

namespace {

constexpr std::uint64_t kSat = std::numeric_limits<std::uint64_t>::max();

std::uint64_t sat_add(std::uint64_t a, std::uint64_t b) { return a > kSat - b ? kSat : a + b; }
std::uint64_t sat_mul(std::uint64_t a, std::uint64_t b) {
    if (a == 0 || b == 0) return 0;
    return a > kSat / b ? kSat : a * b;
}

std::uint64_t count_rec(int depth, std::uint64_t names, std::map<std::pair<int, std::uint64_t>, std::uint64_t>& memo) {
    if (depth == 0) return 1;
    auto key = std::make_pair(depth, names);
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    std::uint64_t same = count_rec(depth - 1, names, memo);
    std::uint64_t inner = count_rec(depth - 1, names + 1, memo);
    std::uint64_t total = 1;
    total = sat_add(total, sat_mul(names, inner));
    total = sat_add(total, sat_mul(sat_mul(names, names), same));
    total = sat_add(total, sat_mul(same, same));
    total = sat_add(total, inner);
    memo[key] = total;
    return total;
}

std::string binder_hint(std::size_t level, const std::vector<Name>& pool) {
    static const char* const hints[] = {"u", "v", "w", "s", "t", "r", "q", "p"};
    std::string h = hints[level % 8];
    for (Name n : pool)
        if (n.text() == h) return h + std::to_string(level);
    return h;
}

class Enumerator {
public:
    explicit Enumerator(const std::vector<Name>& pool) : pool_(pool) {}

    const std::vector<Process>& at(int depth, std::uint32_t scope) {
        auto key = std::make_pair(depth, scope);
        if (auto it = memo_.find(key); it != memo_.end()) return it->second;
        std::vector<Process> out{Process::nil()};
        if (depth > 0) {
            std::vector<Ref> refs;
            for (Name n : pool_) refs.push_back(Ref::free(n));
            for (std::uint32_t i = 0; i < scope; ++i) refs.push_back(Ref::local(i));
            std::string hint = binder_hint(scope, pool_);
            const std::vector<Process> inner = at(depth - 1, scope + 1);
            const std::vector<Process> same = at(depth - 1, scope);
            for (const Ref& c : refs)
                for (const Process& b : inner) out.push_back(Process::make_input(c, hint, b));
            for (const Ref& c : refs)
                for (const Ref& a : refs)
                    for (const Process& b : same) out.push_back(Process::make_output(c, a, b));
            for (const Process& l : same)
                for (const Process& r : same) out.push_back(Process::par(l, r));
            for (const Process& b : inner) out.push_back(Process::make_res(hint, b));
        }
        return memo_.emplace(key, std::move(out)).first->second;
    }

private:
    std::vector<Name> pool_;
    std::map<std::pair<int, std::uint32_t>, std::vector<Process>> memo_;
};

Process random_rec(int depth, std::uint32_t scope, const std::vector<Name>& pool, std::mt19937_64& rng) {
    if (depth == 0) return Process::nil();
    std::uniform_int_distribution<int> pick_kind(0, 7);
    auto pick_ref = [&]() {
        std::uniform_int_distribution<std::size_t> d(0, pool.size() + scope - 1);
        std::size_t i = d(rng);
        return i < pool.size() ? Ref::free(pool[i]) : Ref::local(static_cast<std::uint32_t>(i - pool.size()));
    };
    switch (pick_kind(rng)) {
        case 0: return Process::nil();
        case 1:
        case 2: {
            Ref c = pick_ref();
            return Process::make_input(c, binder_hint(scope, pool), random_rec(depth - 1, scope + 1, pool, rng));
        }
        case 3:
        case 4: {
            Ref c = pick_ref();
            Ref a = pick_ref();
            return Process::make_output(c, a, random_rec(depth - 1, scope, pool, rng));
        }
        case 5:
        case 6: {
            Process l = random_rec(depth - 1, scope, pool, rng);
            return Process::par(l, random_rec(depth - 1, scope, pool, rng));
        }
        default: return Process::make_res(binder_hint(scope, pool), random_rec(depth - 1, scope + 1, pool, rng));
    }
}

// Named terms, used by the oracles and the shrinker so that they do not
// share the engine's binder machinery.
struct NTerm;
using NP = std::shared_ptr<const NTerm>;

struct NTerm {
    Kind kind = Kind::Nil;
    Name a;  // channel
    Name b;  // payload or bound variable
    NP l;
    NP r;
};

NP n_nil() {
    static const NP nil = std::make_shared<NTerm>();
    return nil;
}
NP n_in(Name c, Name v, NP body) { return std::make_shared<NTerm>(NTerm{Kind::In, c, v, std::move(body), nullptr}); }
NP n_out(Name c, Name y, NP body) { return std::make_shared<NTerm>(NTerm{Kind::Out, c, y, std::move(body), nullptr}); }
NP n_par(NP l, NP r) { return std::make_shared<NTerm>(NTerm{Kind::Par, Name{}, Name{}, std::move(l), std::move(r)}); }
NP n_res(Name v, NP body) { return std::make_shared<NTerm>(NTerm{Kind::Res, Name{}, v, std::move(body), nullptr}); }

class Fresh {
public:
    explicit Fresh(NameSet avoid) : avoid_(std::move(avoid)) {}
    Name next() {
        for (;;) {
            Name n = Name::generated("o", counter_++);
            if (!avoid_.contains(n)) return n;
        }
    }

private:
    NameSet avoid_;
    std::uint32_t counter_ = 0;
};

NP to_named(const Process& p, Fresh& fresh) {
    switch (p.kind()) {
        case Kind::Nil: return n_nil();
        case Kind::In: {
            Name v = fresh.next();
            return n_in(p.channel().name, v, to_named(p.open_body(v), fresh));
        }
        case Kind::Out: return n_out(p.channel().name, p.payload().name, to_named(p.body(), fresh));
        case Kind::Par: return n_par(to_named(p.left(), fresh), to_named(p.right(), fresh));
        case Kind::Res: {
            Name v = fresh.next();
            return n_res(v, to_named(p.open_body(v), fresh));
        }
    }
    return n_nil();
}

Process from_named(const NP& t) {
    switch (t->kind) {
        case Kind::Nil: return Process::nil();
        case Kind::In: return Process::input(t->a, t->b, from_named(t->l));
        case Kind::Out: return Process::output(t->a, t->b, from_named(t->l));
        case Kind::Par: return Process::par(from_named(t->l), from_named(t->r));
        case Kind::Res: return Process::res(t->b, from_named(t->l));
    }
    return Process::nil();
}

bool n_free(const NP& t, Name x) {
    switch (t->kind) {
        case Kind::Nil: return false;
        case Kind::In: return t->a == x || (t->b != x && n_free(t->l, x));
        case Kind::Out: return t->a == x || t->b == x || n_free(t->l, x);
        case Kind::Par: return n_free(t->l, x) || n_free(t->r, x);
        case Kind::Res: return t->b != x && n_free(t->l, x);
    }
    return false;
}

// t{y/x}, renaming binders that would capture y.
NP n_subst(const NP& t, Name y, Name x, Fresh& fresh) {
    if (x == y || !n_free(t, x)) return t;
    auto sw = [&](Name n) { return n == x ? y : n; };
    switch (t->kind) {
        case Kind::Nil: return t;
        case Kind::Out: return n_out(sw(t->a), sw(t->b), n_subst(t->l, y, x, fresh));
        case Kind::Par: return n_par(n_subst(t->l, y, x, fresh), n_subst(t->r, y, x, fresh));
        case Kind::In:
        case Kind::Res: {
            Name v = t->b;
            NP body = t->l;
            if (v == y) {
                Name v2 = fresh.next();
                body = n_subst(body, v2, v, fresh);
                v = v2;
            }
            body = n_subst(body, y, x, fresh);
            return t->kind == Kind::In ? n_in(sw(t->a), v, body) : n_res(v, body);
        }
    }
    return t;
}

struct NStep {
    Action action;
    NP target;
    Name var;  // bound actions only
};

bool mentions(const Action& a, Name z) { return a.mentions(z); }

std::vector<NStep> n_steps(const NP& t, Fresh& fresh) {
    std::vector<NStep> out;
    switch (t->kind) {
        case Kind::Nil: break;
        case Kind::Out: out.push_back({Action::free_out(t->a, t->b), t->l, Name{}}); break;
        case Kind::In: out.push_back({Action::bound_in(t->a), t->l, t->b}); break;
        case Kind::Par: {
            std::vector<NStep> ls = n_steps(t->l, fresh);
            std::vector<NStep> rs = n_steps(t->r, fresh);
            auto side = [&](const NStep& s, const NP& other, bool left) {
                NStep c = s;
                if (c.action.is_bound() && n_free(other, c.var)) {
                    Name v = fresh.next();
                    c.target = n_subst(c.target, v, c.var, fresh);
                    c.var = v;
                }
                c.target = left ? n_par(c.target, other) : n_par(other, c.target);
                out.push_back(c);
            };
            for (const auto& s : ls) side(s, t->r, true);
            for (const auto& s : rs) side(s, t->l, false);
            auto meet = [&](const NStep& o, const NStep& i, bool out_left) {
                if (i.action.kind != Action::Kind::BoundIn || o.action.channel != i.action.channel) return;
                if (o.action.kind == Action::Kind::FreeOut) {
                    NP received = n_subst(i.target, o.action.payload, i.var, fresh);
                    out.push_back({Action::tau(), out_left ? n_par(o.target, received) : n_par(received, o.target), Name{}});
                } else if (o.action.kind == Action::Kind::BoundOut) {
                    Name z = fresh.next();
                    NP sent = n_subst(o.target, z, o.var, fresh);
                    NP received = n_subst(i.target, z, i.var, fresh);
                    out.push_back({Action::tau(), n_res(z, out_left ? n_par(sent, received) : n_par(received, sent)), Name{}});
                }
            };
            for (const auto& l : ls)
                for (const auto& r : rs) {
                    meet(l, r, true);
                    meet(r, l, false);
                }
            break;
        }
        case Kind::Res: {
            Name z = t->b;
            for (const auto& s : n_steps(t->l, fresh)) {
                if (!mentions(s.action, z)) {
                    NStep c = s;
                    if (c.action.is_bound() && c.var == z) {
                        Name v = fresh.next();
                        c.target = n_subst(c.target, v, c.var, fresh);
                        c.var = v;
                    }
                    c.target = n_res(z, c.target);
                    out.push_back(c);
                } else if (s.action.kind == Action::Kind::FreeOut && s.action.payload == z && s.action.channel != z) {
                    out.push_back({Action::bound_out(s.action.channel), s.target, z});
                }
            }
            break;
        }
    }
    return out;
}

// One-step rewrites by the congruence axioms, both directions, at the root.
void root_rewrites(const NP& t, Fresh& fresh, std::vector<NP>& out) {
    out.push_back(n_par(t, n_nil()));
    switch (t->kind) {
        case Kind::Nil: out.push_back(n_res(fresh.next(), n_nil())); break;
        case Kind::Par: {
            const NP& p = t->l;
            const NP& q = t->r;
            if (q->kind == Kind::Nil) out.push_back(p);
            out.push_back(n_par(q, p));
            if (q->kind == Kind::Par) out.push_back(n_par(n_par(p, q->l), q->r));
            if (p->kind == Kind::Par) out.push_back(n_par(p->l, n_par(p->r, q)));
            if (p->kind == Kind::Res) {
                Name x = p->b;
                NP body = p->l;
                if (n_free(q, x)) {
                    Name x2 = fresh.next();
                    body = n_subst(body, x2, x, fresh);
                    x = x2;
                }
                out.push_back(n_res(x, n_par(body, q)));
            }
            break;
        }
        case Kind::Res: {
            const NP& body = t->l;
            if (body->kind == Kind::Nil) out.push_back(n_nil());
            if (body->kind == Kind::Par && !n_free(body->r, t->b)) out.push_back(n_par(n_res(t->b, body->l), body->r));
            if (body->kind == Kind::Res) out.push_back(n_res(body->b, n_res(t->b, body->l)));
            break;
        }
        default: break;
    }
}

void all_rewrites(const NP& t, Fresh& fresh, std::vector<NP>& out) {
    root_rewrites(t, fresh, out);
    std::vector<NP> sub;
    switch (t->kind) {
        case Kind::Nil: break;
        case Kind::In:
        case Kind::Out:
        case Kind::Res:
            all_rewrites(t->l, fresh, sub);
            for (auto& s : sub) out.push_back(std::make_shared<NTerm>(NTerm{t->kind, t->a, t->b, s, nullptr}));
            break;
        case Kind::Par:
            all_rewrites(t->l, fresh, sub);
            for (auto& s : sub) out.push_back(n_par(s, t->r));
            sub.clear();
            all_rewrites(t->r, fresh, sub);
            for (auto& s : sub) out.push_back(n_par(t->l, s));
            break;
    }
}

// Smaller variants for shrinking: a subterm replaced by 0, a parallel
// component dropped, a binder or prefix removed.
void shrink_variants(const NP& t, std::vector<NP>& out) {
    if (t->kind == Kind::Nil) return;
    out.push_back(n_nil());
    switch (t->kind) {
        case Kind::Par:
            out.push_back(t->l);
            out.push_back(t->r);
            break;
        case Kind::In:
        case Kind::Out:
        case Kind::Res: out.push_back(t->l); break;
        default: break;
    }
    std::vector<NP> sub;
    switch (t->kind) {
        case Kind::In:
        case Kind::Out:
        case Kind::Res:
            shrink_variants(t->l, sub);
            for (auto& s : sub) out.push_back(std::make_shared<NTerm>(NTerm{t->kind, t->a, t->b, s, nullptr}));
            break;
        case Kind::Par:
            shrink_variants(t->l, sub);
            for (auto& s : sub) out.push_back(n_par(s, t->r));
            sub.clear();
            shrink_variants(t->r, sub);
            for (auto& s : sub) out.push_back(n_par(t->l, s));
            break;
        default: break;
    }
}

}  // namespace

std::uint64_t corpus_size(int max_depth, std::size_t pool_size) {
    std::map<std::pair<int, std::uint64_t>, std::uint64_t> memo;
    return count_rec(max_depth, pool_size, memo);
}

void enumerate_processes(const GenConfig& cfg, const std::function<void(const Process&)>& sink) {
    if (cfg.mode != GenMode::Exhaustive) throw std::invalid_argument("enumerate_processes: exhaustive mode required");
    if (cfg.max_depth < 0) throw std::invalid_argument("enumerate_processes: negative depth");
    std::uint64_t estimate = corpus_size(cfg.max_depth, cfg.pool.size());
    if (estimate > cfg.cap) throw CorpusTooLarge(estimate);
    Enumerator e(cfg.pool);
    for (const Process& p : e.at(cfg.max_depth, 0)) sink(p);
}

std::vector<Process> enumerate_processes(const GenConfig& cfg) {
    std::vector<Process> out;
    enumerate_processes(cfg, [&](const Process& p) { out.push_back(p); });
    return out;
}

Process random_process(const GenConfig& cfg, std::mt19937_64& rng) {
    if (cfg.pool.empty()) throw std::invalid_argument("random_process: empty name pool");
    return random_rec(cfg.max_depth, 0, cfg.pool, rng);
}

Process random_process(const GenConfig& cfg) {
    std::mt19937_64 rng(cfg.seed);
    return random_process(cfg, rng);
}

std::vector<Process> random_corpus(const GenConfig& cfg) {
    std::mt19937_64 rng(cfg.seed);
    std::vector<Process> out;
    out.reserve(cfg.sample_count);
    for (std::size_t i = 0; i < cfg.sample_count; ++i) out.push_back(random_process(cfg, rng));
    return out;
}

std::vector<Process> cong_ball(const Process& p, int budget) {
    Fresh fresh(p.free_names());
    std::unordered_set<Process, ProcessHash> seen{p};
    std::vector<Process> order{p};
    std::vector<NP> frontier{to_named(p, fresh)};
    for (int round = 0; round < budget && !frontier.empty(); ++round) {
        std::vector<NP> next;
        for (const NP& t : frontier) {
            std::vector<NP> nb;
            all_rewrites(t, fresh, nb);
            for (NP& n : nb) {
                Process key = from_named(n);
                if (seen.insert(key).second) {
                    order.push_back(key);
                    next.push_back(std::move(n));
                }
            }
        }
        frontier = std::move(next);
    }
    return order;
}

OracleVerdict cong_oracle(const Process& p, const Process& q, int budget) {
    if (p == q) return OracleVerdict::Yes;
    std::vector<Process> a = cong_ball(p, budget);
    std::unordered_set<Process, ProcessHash> sa(a.begin(), a.end());
    for (const Process& x : cong_ball(q, budget))
        if (sa.count(x)) return OracleVerdict::Yes;
    return OracleVerdict::NoWithinBudget;
}

std::vector<Transition> step_oracle(const Process& p) {
    Fresh fresh(p.free_names());
    NP t = to_named(p, fresh);
    std::vector<Transition> out;
    std::unordered_set<Transition, TransitionHash> seen;
    for (const NStep& s : n_steps(t, fresh)) {
        Transition tr = s.action.is_bound() ? Transition::bound(s.action, Abstraction::bind(s.var, from_named(s.target)))
                                            : Transition::free(s.action, from_named(s.target));
        if (seen.insert(tr).second) out.push_back(tr);
    }
    return out;
}

Process shrink(const Process& p, const std::function<bool(const Process&)>& fails) {
    Process cur = p;
    for (;;) {
        Fresh fresh(cur.free_names());
        std::vector<NP> variants;
        shrink_variants(to_named(cur, fresh), variants);
        std::vector<Process> cands;
        for (const NP& v : variants) cands.push_back(from_named(v));
        std::stable_sort(cands.begin(), cands.end(),
                         [](const Process& a, const Process& b) { return a.size() < b.size(); });
        bool moved = false;
        for (const Process& c : cands) {
            if (c.size() >= cur.size()) break;
            bool f = false;
            try {
                f = fails(c);
            } catch (...) {
                f = true;
            }
            if (f) {
                cur = c;
                moved = true;
                break;
            }
        }
        if (!moved) return cur;
    }
}

bool SuiteReport::all_passed() const {
    for (const auto& p : properties)
        if (p.failed) return false;
    return true;
}

std::size_t SuiteReport::attempts() const {
    std::size_t n = 0;
    for (const auto& p : properties) n += p.attempted;
    return n;
}

std::string SuiteReport::render() const {
    std::ostringstream os;
    os << "processes: " << processes << "  duration: " << duration.count() << " ms\n";
    for (const auto& p : properties) {
        os << (p.failed ? "FAIL " : "ok   ") << p.name << "  attempted " << p.attempted << "  passed " << p.passed
           << "  failed " << p.failed << "  cases " << p.cases << "\n";
        if (p.first_failure) {
            os << "     counterexample: " << p.first_failure->process << "\n";
            if (p.first_failure->original != p.first_failure->process)
                os << "     shrunk from: " << p.first_failure->original << "\n";
            os << "     " << p.first_failure->message << "\n";
        }
    }
    return os.str();
}

namespace {

PropertyOutcome run_one(const Property& prop, const Process& p) {
    try {
        return prop.check(p);
    } catch (const std::exception& e) {
        return PropertyOutcome::fail(std::string("exception: ") + e.what());
    }
}

}  // namespace

SuiteReport run_properties(const std::vector<Process>& corpus, const std::vector<Property>& props,
                           const SuiteOptions& opts) {
    auto start = std::chrono::steady_clock::now();
    struct Local {
        std::size_t attempted = 0, passed = 0, failed = 0, cases = 0;
        std::size_t first = std::numeric_limits<std::size_t>::max();
        std::string message;
    };
    std::vector<Local> merged(props.size());
    std::mutex mu;
    std::atomic<std::size_t> next{0};
    constexpr std::size_t kChunk = 64;
    auto worker = [&]() {
        std::vector<Local> local(props.size());
        for (;;) {
            std::size_t begin = next.fetch_add(kChunk);
            if (begin >= corpus.size()) break;
            std::size_t end = std::min(corpus.size(), begin + kChunk);
            for (std::size_t i = begin; i < end; ++i)
                for (std::size_t k = 0; k < props.size(); ++k) {
                    PropertyOutcome o = run_one(props[k], corpus[i]);
                    Local& l = local[k];
                    ++l.attempted;
                    l.cases += o.cases;
                    if (o.ok) {
                        ++l.passed;
                    } else {
                        ++l.failed;
                        if (i < l.first) {
                            l.first = i;
                            l.message = o.message;
                        }
                    }
                }
        }
        std::lock_guard<std::mutex> lock(mu);
        for (std::size_t k = 0; k < props.size(); ++k) {
            Local& m = merged[k];
            const Local& l = local[k];
            m.attempted += l.attempted;
            m.passed += l.passed;
            m.failed += l.failed;
            m.cases += l.cases;
            if (l.first < m.first) {
                m.first = l.first;
                m.message = l.message;
            }
        }
    };
    unsigned threads = std::max(1u, opts.threads);
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();

    SuiteReport report;
    report.processes = corpus.size();
    for (std::size_t k = 0; k < props.size(); ++k) {
        const Local& m = merged[k];
        PropertyReport r;
        r.name = props[k].name;
        r.attempted = m.attempted;
        r.passed = m.passed;
        r.failed = m.failed;
        r.cases = m.cases;
        if (m.failed) {
            const Process& original = corpus[m.first];
            Counterexample ce{print_process(original), print_process(original), m.message};
            if (opts.shrink) {
                const Property& prop = props[k];
                Process small = shrink(original, [&](const Process& c) { return !run_one(prop, c).ok; });
                ce.process = print_process(small);
                ce.message = run_one(prop, small).message;
            }
            r.first_failure = ce;
        }
        report.properties.push_back(std::move(r));
    }
    report.duration =
        std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start);
    return report;
}

SuiteReport run_suite(const GenConfig& cfg, const std::vector<Property>& props, const SuiteOptions& opts) {
    std::vector<Process> corpus =
        cfg.mode == GenMode::Exhaustive ? enumerate_processes(cfg) : random_corpus(cfg);
    if (props.empty()) {
        SuiteReport r;
        r.processes = corpus.size();
        return r;
    }
    return run_properties(corpus, props, opts);
}

}  // namespace pi
