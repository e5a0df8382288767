#include "pi/certjson.hpp"

#include <memory>
#include <unordered_map>

#include "pi/frontend.hpp"

namespace pi {

namespace {

std::string process_text(const Process& p) { return print_process(p); }

Json abstraction_json(const Abstraction& a) {
    Name b = display_binder(a, NameSet{});
    return Json{{"binder", b.text()}, {"body", process_text(a.instantiate(b))}};
}

Json optional_binder(Json j, const std::optional<Name>& b) {
    if (b) j["binder"] = b->text();
    return j;
}

Json names_json(const std::vector<Name>& ns) {
    Json out = Json::array();
    for (Name n : ns) out.push_back(n.text());
    return out;
}

// Field access with JSON-pointer-style locations for error reports.
class Reader {
public:
    using Cache = std::unordered_map<std::string, Process>;

    Reader(const Json& j, std::string path, std::shared_ptr<Cache> cache = std::make_shared<Cache>())
        : j_(j), path_(std::move(path)), cache_(std::move(cache)) {}

    const std::string& path() const { return path_; }

    const Json& field(const char* key) const {
        if (!j_.is_object()) fail(path_, "expected an object");
        auto it = j_.find(key);
        if (it == j_.end()) fail(path_ + "/" + key, "missing field");
        return *it;
    }
    bool has(const char* key) const { return j_.is_object() && j_.contains(key); }
    Reader sub(const char* key) const { return Reader(field(key), path_ + "/" + key, cache_); }

    std::string string(const char* key) const {
        const Json& v = field(key);
        if (!v.is_string()) fail(path_ + "/" + key, "expected a string");
        return v.get<std::string>();
    }
    Name name(const char* key) const {
        std::string s = string(key);
        try {
            return parse_name(s);
        } catch (const ParseError& e) {
            fail(path_ + "/" + key, std::string("bad name: ") + e.what());
        }
    }
    std::optional<Name> optional_name(const char* key) const {
        if (!has(key)) return std::nullopt;
        return name(key);
    }
    Process process(const char* key) const {
        std::string s = string(key);
        if (auto it = cache_->find(s); it != cache_->end()) return it->second;
        try {
            return cache_->emplace(s, parse_process(s)).first->second;
        } catch (const ParseError& e) {
            fail(path_ + "/" + key, std::string("bad process: ") + e.what());
        }
    }
    std::vector<Name> names(const char* key) const {
        const Json& v = field(key);
        if (!v.is_array()) fail(path_ + "/" + key, "expected an array");
        std::vector<Name> out;
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (!v[i].is_string()) fail(path_ + "/" + key + "/" + std::to_string(i), "expected a string");
            try {
                out.push_back(parse_name(v[i].get<std::string>()));
            } catch (const ParseError& e) {
                fail(path_ + "/" + key + "/" + std::to_string(i), std::string("bad name: ") + e.what());
            }
        }
        return out;
    }
    template <class F>
    auto each(const char* key, F f) const {
        const Json& v = field(key);
        if (!v.is_array()) fail(path_ + "/" + key, "expected an array");
        std::vector<decltype(f(std::declval<Reader>()))> out;
        for (std::size_t i = 0; i < v.size(); ++i) out.push_back(f(Reader(v[i], path_ + "/" + key + "/" + std::to_string(i), cache_)));
        return out;
    }
    Abstraction abstraction(const char* key) const {
        Reader a = sub(key);
        Name b = a.name("binder");
        Abstraction out = Abstraction::bind(b, a.process("body"));
        out.hint = b.is_generated() ? b.hint() : b.text();
        return out;
    }

    [[noreturn]] static void fail(const std::string& where, const std::string& what) {
        throw CertFormatError(where.empty() ? "/" : where, what);
    }

private:
    const Json& j_;
    std::string path_;
    std::shared_ptr<Cache> cache_;
};

Action read_action(const Reader& r) {
    std::string kind = r.string("kind");
    if (kind == "tau") return Action::tau();
    Name x = r.name("channel");
    if (kind == "free-output") return Action::free_out(x, r.name("payload"));
    if (kind == "free-input") return Action::free_in(x, r.name("payload"));
    if (kind == "input") return Action::bound_in(x);
    if (kind == "bound-output") return Action::bound_out(x);
    Reader::fail(r.path() + "/kind", "unknown action kind '" + kind + "'");
}

Transition read_transition(const Reader& r) {
    Action a = read_action(r.sub("action"));
    if (a.is_bound()) return Transition::bound(a, r.abstraction("abstraction"));
    return Transition::free(a, r.process("target"));
}

CongCert read_cong(const Reader& r) {
    std::string rule = r.string("rule");
    auto parsed = cong_rule_from_string(rule);
    if (!parsed) Reader::fail(r.path() + "/rule", "unknown congruence rule '" + rule + "'");
    Reader c = r.sub("conclusion");
    return CongCert(*parsed, c.process("lhs"), c.process("rhs"), r.each("premises", read_cong),
                    r.optional_name("binder"));
}

StepCert read_step(const Reader& r) {
    std::string rule = r.string("rule");
    auto parsed = step_rule_from_string(rule);
    if (!parsed) Reader::fail(r.path() + "/rule", "unknown transition rule '" + rule + "'");
    Reader c = r.sub("conclusion");
    return StepCert(*parsed, c.process("source"), read_transition(c), r.each("premises", read_step),
                    r.optional_name("binder"));
}

RedCert read_red(const Reader& r) {
    std::string rule = r.string("rule");
    auto parsed = red_rule_from_string(rule);
    if (!parsed) Reader::fail(r.path() + "/rule", "unknown reduction rule '" + rule + "'");
    Reader c = r.sub("conclusion");
    CongCert left, right;
    if (r.has("left")) left = read_cong(r.sub("left"));
    if (r.has("right")) right = read_cong(r.sub("right"));
    return RedCert(*parsed, c.process("lhs"), c.process("rhs"), r.each("premises", read_red),
                   r.optional_name("binder"), left, right);
}

TelescopeDecomposition read_telescope(const Reader& r) {
    TelescopeDecomposition d;
    std::string kind = r.string("decomposition");
    if (kind == "input")
        d.kind = DecompositionKind::Input;
    else if (kind == "free-output")
        d.kind = DecompositionKind::FreeOutput;
    else if (kind == "bound-output")
        d.kind = DecompositionKind::BoundOutput;
    else
        Reader::fail(r.path() + "/decomposition", "unknown decomposition kind '" + kind + "'");
    d.subject = r.name("subject");
    d.object = r.name("object");
    d.binders = r.names("binders");
    d.R = r.process("R");
    d.S = r.process("S");
    d.cert_source = read_cong(r.sub("cert_source"));
    d.cert_target = read_cong(r.sub("cert_target"));
    return d;
}

RedexDecomposition read_redex(const Reader& r) {
    RedexDecomposition d;
    d.subject = r.name("subject");
    d.payload = r.name("payload");
    d.var = r.name("var");
    d.binders = r.names("binders");
    d.R1 = r.process("R1");
    d.R2 = r.process("R2");
    d.S = r.process("S");
    d.cert_source = read_cong(r.sub("cert_source"));
    d.cert_target = read_cong(r.sub("cert_target"));
    return d;
}

Json document(const char* kind, Json cert) { return Json{{"kind", kind}, {"cert", std::move(cert)}}; }

CheckResult prefixed(CheckResult r, const std::string& prefix) {
    if (!r.ok) r.path = prefix + (r.path.empty() ? "" : "/" + r.path);
    return r;
}

CheckResult check_pair(const CongCert& c, const Process& lhs, const Process& rhs, const std::string& where) {
    return prefixed(check_cong(c, lhs, rhs), where);
}

}  // namespace

Json to_json(const Action& a) {
    Json j{{"kind", to_string(a.kind)}};
    if (!a.is_tau()) j["channel"] = a.channel.text();
    if (a.kind == Action::Kind::FreeOut || a.kind == Action::Kind::FreeIn) j["payload"] = a.payload.text();
    return j;
}

Json to_json(const Transition& t) {
    Json j{{"action", to_json(t.action)}};
    if (t.is_bound())
        j["abstraction"] = abstraction_json(t.abs);
    else
        j["target"] = process_text(t.target);
    return j;
}

Json to_json(const CongCert& c) {
    Json prem = Json::array();
    for (const auto& p : c.premises()) prem.push_back(to_json(p));
    Json j{{"rule", to_string(c.rule())},
           {"conclusion", {{"lhs", process_text(c.lhs())}, {"rhs", process_text(c.rhs())}}},
           {"premises", std::move(prem)}};
    return optional_binder(std::move(j), c.binder());
}

Json to_json(const StepCert& c) {
    Json prem = Json::array();
    for (const auto& p : c.premises()) prem.push_back(to_json(p));
    Json concl = to_json(c.transition());
    concl["source"] = process_text(c.source());
    Json j{{"rule", to_string(c.rule())}, {"conclusion", std::move(concl)}, {"premises", std::move(prem)}};
    return optional_binder(std::move(j), c.binder());
}

Json to_json(const RedCert& c) {
    Json prem = Json::array();
    for (const auto& p : c.premises()) prem.push_back(to_json(p));
    Json j{{"rule", to_string(c.rule())},
           {"conclusion", {{"lhs", process_text(c.lhs())}, {"rhs", process_text(c.rhs())}}},
           {"premises", std::move(prem)}};
    if (!c.left_cong().empty()) j["left"] = to_json(c.left_cong());
    if (!c.right_cong().empty()) j["right"] = to_json(c.right_cong());
    return optional_binder(std::move(j), c.binder());
}

Json to_json(const TelescopeDecomposition& d) {
    return Json{{"decomposition", to_string(d.kind)},
                {"subject", d.subject.text()},
                {"object", d.object.text()},
                {"binders", names_json(d.binders)},
                {"R", process_text(d.R)},
                {"S", process_text(d.S)},
                {"cert_source", to_json(d.cert_source)},
                {"cert_target", to_json(d.cert_target)}};
}

Json to_json(const RedexDecomposition& d) {
    return Json{{"subject", d.subject.text()},
                {"payload", d.payload.text()},
                {"var", d.var.text()},
                {"binders", names_json(d.binders)},
                {"R1", process_text(d.R1)},
                {"R2", process_text(d.R2)},
                {"S", process_text(d.S)},
                {"cert_source", to_json(d.cert_source)},
                {"cert_target", to_json(d.cert_target)}};
}

Action action_from_json(const Json& j) { return read_action(Reader(j, "")); }
Transition transition_from_json(const Json& j) { return read_transition(Reader(j, "")); }
CongCert cong_from_json(const Json& j) { return read_cong(Reader(j, "")); }
StepCert step_from_json(const Json& j) { return read_step(Reader(j, "")); }
RedCert red_from_json(const Json& j) { return read_red(Reader(j, "")); }
TelescopeDecomposition telescope_from_json(const Json& j) { return read_telescope(Reader(j, "")); }
RedexDecomposition redex_from_json(const Json& j) { return read_redex(Reader(j, "")); }

Json cong_document(const CongCert& c) { return document("cong", to_json(c)); }
Json step_document(const StepCert& c, Semantics sem) {
    Json d = document("step", to_json(c));
    d["semantics"] = to_string(sem);
    return d;
}
Json red_document(const RedCert& c) { return document("red", to_json(c)); }
Json telescope_document(const TelescopeDecomposition& d) { return document("telescope", to_json(d)); }
Json redex_document(const RedexDecomposition& d) { return document("redex", to_json(d)); }

CheckResult check_document(const Json& doc) {
    try {
        Reader top(doc, "");
        std::string kind = top.string("kind");
        Reader body = top.sub("cert");
        if (kind == "cong") return prefixed(check_cong(read_cong(body)), "/cert");
        if (kind == "red") return prefixed(check_red(read_red(body)), "/cert");
        if (kind == "step") {
            Semantics sem = Semantics::Late;
            if (top.has("semantics")) {
                std::string s = top.string("semantics");
                if (s == "early")
                    sem = Semantics::Early;
                else if (s != "late")
                    return CheckResult::fail("/semantics", "unknown semantics '" + s + "'");
            }
            return prefixed(check_step(read_step(body), sem), "/cert");
        }
        if (kind == "telescope") {
            TelescopeDecomposition d = read_telescope(body);
            CheckResult r = check_pair(d.cert_source, d.cert_source.lhs(), d.source_shape(), "/cert/cert_source");
            if (!r) return r;
            return check_pair(d.cert_target, d.cert_target.lhs(), d.target_shape(), "/cert/cert_target");
        }
        if (kind == "redex") {
            RedexDecomposition d = read_redex(body);
            CheckResult r = check_pair(d.cert_source, d.cert_source.lhs(), d.source_shape(), "/cert/cert_source");
            if (!r) return r;
            return check_pair(d.cert_target, d.cert_target.lhs(), d.target_shape(), "/cert/cert_target");
        }
        return CheckResult::fail("/kind", "unknown certificate kind '" + kind + "'");
    } catch (const CertFormatError& e) {
        return CheckResult::fail(e.where(), e.what());
    } catch (const ContractViolation& e) {
        return CheckResult::fail("/", e.what());
    }
}

bool cert_equal(const CongCert& a, const CongCert& b) {
    if (a.empty() || b.empty()) return a.empty() == b.empty();
    if (a.rule() != b.rule() || !(a.lhs() == b.lhs()) || !(a.rhs() == b.rhs()) || a.binder() != b.binder() ||
        a.premises().size() != b.premises().size())
        return false;
    for (std::size_t i = 0; i < a.premises().size(); ++i)
        if (!cert_equal(a.premises()[i], b.premises()[i])) return false;
    return true;
}

bool cert_equal(const StepCert& a, const StepCert& b) {
    if (a.empty() || b.empty()) return a.empty() == b.empty();
    if (a.rule() != b.rule() || !(a.source() == b.source()) || !(a.transition() == b.transition()) ||
        a.binder() != b.binder() || a.premises().size() != b.premises().size())
        return false;
    for (std::size_t i = 0; i < a.premises().size(); ++i)
        if (!cert_equal(a.premises()[i], b.premises()[i])) return false;
    return true;
}

bool cert_equal(const RedCert& a, const RedCert& b) {
    if (a.empty() || b.empty()) return a.empty() == b.empty();
    if (a.rule() != b.rule() || !(a.lhs() == b.lhs()) || !(a.rhs() == b.rhs()) || a.binder() != b.binder() ||
        a.premises().size() != b.premises().size() || !cert_equal(a.left_cong(), b.left_cong()) ||
        !cert_equal(a.right_cong(), b.right_cong()))
        return false;
    for (std::size_t i = 0; i < a.premises().size(); ++i)
        if (!cert_equal(a.premises()[i], b.premises()[i])) return false;
    return true;
}

bool cert_equal(const TelescopeDecomposition& a, const TelescopeDecomposition& b) {
    return a.kind == b.kind && a.subject == b.subject && a.object == b.object && a.binders == b.binders &&
           a.R == b.R && a.S == b.S && cert_equal(a.cert_source, b.cert_source) &&
           cert_equal(a.cert_target, b.cert_target);
}

bool cert_equal(const RedexDecomposition& a, const RedexDecomposition& b) {
    return a.subject == b.subject && a.payload == b.payload && a.var == b.var && a.binders == b.binders &&
           a.R1 == b.R1 && a.R2 == b.R2 && a.S == b.S && cert_equal(a.cert_source, b.cert_source) &&
           cert_equal(a.cert_target, b.cert_target);
}

}  // namespace pi
