#include "pi/syntax.hpp"

#include <algorithm>
#include <charconv>
#include <mutex>
#include <unordered_map>

namespace pi {

namespace {

constexpr std::uint64_t kGeneratedBit = std::uint64_t{1} << 63;

class NameTable {
public:
    std::uint32_t index_of(std::string_view text) {
        std::lock_guard lock(mutex_);
        auto it = index_.find(std::string(text));
        if (it != index_.end()) return it->second;
        auto id = static_cast<std::uint32_t>(texts_.size());
        texts_.emplace_back(text);
        index_.emplace(texts_.back(), id);
        return id;
    }

    std::string text_of(std::uint32_t id) {
        std::lock_guard lock(mutex_);
        return texts_.at(id);
    }

private:
    std::mutex mutex_;
    std::vector<std::string> texts_;
    std::unordered_map<std::string, std::uint32_t> index_;
};

NameTable& table() {
    static NameTable t;
    return t;
}

}  // namespace

Name Name::intern(std::string_view text) {
    auto hash_pos = text.rfind('#');
    if (hash_pos != std::string_view::npos && hash_pos > 0 && hash_pos + 1 < text.size()) {
        std::uint32_t counter = 0;
        auto digits = text.substr(hash_pos + 1);
        auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), counter);
        if (ec == std::errc() && ptr == digits.data() + digits.size())
            return generated(text.substr(0, hash_pos), counter);
    }
    return Name(std::uint64_t{table().index_of(text)} + 1);
}

Name Name::generated(std::string_view hint, std::uint32_t counter) {
    std::uint64_t h = table().index_of(hint);
    return Name(kGeneratedBit | (h << 32) | counter);
}

std::string Name::text() const {
    if (!valid()) return "<invalid>";
    if (is_generated()) return hint() + "#" + std::to_string(bits_ & 0xffffffffu);
    return table().text_of(static_cast<std::uint32_t>(bits_ - 1));
}

std::string Name::hint() const {
    if (!valid()) return "n";
    if (is_generated()) return table().text_of(static_cast<std::uint32_t>((bits_ & ~kGeneratedBit) >> 32));
    return text();
}

std::ostream& operator<<(std::ostream& os, Name n) { return os << n.text(); }

NameSet::NameSet(std::initializer_list<Name> names) {
    for (Name n : names) insert(n);
}

bool NameSet::contains(Name n) const { return std::binary_search(items_.begin(), items_.end(), n); }

void NameSet::insert(Name n) {
    auto it = std::lower_bound(items_.begin(), items_.end(), n);
    if (it == items_.end() || *it != n) items_.insert(it, n);
}

void NameSet::erase(Name n) {
    auto it = std::lower_bound(items_.begin(), items_.end(), n);
    if (it != items_.end() && *it == n) items_.erase(it);
}

void NameSet::insert_all(const NameSet& other) {
    if (other.empty()) return;
    if (empty()) {
        items_ = other.items_;
        return;
    }
    *this = unite(*this, other);
}

bool NameSet::subset_of(const NameSet& other) const {
    return std::includes(other.items_.begin(), other.items_.end(), items_.begin(), items_.end());
}

NameSet NameSet::unite(const NameSet& a, const NameSet& b) {
    NameSet out;
    out.items_.reserve(a.size() + b.size());
    std::set_union(a.items_.begin(), a.items_.end(), b.items_.begin(), b.items_.end(),
                   std::back_inserter(out.items_));
    return out;
}

std::ostream& operator<<(std::ostream& os, const NameSet& s) {
    os << '{';
    bool first = true;
    for (Name n : s) {
        if (!first) os << ", ";
        first = false;
        os << n;
    }
    return os << '}';
}

Name NameSupply::next(std::string_view hint) {
    if (hint.empty()) hint = "n";
    for (;;) {
        Name candidate = Name::generated(hint, counter_++);
        if (!avoid_.contains(candidate)) {
            avoid_.insert(candidate);
            return candidate;
        }
    }
}

Name fresh_name(const NameSet& avoid, std::string_view hint) {
    NameSupply supply(avoid);
    return supply.next(hint);
}

// ---------------------------------------------------------------------------

struct ProcessNode {
    Kind kind = Kind::Nil;
    Ref chan;
    Ref payload;
    std::string hint;
    Process a;
    Process b;
    NameSet fn;
    std::uint32_t loose = 0;
    std::uint32_t size = 1;
    std::uint32_t depth = 0;
    std::size_t hash = 0;
};

namespace {

std::size_t mix(std::size_t seed, std::size_t v) {
    return seed ^ (v + 0x9e3779b97f4a7c15ull + (seed << 6) + (seed >> 2));
}

std::size_t hash_ref(const Ref& r) {
    return r.bound ? mix(0x51ed27, r.index) : mix(0x7a11, std::hash<Name>{}(r.name));
}

std::uint32_t ref_loose(const Ref& r) { return r.bound ? r.index + 1 : 0; }

void add_ref_fn(NameSet& fn, const Ref& r) {
    if (!r.bound) fn.insert(r.name);
}

std::uint32_t under_binder(std::uint32_t loose) { return loose == 0 ? 0 : loose - 1; }

}  // namespace

struct ProcessBuilder {
    static Process nil_node() {
        static const Process nil_process(std::make_shared<const ProcessNode>(ProcessNode{
            Kind::Nil, {}, {}, {}, Process(nullptr), Process(nullptr), {}, 0, 1, 0, 0x2545f491}));
        return nil_process;
    }

    static Process make(ProcessNode n) { return Process(std::make_shared<const ProcessNode>(std::move(n))); }

    static Process input(Ref chan, std::string hint, const Process& body) {
        ProcessNode n;
        n.kind = Kind::In;
        n.chan = chan;
        n.hint = std::move(hint);
        n.a = body;
        n.b = Process::nil();
        n.fn = body.free_names();
        add_ref_fn(n.fn, chan);
        n.loose = std::max(ref_loose(chan), under_binder(body.loose()));
        n.size = 1 + body.size();
        n.depth = 1 + body.depth();
        n.hash = mix(mix(0x1111, hash_ref(chan)), body.hash());
        return make(std::move(n));
    }

    static Process output(Ref chan, Ref payload, const Process& cont) {
        ProcessNode n;
        n.kind = Kind::Out;
        n.chan = chan;
        n.payload = payload;
        n.a = cont;
        n.b = Process::nil();
        n.fn = cont.free_names();
        add_ref_fn(n.fn, chan);
        add_ref_fn(n.fn, payload);
        n.loose = std::max({ref_loose(chan), ref_loose(payload), cont.loose()});
        n.size = 1 + cont.size();
        n.depth = 1 + cont.depth();
        n.hash = mix(mix(mix(0x2222, hash_ref(chan)), hash_ref(payload)), cont.hash());
        return make(std::move(n));
    }

    static Process par(const Process& l, const Process& r) {
        ProcessNode n;
        n.kind = Kind::Par;
        n.a = l;
        n.b = r;
        n.fn = NameSet::unite(l.free_names(), r.free_names());
        n.loose = std::max(l.loose(), r.loose());
        n.size = 1 + l.size() + r.size();
        n.depth = 1 + std::max(l.depth(), r.depth());
        n.hash = mix(mix(0x3333, l.hash()), r.hash());
        return make(std::move(n));
    }

    static Process res(std::string hint, const Process& body) {
        ProcessNode n;
        n.kind = Kind::Res;
        n.hint = std::move(hint);
        n.a = body;
        n.b = Process::nil();
        n.fn = body.free_names();
        n.loose = under_binder(body.loose());
        n.size = 1 + body.size();
        n.depth = 1 + body.depth();
        n.hash = mix(0x4444, body.hash());
        return make(std::move(n));
    }

    static const ProcessNode& node(const Process& p) { return *p.node_; }
};

Process::Process() : Process(ProcessBuilder::nil_node()) {}

Process Process::input(Name channel, Name var, const Process& body) {
    return ProcessBuilder::input(Ref::free(channel), var.hint(), close_at(body, var));
}

Process Process::output(Name channel, Name payload, const Process& cont) {
    return ProcessBuilder::output(Ref::free(channel), Ref::free(payload), cont);
}

Process Process::par(const Process& left, const Process& right) { return ProcessBuilder::par(left, right); }

Process Process::res(Name var, const Process& body) {
    return ProcessBuilder::res(var.hint(), close_at(body, var));
}

Process Process::make_input(Ref channel, std::string hint, const Process& body) {
    return ProcessBuilder::input(channel, std::move(hint), body);
}

Process Process::make_output(Ref channel, Ref payload, const Process& cont) {
    return ProcessBuilder::output(channel, payload, cont);
}

Process Process::make_res(std::string hint, const Process& body) {
    return ProcessBuilder::res(std::move(hint), body);
}

Kind Process::kind() const { return node_->kind; }
const Ref& Process::channel() const { return node_->chan; }
const Ref& Process::payload() const { return node_->payload; }
const Process& Process::body() const { return node_->a; }
const Process& Process::left() const { return node_->a; }
const Process& Process::right() const { return node_->b; }
const std::string& Process::hint() const { return node_->hint; }
const NameSet& Process::free_names() const { return node_->fn; }
std::uint32_t Process::loose() const { return node_->loose; }
std::size_t Process::hash() const { return node_->hash; }
std::uint32_t Process::size() const { return node_->size; }
std::uint32_t Process::depth() const { return node_->depth; }

Process Process::open_body(Name n) const {
    if (kind() != Kind::In && kind() != Kind::Res)
        throw ContractViolation("open_body on a process without a binder");
    return open_at(body(), n, 0);
}

bool Process::operator==(const Process& other) const {
    if (node_ == other.node_) return true;
    const ProcessNode& a = *node_;
    const ProcessNode& b = *other.node_;
    if (a.hash != b.hash || a.kind != b.kind || a.size != b.size) return false;
    switch (a.kind) {
        case Kind::Nil: return true;
        case Kind::In: return a.chan == b.chan && a.a == b.a;
        case Kind::Out: return a.chan == b.chan && a.payload == b.payload && a.a == b.a;
        case Kind::Par: return a.a == b.a && a.b == b.b;
        case Kind::Res: return a.a == b.a;
    }
    return false;
}

Process open_at(const Process& p, Name n, std::uint32_t depth) {
    if (p.loose() <= depth) return p;
    auto fix = [&](const Ref& r) { return (r.bound && r.index == depth) ? Ref::free(n) : r; };
    switch (p.kind()) {
        case Kind::Nil: return p;
        case Kind::In: return Process::make_input(fix(p.channel()), p.hint(), open_at(p.body(), n, depth + 1));
        case Kind::Out: return Process::make_output(fix(p.channel()), fix(p.payload()), open_at(p.body(), n, depth));
        case Kind::Par: return Process::par(open_at(p.left(), n, depth), open_at(p.right(), n, depth));
        case Kind::Res: return Process::make_res(p.hint(), open_at(p.body(), n, depth + 1));
    }
    return p;
}

Process close_at(const Process& p, Name n, std::uint32_t depth) {
    if (!p.has_free(n)) return p;
    auto fix = [&](const Ref& r) { return (!r.bound && r.name == n) ? Ref::local(depth) : r; };
    switch (p.kind()) {
        case Kind::Nil: return p;
        case Kind::In: return Process::make_input(fix(p.channel()), p.hint(), close_at(p.body(), n, depth + 1));
        case Kind::Out: return Process::make_output(fix(p.channel()), fix(p.payload()), close_at(p.body(), n, depth));
        case Kind::Par: return Process::par(close_at(p.left(), n, depth), close_at(p.right(), n, depth));
        case Kind::Res: return Process::make_res(p.hint(), close_at(p.body(), n, depth + 1));
    }
    return p;
}

Process Abstraction::instantiate(Name n) const { return open_at(body, n, 0); }

Abstraction Abstraction::bind(Name n, const Process& p) { return Abstraction{close_at(p, n, 0), n.hint()}; }

NameSet free_names(const Process& p) { return p.free_names(); }

Process substitute(const Process& p, Name new_name, Name old_name) {
    if (new_name == old_name || !p.has_free(old_name)) return p;
    auto fix = [&](const Ref& r) { return (!r.bound && r.name == old_name) ? Ref::free(new_name) : r; };
    switch (p.kind()) {
        case Kind::Nil: return p;
        case Kind::In:
            return Process::make_input(fix(p.channel()), p.hint(), substitute(p.body(), new_name, old_name));
        case Kind::Out:
            return Process::make_output(fix(p.channel()), fix(p.payload()), substitute(p.body(), new_name, old_name));
        case Kind::Par:
            return Process::par(substitute(p.left(), new_name, old_name), substitute(p.right(), new_name, old_name));
        case Kind::Res: return Process::make_res(p.hint(), substitute(p.body(), new_name, old_name));
    }
    return p;
}

bool alpha_eq(const Process& p, const Process& q) { return p == q; }

Process par_chain(const std::vector<Process>& parts) {
    if (parts.empty()) return Process::nil();
    Process acc = parts.front();
    for (std::size_t i = 1; i < parts.size(); ++i) acc = Process::par(acc, parts[i]);
    return acc;
}

Process wrap_res(const std::vector<Name>& names, const Process& body) {
    Process acc = body;
    for (auto it = names.rbegin(); it != names.rend(); ++it) acc = Process::res(*it, acc);
    return acc;
}

NameSet Action::free_names() const {
    switch (kind) {
        case Kind::Tau: return {};
        case Kind::FreeOut:
        case Kind::FreeIn: return NameSet{channel, payload};
        case Kind::BoundIn:
        case Kind::BoundOut: return NameSet{channel};
    }
    return {};
}

bool Action::mentions(Name n) const {
    switch (kind) {
        case Kind::Tau: return false;
        case Kind::FreeOut:
        case Kind::FreeIn: return channel == n || payload == n;
        default: return channel == n;
    }
}

bool Action::operator==(const Action& o) const {
    if (kind != o.kind) return false;
    switch (kind) {
        case Kind::Tau: return true;
        case Kind::FreeOut:
        case Kind::FreeIn: return channel == o.channel && payload == o.payload;
        default: return channel == o.channel;
    }
}

const char* to_string(Action::Kind k) {
    switch (k) {
        case Action::Kind::Tau: return "tau";
        case Action::Kind::FreeOut: return "free-output";
        case Action::Kind::FreeIn: return "free-input";
        case Action::Kind::BoundIn: return "input";
        case Action::Kind::BoundOut: return "bound-output";
    }
    return "?";
}

}  // namespace pi
