#pragma once

// Names, processes and abstractions of the finite pi-calculus fragment
//   P ::= 0 | x(y).P | x!y.P | P|P | nu x.P
//
// Bound occurrences are stored as de Bruijn indices (locally nameless), so
// alpha-equivalence is structural equality and substitution of free names
// cannot capture. Binder nodes keep the source hint for printing only.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <memory>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace pi {

/// Raised when a caller breaks an operation's precondition.
class ContractViolation : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// An opaque channel name. User names are interned text; generated names
/// carry a hint and a counter and print as `hint#k`, a family the surface
/// grammar reserves for the tool.
class Name {
public:
    Name() = default;

    static Name intern(std::string_view text);
    static Name generated(std::string_view hint, std::uint32_t counter);

    std::string text() const;
    /// Text without the generated-name suffix.
    std::string hint() const;
    bool is_generated() const { return (bits_ >> 63) != 0; }
    std::uint64_t id() const { return bits_; }
    bool valid() const { return bits_ != 0; }

    auto operator<=>(const Name&) const = default;

private:
    explicit Name(std::uint64_t bits) : bits_(bits) {}
    std::uint64_t bits_ = 0;
};

std::ostream& operator<<(std::ostream& os, Name n);

/// Sorted set of names backed by a flat vector.
class NameSet {
public:
    NameSet() = default;
    NameSet(std::initializer_list<Name> names);

    bool contains(Name n) const;
    void insert(Name n);
    void erase(Name n);
    void insert_all(const NameSet& other);
    bool empty() const { return items_.empty(); }
    std::size_t size() const { return items_.size(); }
    auto begin() const { return items_.begin(); }
    auto end() const { return items_.end(); }
    const std::vector<Name>& items() const { return items_; }

    bool operator==(const NameSet&) const = default;
    bool subset_of(const NameSet& other) const;

    static NameSet unite(const NameSet& a, const NameSet& b);

private:
    std::vector<Name> items_;
};

std::ostream& operator<<(std::ostream& os, const NameSet& s);

/// Deterministic source of fresh names. Every name handed out avoids the
/// seed set and every name handed out before.
class NameSupply {
public:
    NameSupply() = default;
    explicit NameSupply(NameSet avoid) : avoid_(std::move(avoid)) {}

    Name next(std::string_view hint = "n");
    void avoid(Name n) { avoid_.insert(n); }
    void avoid(const NameSet& names) { avoid_.insert_all(names); }
    const NameSet& avoided() const { return avoid_; }

private:
    NameSet avoid_;
    std::uint32_t counter_ = 0;
};

/// A name drawn from the reserved family that is not in `avoid`.
Name fresh_name(const NameSet& avoid, std::string_view hint = "n");

/// Occurrence of a name inside a term: free, or a de Bruijn index.
struct Ref {
    bool bound = false;
    std::uint32_t index = 0;
    Name name;

    static Ref free(Name n) { return Ref{false, 0, n}; }
    static Ref local(std::uint32_t i) { return Ref{true, i, Name{}}; }
    bool operator==(const Ref& o) const {
        return bound == o.bound && (bound ? index == o.index : name == o.name);
    }
};

enum class Kind : std::uint8_t { Nil, In, Out, Par, Res };

class Process;
struct ProcessNode;

/// Immutable, shared process term. Equality is alpha-equivalence.
class Process {
public:
    /// The inert process 0.
    Process();

    static Process nil() { return Process(); }
    /// x(var).body, binding `var` in `body`.
    static Process input(Name channel, Name var, const Process& body);
    /// x!y.cont
    static Process output(Name channel, Name payload, const Process& cont);
    static Process par(const Process& left, const Process& right);
    /// nu var. body
    static Process res(Name var, const Process& body);

    // Raw locally nameless constructors; bodies of In/Res see the binder as
    // index 0.
    static Process make_input(Ref channel, std::string hint, const Process& body);
    static Process make_output(Ref channel, Ref payload, const Process& cont);
    static Process make_res(std::string hint, const Process& body);

    Kind kind() const;
    bool is_nil() const { return kind() == Kind::Nil; }
    const Ref& channel() const;
    const Ref& payload() const;
    /// Continuation of a prefix, raw body of a binder, or left of a Par.
    const Process& body() const;
    const Process& left() const;
    const Process& right() const;
    const std::string& hint() const;

    /// Body of an In/Res node with its binder replaced by `n`.
    Process open_body(Name n) const;

    const NameSet& free_names() const;
    bool has_free(Name n) const { return free_names().contains(n); }
    /// One past the largest dangling de Bruijn index; 0 when locally closed.
    std::uint32_t loose() const;
    bool locally_closed() const { return loose() == 0; }
    std::size_t hash() const;
    std::uint32_t size() const;
    std::uint32_t depth() const;

    bool operator==(const Process& other) const;
    bool same_node(const Process& other) const { return node_ == other.node_; }

private:
    explicit Process(std::shared_ptr<const ProcessNode> node) : node_(std::move(node)) {}
    std::shared_ptr<const ProcessNode> node_;
    friend struct ProcessBuilder;
};

struct ProcessHash {
    std::size_t operator()(const Process& p) const { return p.hash(); }
};

/// A process with one distinguished binder at index 0, the result of a
/// bound transition.
struct Abstraction {
    Process body;
    std::string hint = "w";

    Process instantiate(Name n) const;
    NameSet free_names() const { return body.free_names(); }
    bool operator==(const Abstraction& other) const { return body == other.body; }

    /// Abstract `n` out of a closed process.
    static Abstraction bind(Name n, const Process& p);
};

/// Replace the dangling index `depth` by `n`.
Process open_at(const Process& p, Name n, std::uint32_t depth = 0);
/// Turn free occurrences of `n` into the dangling index `depth`.
Process close_at(const Process& p, Name n, std::uint32_t depth = 0);

NameSet free_names(const Process& p);
/// Capture-avoiding substitution p{new_name/old_name}.
Process substitute(const Process& p, Name new_name, Name old_name);
bool alpha_eq(const Process& p, const Process& q);

/// Left-associated parallel chain; 0 for an empty list.
Process par_chain(const std::vector<Process>& parts);
/// nu names[0]. nu names[1]. ... body
Process wrap_res(const std::vector<Name>& names, const Process& body);

// Actions. Bound actions carry only their channel; the bound name lives in
// the transition's abstraction. FreeIn belongs to the early semantics.
struct Action {
    enum class Kind : std::uint8_t { Tau, FreeOut, FreeIn, BoundIn, BoundOut };
    Kind kind = Kind::Tau;
    Name channel;
    Name payload;

    static Action tau() { return {}; }
    static Action free_out(Name x, Name y) { return {Kind::FreeOut, x, y}; }
    static Action free_in(Name x, Name y) { return {Kind::FreeIn, x, y}; }
    static Action bound_in(Name x) { return {Kind::BoundIn, x, {}}; }
    static Action bound_out(Name x) { return {Kind::BoundOut, x, {}}; }

    bool is_bound() const { return kind == Kind::BoundIn || kind == Kind::BoundOut; }
    bool is_tau() const { return kind == Kind::Tau; }
    NameSet free_names() const;
    /// Names of the action; the abstracted bound name is never among them.
    NameSet names() const { return free_names(); }
    bool mentions(Name n) const;
    bool operator==(const Action& o) const;
};

const char* to_string(Action::Kind k);

}  // namespace pi

template <>
struct std::hash<pi::Name> {
    std::size_t operator()(pi::Name n) const noexcept { return std::hash<std::uint64_t>{}(n.id()); }
};
