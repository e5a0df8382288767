#include "pi/frontend.hpp"

#include <cctype>
#include <sstream>
#include <vector>

namespace pi {

ParseError::ParseError(const std::string& message, SourceSpan span, std::set<std::string> expected)
    : std::runtime_error(message), span_(span), expected_(std::move(expected)) {}

std::string ParseError::render(std::string_view input) const {
    std::ostringstream os;
    os << "parse error at " << span_.begin << ".." << span_.end << ": " << what();
    if (!expected_.empty()) {
        os << " (expected";
        for (const auto& e : expected_) os << ' ' << e;
        os << ')';
    }
    os << '\n' << input << '\n' << std::string(span_.begin, ' ')
       << std::string(std::max<std::size_t>(1, span_.end - span_.begin), '^');
    return os.str();
}

namespace {

bool name_start(char c) { return (c >= 'a' && c <= 'z') || c == '_'; }
bool name_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\''; }

class Parser {
public:
    explicit Parser(std::string_view text) : text_(text) {}

    Process parse_all() {
        Process p = parse_par();
        skip_ws();
        if (pos_ != text_.size()) fail("unexpected input", {"'|'", "end of input"});
        return p;
    }

    Name parse_single_name() {
        skip_ws();
        Name n = expect_name();
        skip_ws();
        if (pos_ != text_.size()) fail("unexpected input after name", {"end of input"});
        return n;
    }

private:
    std::string_view text_;
    std::size_t pos_ = 0;

    [[noreturn]] void fail(const std::string& msg, std::set<std::string> expected) {
        std::size_t end = pos_;
        if (end < text_.size()) {
            if (name_char(text_[end]))
                while (end < text_.size() && name_char(text_[end])) ++end;
            else
                ++end;
        }
        throw ParseError(msg, SourceSpan{pos_, end}, std::move(expected));
    }

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool peek(char c) {
        skip_ws();
        return pos_ < text_.size() && text_[pos_] == c;
    }

    void expect(char c, const char* label) {
        if (!peek(c)) fail(std::string("missing ") + label, {std::string("'") + c + "'"});
        ++pos_;
    }

    std::string_view peek_word() {
        skip_ws();
        std::size_t end = pos_;
        if (end < text_.size() && name_start(text_[end])) {
            while (end < text_.size() && name_char(text_[end])) ++end;
        }
        return text_.substr(pos_, end - pos_);
    }

    Name expect_name() {
        skip_ws();
        if (pos_ >= text_.size() || !name_start(text_[pos_])) fail("expected a name", {"name"});
        std::size_t start = pos_;
        while (pos_ < text_.size() && name_char(text_[pos_])) ++pos_;
        if (pos_ < text_.size() && text_[pos_] == '#') {
            std::size_t digits = pos_ + 1;
            std::size_t end = digits;
            while (end < text_.size() && std::isdigit(static_cast<unsigned char>(text_[end]))) ++end;
            if (end == digits) {
                pos_ = digits;
                fail("expected digits after '#'", {"digit"});
            }
            pos_ = end;
        }
        std::string_view word = text_.substr(start, pos_ - start);
        if (word == "nu") {
            pos_ = start;
            fail("'nu' is a keyword", {"name"});
        }
        return Name::intern(word);
    }

    Process parse_par() {
        Process acc = parse_unary();
        while (peek('|')) {
            ++pos_;
            acc = Process::par(acc, parse_unary());
        }
        return acc;
    }

    Process parse_unary() {
        skip_ws();
        if (pos_ >= text_.size()) fail("unexpected end of input", {"'0'", "'('", "'nu'", "name"});
        char c = text_[pos_];
        if (c == '0') {
            ++pos_;
            return Process::nil();
        }
        if (c == '(') {
            ++pos_;
            Process p = parse_par();
            expect(')', "')'");
            return p;
        }
        if (peek_word() == "nu") {
            pos_ += 2;
            Name var = expect_name();
            expect('.', "'.' after restriction");
            Process body = parse_par();
            return Process::res(var, body);
        }
        if (!name_start(c)) fail("expected a process", {"'0'", "'('", "'nu'", "name"});
        Name chan = expect_name();
        if (peek('!')) {
            ++pos_;
            Name payload = expect_name();
            expect('.', "'.P' after output prefix");
            Process cont = parse_unary();
            return Process::output(chan, payload, cont);
        }
        if (peek('(')) {
            ++pos_;
            Name var = expect_name();
            expect(')', "')'");
            expect('.', "'.P' after input prefix");
            Process cont = parse_unary();
            return Process::input(chan, var, cont);
        }
        fail("expected a prefix after channel name", {"'!'", "'('"});
    }
};

bool valid_user_name(const std::string& s) {
    if (s.empty() || !(s[0] >= 'a' && s[0] <= 'z') || s == "nu") return false;
    for (char c : s)
        if (!name_char(c)) return false;
    return true;
}

class Printer {
public:
    explicit Printer(const Process& root) : avoid_texts_() {
        for (Name n : root.free_names()) avoid_texts_.insert(n.text());
    }

    void emit(const Process& p, bool trailing, bool atomic) {
        switch (p.kind()) {
            case Kind::Nil: out_ << '0'; return;
            case Kind::Out:
                out_ << ref_text(p.channel()) << '!' << ref_text(p.payload()) << '.';
                emit(p.body(), trailing, true);
                return;
            case Kind::In: {
                std::string v = choose(p.hint());
                out_ << ref_text(p.channel()) << '(' << v << ").";
                scope_.push_back(v);
                emit(p.body(), trailing, true);
                scope_.pop_back();
                return;
            }
            case Kind::Par:
                if (atomic) {
                    out_ << '(';
                    emit(p, false, false);
                    out_ << ')';
                    return;
                }
                emit(p.left(), true, false);
                out_ << " | ";
                emit(p.right(), trailing, true);
                return;
            case Kind::Res: {
                if (trailing) {
                    out_ << '(';
                    emit(p, false, false);
                    out_ << ')';
                    return;
                }
                std::string v = choose(p.hint());
                out_ << "nu " << v << ". ";
                scope_.push_back(v);
                emit(p.body(), false, false);
                scope_.pop_back();
                return;
            }
        }
    }

    std::string str() const { return out_.str(); }

private:
    std::set<std::string> avoid_texts_;
    std::vector<std::string> scope_;
    std::ostringstream out_;

    std::string ref_text(const Ref& r) const {
        if (!r.bound) return r.name.text();
        if (r.index >= scope_.size()) return "?" + std::to_string(r.index);
        return scope_[scope_.size() - 1 - r.index];
    }

    bool taken(const std::string& s) const {
        if (avoid_texts_.count(s)) return true;
        for (const auto& b : scope_)
            if (b == s) return true;
        return false;
    }

    std::string choose(const std::string& raw_hint) const {
        std::string base = valid_user_name(raw_hint) ? raw_hint : std::string("n");
        if (!taken(base)) return base;
        for (int i = 1;; ++i) {
            std::string c = base + std::to_string(i);
            if (!taken(c)) return c;
        }
    }
};

}  // namespace

Process parse_process(std::string_view text) { return Parser(text).parse_all(); }

Name parse_name(std::string_view text) { return Parser(text).parse_single_name(); }

std::string print_process(const Process& p) {
    Printer printer(p);
    printer.emit(p, false, false);
    return printer.str();
}

Name display_binder(const Abstraction& abs, const NameSet& avoid) {
    NameSet blocked = NameSet::unite(avoid, abs.free_names());
    std::string base = valid_user_name(abs.hint) ? abs.hint : std::string("w");
    Name candidate = Name::intern(base);
    for (int i = 1; blocked.contains(candidate); ++i) candidate = Name::intern(base + std::to_string(i));
    return candidate;
}

std::string print_action(const Action& a, Name binder) {
    switch (a.kind) {
        case Action::Kind::Tau: return "tau";
        case Action::Kind::FreeOut: return a.channel.text() + "!" + a.payload.text();
        case Action::Kind::FreeIn: return a.channel.text() + "(" + a.payload.text() + ")";
        case Action::Kind::BoundIn: return a.channel.text() + "(" + binder.text() + ")";
        case Action::Kind::BoundOut: return a.channel.text() + "!(" + binder.text() + ")";
    }
    return "?";
}

}  // namespace pi
