#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "pi/certjson.hpp"
#include "pi/frontend.hpp"
#include "pi/harmony.hpp"
#include "pi/lts_early.hpp"
#include "pi/lts_late.hpp"
#include "pi/reduction.hpp"
#include "pi/testbench.hpp"

using namespace pi;

namespace {

constexpr int kOk = 0;
constexpr int kNegative = 1;
constexpr int kUsage = 2;

bool color() {
    const char* v = std::getenv("PI_COLOR");
    return v && std::string(v) != "0" && std::string(v) != "never";
}

std::string paint(const std::string& s, const char* code) {
    return color() ? std::string("\x1b[") + code + "m" + s + "\x1b[0m" : s;
}
std::string good(const std::string& s) { return paint(s, "32"); }
std::string bad(const std::string& s) { return paint(s, "31"); }

struct UsageError {
    std::string message;
};

Process read_process(const std::string& text) {
    try {
        return parse_process(text);
    } catch (const ParseError& e) {
        throw UsageError{e.render(text)};
    }
}

std::string show(const Transition& t, const NameSet& avoid) {
    if (!t.is_bound()) return print_action(t.action) + " -> " + print_process(t.target);
    Name b = display_binder(t.abs, avoid);
    return print_action(t.action, b) + " -> " + print_process(t.abs.instantiate(b));
}

std::string verdict(const CheckResult& r) {
    return r.ok ? good("checks") : bad("fails at " + r.path + ": " + r.message);
}

int cmd_parse(const std::string& text) {
    std::cout << print_process(read_process(text)) << "\n";
    return kOk;
}

int cmd_normalize(const std::string& text, bool cert) {
    Process p = read_process(text);
    CongCert c = normalize_cert(p);
    std::cout << print_process(c.rhs()) << "\n";
    if (cert) std::cout << cong_document(c).dump(2) << "\n";
    return kOk;
}

int cmd_cong(const std::string& a, const std::string& b, bool cert) {
    Process p = read_process(a);
    Process q = read_process(b);
    auto c = congruent(p, q);
    if (!c) {
        std::cout << bad("not congruent") << "\n";
        return kNegative;
    }
    std::cout << good("congruent") << "\n";
    if (cert) std::cout << cong_document(*c).dump(2) << "\n";
    return kOk;
}

int cmd_steps(const std::string& text, const std::string& sem, bool certs, const std::vector<std::string>& extra) {
    Process p = read_process(text);
    std::vector<Step> steps;
    Semantics s = Semantics::Late;
    if (sem == "late") {
        steps = late_steps(p);
    } else {
        s = Semantics::Early;
        NameSet u = p.free_names();
        for (const auto& n : extra) {
            try {
                u.insert(parse_name(n));
            } catch (const ParseError& e) {
                throw UsageError{e.render(n)};
            }
        }
        steps = early_steps(p, u);
    }
    Json docs = Json::array();
    for (const auto& st : steps) {
        std::cout << show(st.transition, p.free_names()) << "\n";
        if (certs) docs.push_back(step_document(st.cert, s));
    }
    if (certs) std::cout << docs.dump(2) << "\n";
    return kOk;
}

int cmd_reduce(const std::string& text, bool certs) {
    Process p = read_process(text);
    Json docs = Json::array();
    for (const auto& r : reducts(p)) {
        std::cout << "-> " << print_process(r.target) << "\n";
        if (certs) docs.push_back(red_document(r.cert));
    }
    if (certs) std::cout << docs.dump(2) << "\n";
    return kOk;
}

int cmd_harmony(const std::string& text, const std::string& dir, bool certs) {
    Process p = read_process(text);
    bool all = true;
    Json docs = Json::array();
    if (dir == "tau-to-red") {
        for (const auto& s : late_steps(p)) {
            if (!s.transition.action.is_tau()) continue;
            RedCert r = tau_to_reduction(p, s.transition, s.cert);
            CheckResult c = check_red(r, p, s.transition.target);
            all = all && c.ok;
            std::cout << "tau -> " << print_process(s.transition.target) << "  reduction " << verdict(c) << "\n";
            if (certs) docs.push_back(red_document(r));
        }
    } else {
        for (const auto& red : reducts(p)) {
            TauWitness w = reduction_to_tau(p, red.target, red.cert);
            CheckResult cs = check_step(w.cert, p, w.cert.transition());
            CheckResult cc = check_cong(w.cong, red.target, w.target);
            all = all && cs.ok && cc.ok;
            std::cout << "-> " << print_process(red.target) << "  tau -> " << print_process(w.target) << "  step "
                      << verdict(cs) << "  congruence " << verdict(cc) << "\n";
            if (certs) {
                docs.push_back(step_document(w.cert));
                docs.push_back(cong_document(w.cong));
            }
        }
    }
    if (certs) std::cout << docs.dump(2) << "\n";
    return all ? kOk : kNegative;
}

int cmd_early_late(const std::string& text) {
    Process p = read_process(text);
    std::vector<Process> late, early;
    for (const auto& s : late_steps(p))
        if (s.transition.action.is_tau()) late.push_back(s.transition.target);
    for (const auto& s : early_steps(p, p.free_names()))
        if (s.transition.action.is_tau()) early.push_back(s.transition.target);
    for (const auto& t : late) std::cout << "late  tau -> " << print_process(t) << "\n";
    for (const auto& t : early) std::cout << "early tau -> " << print_process(t) << "\n";
    bool agree = late.size() == early.size();
    for (const auto& t : late)
        if (std::find(early.begin(), early.end(), t) == early.end()) agree = false;
    std::cout << (agree ? good("agree") : bad("disagree")) << "\n";
    return agree ? kOk : kNegative;
}

int cmd_enumerate(int depth, std::size_t pool) {
    GenConfig cfg;
    cfg.max_depth = depth;
    cfg.pool = default_pool(pool);
    try {
        enumerate_processes(cfg, [](const Process& p) { std::cout << print_process(p) << "\n"; });
    } catch (const CorpusTooLarge& e) {
        throw UsageError{e.what()};
    }
    return kOk;
}

int cmd_selftest(int depth, std::size_t pool, std::optional<std::uint64_t> seed, std::size_t samples,
                 const std::vector<std::string>& props, unsigned threads) {
    GenConfig cfg;
    cfg.max_depth = depth;
    cfg.pool = default_pool(pool);
    if (seed) {
        cfg.mode = GenMode::Random;
        cfg.seed = *seed;
        cfg.sample_count = samples;
    }
    std::vector<Property> selected;
    try {
        selected = props.empty() ? builtin_properties() : select_properties(props);
    } catch (const std::invalid_argument& e) {
        throw UsageError{e.what()};
    }
    SuiteOptions opts;
    opts.threads = threads;
    SuiteReport r;
    try {
        r = run_suite(cfg, selected, opts);
    } catch (const CorpusTooLarge& e) {
        throw UsageError{e.what()};
    }
    std::string text = r.render();
    if (color()) {
        std::string out;
        std::istringstream in(text);
        for (std::string line; std::getline(in, line);) {
            if (line.rfind("FAIL", 0) == 0) line = bad(line);
            out += line + "\n";
        }
        text = out;
    }
    std::cout << text;
    return r.all_passed() ? kOk : kNegative;
}

int cmd_check_cert(const std::string& file) {
    std::ifstream in(file);
    if (!in) throw UsageError{"cannot open " + file};
    Json doc;
    try {
        doc = Json::parse(in);
    } catch (const Json::parse_error& e) {
        throw UsageError{file + ": " + e.what()};
    }
    auto check_one = [](const Json& d) {
        CheckResult r = check_document(d);
        std::cout << (r.ok ? good("ok") : bad("invalid at " + r.path + ": " + r.message)) << "\n";
        return r.ok;
    };
    bool all = true;
    if (doc.is_array())
        for (const auto& d : doc) all = check_one(d) && all;
    else
        all = check_one(doc);
    return all ? kOk : kNegative;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"pi-calculus workbench"};
    app.require_subcommand(1);

    std::string a, b, sem = "late", dir, file;
    bool cert = false;
    int depth = 2;
    std::size_t pool = 2, samples = 10000;
    std::optional<std::uint64_t> seed;
    std::vector<std::string> props, universe;
    unsigned threads = 1;

    auto* parse = app.add_subcommand("parse", "parse and print a process");
    parse->add_option("process", a)->required();
    auto* normalize = app.add_subcommand("normalize", "structural normal form");
    normalize->add_option("process", a)->required();
    normalize->add_flag("--cert", cert, "print the congruence certificate");
    auto* cong = app.add_subcommand("cong", "decide structural congruence");
    cong->add_option("lhs", a)->required();
    cong->add_option("rhs", b)->required();
    cong->add_flag("--cert", cert, "print the certificate");
    auto* steps = app.add_subcommand("steps", "labelled transitions");
    steps->add_option("--sem", sem)->check(CLI::IsMember({"late", "early"}));
    steps->add_option("process", a)->required();
    steps->add_flag("--certs", cert, "print derivation certificates");
    steps->add_option("--universe", universe, "extra names for early inputs");
    auto* reduce = app.add_subcommand("reduce", "one-step reducts");
    reduce->add_option("process", a)->required();
    reduce->add_flag("--certs", cert, "print reduction certificates");
    auto* harmony = app.add_subcommand("harmony", "silent transitions versus reductions");
    harmony->add_option("--dir", dir)->required()->check(CLI::IsMember({"tau-to-red", "red-to-tau"}));
    harmony->add_option("process", a)->required();
    harmony->add_flag("--certs", cert, "print the constructed certificates");
    auto* early_late = app.add_subcommand("early-late", "compare early and late silent steps");
    early_late->add_option("process", a)->required();
    auto* enumerate = app.add_subcommand("enumerate", "list the exhaustive corpus");
    enumerate->add_option("--depth", depth)->required()->check(CLI::NonNegativeNumber);
    enumerate->add_option("--pool", pool, "number of free names")->check(CLI::PositiveNumber);
    auto* selftest = app.add_subcommand("selftest", "run the property suite");
    selftest->add_option("--depth", depth)->required()->check(CLI::NonNegativeNumber);
    selftest->add_option("--pool", pool, "number of free names")->check(CLI::PositiveNumber);
    selftest->add_option("--seed", seed, "sample randomly with this seed");
    selftest->add_option("--samples", samples, "random sample count")->check(CLI::PositiveNumber);
    selftest->add_option("--props", props, "comma separated property names")->delimiter(',');
    selftest->add_option("--threads", threads)->check(CLI::PositiveNumber);
    auto* check_cert = app.add_subcommand("check-cert", "check a certificate document");
    check_cert->add_option("file", file)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    }

    try {
        if (*parse) return cmd_parse(a);
        if (*normalize) return cmd_normalize(a, cert);
        if (*cong) return cmd_cong(a, b, cert);
        if (*steps) return cmd_steps(a, sem, cert, universe);
        if (*reduce) return cmd_reduce(a, cert);
        if (*harmony) return cmd_harmony(a, dir, cert);
        if (*early_late) return cmd_early_late(a);
        if (*enumerate) return cmd_enumerate(depth, pool);
        if (*selftest) return cmd_selftest(depth, pool, seed, samples, props, threads);
        if (*check_cert) return cmd_check_cert(file);
    } catch (const UsageError& e) {
        std::cerr << e.message << "\n";
        return kUsage;
    } catch (const ContractViolation& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    }
    return kUsage;
}
