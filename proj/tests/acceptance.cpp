#include <chrono>
#include <cstdio>
#include <string>
#include <unordered_map>
#include <vector>

#include "pi/congruence.hpp"
#include "pi/frontend.hpp"
#include "pi/testbench.hpp"

using namespace pi;

namespace {

int failures = 0;

void report(int n, bool ok, const std::string& detail) {
    std::printf("%s criterion %d: %s\n", ok ? "PASS" : "FAIL", n, detail.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
}

struct Run {
    SuiteReport report;
    bool ok() const { return report.all_passed(); }
    std::size_t cases() const {
        std::size_t n = 0;
        for (const auto& p : report.properties) n += p.cases;
        return n;
    }
    std::string summary() const {
        std::string s;
        for (const auto& p : report.properties) {
            if (!s.empty()) s += ", ";
            s += p.name + " " + std::to_string(p.passed) + "/" + std::to_string(p.attempted) + " (" +
                 std::to_string(p.cases) + " cases)";
            if (p.first_failure) s += " first failure " + p.first_failure->process + ": " + p.first_failure->message;
        }
        return s + ", " + std::to_string(report.duration.count()) + " ms";
    }
};

Run run(const std::vector<Process>& corpus, const std::vector<std::string>& names) {
    return Run{run_properties(corpus, select_properties(names))};
}

std::vector<Process> exhaustive(int depth) {
    GenConfig cfg;
    cfg.max_depth = depth;
    cfg.pool = default_pool(2);
    return enumerate_processes(cfg);
}

void congruence_vs_oracle() {
    std::vector<Process> corpus = exhaustive(2);
    const int budget = 5;
    std::unordered_map<Process, std::vector<std::size_t>, ProcessHash> seen_by;
    for (std::size_t i = 0; i < corpus.size(); ++i)
        for (const auto& s : cong_ball(corpus[i], budget)) {
            auto& v = seen_by[s];
            if (v.empty() || v.back() != i) v.push_back(i);
        }
    std::vector<std::vector<bool>> oracle(corpus.size(), std::vector<bool>(corpus.size(), false));
    for (const auto& [state, ids] : seen_by)
        for (std::size_t a : ids)
            for (std::size_t b : ids) oracle[a][b] = true;

    std::size_t pairs = 0, yes = 0, missed = 0, bad_cert = 0, unconfirmed = 0;
    std::string first;
    for (std::size_t i = 0; i < corpus.size(); ++i)
        for (std::size_t j = 0; j < corpus.size(); ++j) {
            ++pairs;
            auto c = congruent(corpus[i], corpus[j]);
            if (oracle[i][j]) ++yes;
            std::string pair = print_process(corpus[i]) + " , " + print_process(corpus[j]);
            if (oracle[i][j] && !c) {
                ++missed;
                if (first.empty()) first = "missed " + pair;
            }
            if (c && !check_cong(*c, corpus[i], corpus[j])) {
                ++bad_cert;
                if (first.empty()) first = "bad certificate " + pair;
            }
            if (c && !oracle[i][j]) {
                ++unconfirmed;
                if (first.empty()) first = "not confirmed by oracle " + pair;
            }
        }
    std::size_t disagreements = missed + bad_cert + unconfirmed;
    std::string detail = std::to_string(pairs) + " pairs, oracle yes " + std::to_string(yes) + ", budget " +
                         std::to_string(budget) + " per side, disagreements " + std::to_string(disagreements);
    if (!first.empty()) detail += ", first " + first;
    report(5, disagreements == 0, detail);
}

}  // namespace

int main() {
    std::vector<Process> d3 = exhaustive(3);
    std::printf("depth-3 corpus: %zu processes\n", d3.size());

    auto t0 = std::chrono::steady_clock::now();
    Run forward = run(d3, {"harmony-forward"});
    auto secs = std::chrono::duration_cast<std::chrono::seconds>(std::chrono::steady_clock::now() - t0).count();
    report(1, forward.ok() && d3.size() == 28581 && secs <= 300, forward.summary());

    Run backward = run(d3, {"harmony-backward"});
    report(2, backward.ok(), backward.summary());

    Run part_i = run(d3, {"harmony-part-i"});
    report(3, part_i.ok() && part_i.cases() >= 10000, part_i.summary());

    Run early_late = run(d3, {"early-late"});
    report(4, early_late.ok(), early_late.summary());

    congruence_vs_oracle();

    GenConfig rc;
    rc.max_depth = 4;
    rc.pool = default_pool(2);
    rc.mode = GenMode::Random;
    rc.seed = 20261015;
    rc.sample_count = 10000;
    Run lemmas = run(random_corpus(rc), {"name-lemmas", "subst-lemmas"});
    report(6, lemmas.ok() && lemmas.report.processes >= 10000, lemmas.summary());

    Run decomp = run(d3, {"decompositions"});
    report(7, decomp.ok(), decomp.summary());

    Run oracle = run(d3, {"late-vs-oracle"});
    report(8, oracle.ok(), oracle.summary());

    Run trip = run(d3, {"syntax-roundtrip", "cert-roundtrip"});
    report(9, trip.ok(), trip.summary());

    return failures == 0 ? 0 : 1;
}
