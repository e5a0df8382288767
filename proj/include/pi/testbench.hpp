#pragma once

// Corpus generation, brute-force oracles written independently of the
// engine, and the property-suite driver.

#include <chrono>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "pi/step.hpp"
#include "pi/syntax.hpp"

namespace pi {

enum class GenMode { Exhaustive, Random };

struct GenConfig {
    int max_depth = 3;
    std::vector<Name> pool;
    std::uint64_t seed = 0;
    GenMode mode = GenMode::Exhaustive;
    std::size_t sample_count = 1000;
    /// Exhaustive enumeration refuses corpora larger than this.
    std::uint64_t cap = 5'000'000;
};

/// {x, y} for pool size 2, and so on.
std::vector<Name> default_pool(std::size_t n);

class CorpusTooLarge : public std::runtime_error {
public:
    explicit CorpusTooLarge(std::uint64_t estimate);
    std::uint64_t estimate() const { return estimate_; }

private:
    std::uint64_t estimate_;
};

/// Number of alpha-distinct processes of depth <= max_depth over a pool of
/// the given size. Saturates at UINT64_MAX.
std::uint64_t corpus_size(int max_depth, std::size_t pool_size);

/// Every alpha-distinct process of depth <= max_depth with free names in the
/// pool, once each, in a fixed order.
std::vector<Process> enumerate_processes(const GenConfig& cfg);
void enumerate_processes(const GenConfig& cfg, const std::function<void(const Process&)>& sink);

/// Grammar-directed sample of depth <= max_depth.
Process random_process(const GenConfig& cfg, std::mt19937_64& rng);
/// The sample determined by cfg.seed alone.
Process random_process(const GenConfig& cfg);
/// cfg.sample_count samples from one generator seeded with cfg.seed.
std::vector<Process> random_corpus(const GenConfig& cfg);

enum class OracleVerdict { Yes, NoWithinBudget };

/// Bounded rewriting with the congruence axioms in both directions at every
/// position. Both sides are explored to `budget` rewrites, so a chain of up
/// to twice the budget is found.
OracleVerdict cong_oracle(const Process& p, const Process& q, int budget);

/// The set of processes reachable from p in at most `budget` rewrites.
std::vector<Process> cong_ball(const Process& p, int budget);

/// Late transitions by naive derivation search over named terms.
std::vector<Transition> step_oracle(const Process& p);

struct PropertyOutcome {
    bool ok = true;
    /// Sub-cases examined (transitions, pairs, ...).
    std::size_t cases = 0;
    std::string message;

    static PropertyOutcome pass(std::size_t cases) { return {true, cases, {}}; }
    static PropertyOutcome fail(std::string message, std::size_t cases = 1) {
        return {false, cases, std::move(message)};
    }
};

struct Property {
    std::string name;
    std::string description;
    std::function<PropertyOutcome(const Process&)> check;
};

/// The registered invariants of all modules.
const std::vector<Property>& builtin_properties();
/// Looks names up in the registry; unknown names throw std::invalid_argument.
std::vector<Property> select_properties(const std::vector<std::string>& names);

struct Counterexample {
    std::string process;
    std::string original;
    std::string message;
};

struct PropertyReport {
    std::string name;
    std::size_t attempted = 0;
    std::size_t passed = 0;
    std::size_t failed = 0;
    std::size_t cases = 0;
    std::optional<Counterexample> first_failure;
};

struct SuiteReport {
    std::vector<PropertyReport> properties;
    std::size_t processes = 0;
    std::chrono::milliseconds duration{0};

    bool all_passed() const;
    std::size_t attempts() const;
    std::string render() const;
};

struct SuiteOptions {
    unsigned threads = 1;
    bool shrink = true;
};

/// Greedy structural shrinking: the smallest variant found that still fails.
Process shrink(const Process& p, const std::function<bool(const Process&)>& fails);

SuiteReport run_properties(const std::vector<Process>& corpus, const std::vector<Property>& props,
                           const SuiteOptions& opts = {});
SuiteReport run_suite(const GenConfig& cfg, const std::vector<Property>& props, const SuiteOptions& opts = {});

}  // namespace pi
