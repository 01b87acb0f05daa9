#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "lcm/model.hpp"

namespace lcmid {

enum class Conjecture { remove_leak, add_leak, dividing_edge, leak_divisibility, counts };

const char* to_string(Conjecture c);
std::optional<Conjecture> parse_conjecture(const std::string& s);

enum class Placement {
    all_single,  // every (input, output) pair of single compartments
    fixed,       // the given input and output only
};

struct ScanSpec {
    int min_n = 1;
    int max_n = 4;
    /// Maximum number of leaks placed on an enumerated model.
    int leak_budget = 1;
    Placement placement = Placement::all_single;
    int fixed_input = 1;
    int fixed_output = 1;
    Conjecture conjecture = Conjecture::counts;
    std::uint64_t seed = 0;
    std::size_t jobs = 1;
    std::chrono::milliseconds time_budget{10'000};
    /// Keep one representative per relabeling class.
    bool dedup_isomorphic = false;
    /// Skip digraphs with more edges than this.
    std::optional<int> max_edges;
};

/// Throws AnalysisError(precondition) on an unusable spec.
void validate(const ScanSpec& spec);

/// All strongly connected labeled digraphs on min_n..max_n vertices,
/// decorated with input/output placements and every leak set of size up to
/// the budget. Order: n, arc bitmask, input, output, leak set (by size then
/// lexicographic).
std::vector<Model> enumerate_models(const ScanSpec& spec);
void for_each_model(const ScanSpec& spec, const std::function<void(const Model&)>& fn);

/// Number of strongly connected labeled digraphs on n vertices.
std::size_t count_strongly_connected_digraphs(int n);

/// Relabeling-invariant encoding (minimum over all vertex permutations).
std::string canonical_encoding(const Model& m);

struct Tally {
    /// Theorem-backed tallies must never record a counterexample.
    bool theorem_backed = false;
    std::size_t examined = 0;
    std::size_t consistent = 0;
    std::size_t counterexample = 0;
    std::size_t skipped = 0;
    std::map<std::string, std::size_t> skipped_reasons;

    bool conserved() const { return examined == consistent + counterexample + skipped; }
};

struct CounterexampleRecord {
    std::string tally;
    Model model;
    /// Model, coefficient map, rank data and relevant polynomials.
    nlohmann::json evidence;
};

struct ScanResult {
    ScanSpec spec;
    std::size_t models_examined = 0;
    std::map<std::string, Tally> tallies;
    std::vector<CounterexampleRecord> counterexamples;
    /// Auxiliary counters, e.g. how many dividing edges break strong
    /// connectivity when removed.
    std::map<std::string, std::size_t> stats;
    double wall_seconds = 0.0;

    /// Counterexamples recorded against theorem-backed tallies.
    std::size_t theorem_violations() const;
    std::size_t conjecture_counterexamples() const;
};

ScanResult scan_remove_leak(const ScanSpec& spec);
ScanResult scan_add_leak(const ScanSpec& spec);
ScanResult scan_dividing_edges(const ScanSpec& spec);
ScanResult scan_leak_divisibility(const ScanSpec& spec);
ScanResult scan_counts(const ScanSpec& spec);

/// Dispatches on spec.conjecture.
ScanResult run_scan(const ScanSpec& spec);

/// Scans an explicit model list instead of the enumeration.
ScanResult run_scan(const ScanSpec& spec, const std::vector<Model>& models);

} // namespace lcmid
