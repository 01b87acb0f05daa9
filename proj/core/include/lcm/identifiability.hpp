#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "lcm/ioeq.hpp"

namespace lcmid {

/// Formal partials of the coefficient map. Rows follow the coefficient-map
/// order, columns the parameter order of `vars`.
struct JacobianMatrix {
    VarTable vars;
    std::vector<CoeffLabel> rows;
    PolyMatrix entries;
};

JacobianMatrix jacobian(const CoefficientMap& c);

enum class RankCertainty { lower_bound_certified, probabilistic };

const char* to_string(RankCertainty c);

struct RankEstimate {
    std::size_t rank = 0;
    RankCertainty certainty = RankCertainty::probabilistic;
    std::uint64_t seed = 0;
    std::vector<std::uint64_t> primes;
    std::vector<std::size_t> trial_ranks;
    /// Rank over Q at the certification point, if one was evaluated.
    std::optional<std::size_t> certified_rank;
    /// Upper bound on the total degree of any maximal minor.
    unsigned minor_degree_bound = 0;
    /// Schwartz-Zippel bound on the probability that `rank` underestimates
    /// the generic rank.
    double failure_bound = 0.0;
};

/// Maximum rank over `trials` random evaluations modulo distinct word-size
/// primes, followed by one exact evaluation at a random integer point.
RankEstimate generic_rank(const PolyMatrix& j, std::size_t trials, std::uint64_t seed);

/// Rows (0-based) of `j` independent at a random integer point; at most
/// j.cols() of them. Used to pick a nonzero maximal minor.
std::vector<std::size_t> independent_rows(const PolyMatrix& j, std::uint64_t seed);

struct MinorValue {
    std::vector<std::size_t> rows;  // 0-based row subset, ascending
    MultiPoly value;
};

/// All maximal (cols x cols) minors of a tall matrix, rows in lexicographic
/// subset order. With `stop_at_nonzero` the enumeration stops at the first
/// nonzero minor found.
std::vector<MinorValue> maximal_minors(const PolyMatrix& j, std::size_t jobs = 1,
                                       const Deadline& deadline = {}, bool stop_at_nonzero = false);

enum class Status { identifiable, unidentifiable, undetermined };
enum class Method { parameter_count, too_many_leaks, probabilistic_rank, exact_symbolic };

const char* to_string(Status s);
const char* to_string(Method m);

struct Certificate {
    enum class Kind { nonzero_minor, all_minors_zero };

    Kind kind = Kind::nonzero_minor;
    std::vector<std::size_t> rows;  // rows of the nonzero minor
    MultiPoly minor;
    /// Rank over Q(k) from fraction-free elimination; below the column
    /// count it proves that every maximal minor vanishes.
    std::size_t symbolic_rank = 0;
};

struct Verdict {
    Status status = Status::undetermined;
    Method method = Method::probabilistic_rank;
    std::size_t parameters = 0;
    std::size_t coefficients = 0;
    /// Generic rank of the Jacobian; meaningful only with rank_info, which the
    /// counting shortcuts leave unset.
    std::size_t rank = 0;
    std::optional<RankEstimate> rank_info;
    /// False when the verdict rests on random evaluation alone.
    bool exact = false;
    std::optional<Certificate> certificate;
};

enum class ExactMode {
    automatic,  // confirm rank deficits symbolically for small models
    always,     // also produce a symbolic certificate for identifiable models
    never,
};

struct DecideOptions {
    std::size_t trials = 5;
    std::uint64_t seed = 0;
    ExactMode exact = ExactMode::automatic;
    std::size_t jobs = 1;
    Deadline deadline;
    /// Rank deficits are confirmed symbolically up to these sizes.
    std::size_t exact_max_parameters = 9;
    int exact_max_compartments = 6;
    /// Above this Schwartz-Zippel bound the exact path runs regardless.
    double max_failure_bound = 1e-9;
};

Verdict decide(const Model& m, const DecideOptions& opt = {});
Verdict decide(const Model& m, const CoefficientMap& c, const DecideOptions& opt = {});

/// The too-many-leaks criterion for strongly connected single-input
/// single-output models with at least one leak.
bool too_many_leaks(const Model& m);

/// For a model with fewer coefficients than parameters, checks that adding
/// any single leak keeps it unidentifiable.
bool add_leak_theorem_check(const Model& m, const DecideOptions& opt = {});

} // namespace lcmid
