#include "lcm/identifiability.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <random>

#include "lcm/errors.hpp"
#include "lcm/modular.hpp"
#include "lcm/parallel.hpp"

namespace lcmid {

const char* to_string(RankCertainty c) {
    return c == RankCertainty::lower_bound_certified ? "lower-bound-certified" : "probabilistic";
}

const char* to_string(Status s) {
    switch (s) {
    case Status::identifiable: return "identifiable";
    case Status::unidentifiable: return "unidentifiable";
    case Status::undetermined: return "undetermined";
    }
    return "?";
}

const char* to_string(Method m) {
    switch (m) {
    case Method::parameter_count: return "parameter-count";
    case Method::too_many_leaks: return "too-many-leaks";
    case Method::probabilistic_rank: return "probabilistic-rank";
    case Method::exact_symbolic: return "exact-symbolic";
    }
    return "?";
}

JacobianMatrix jacobian(const CoefficientMap& c) {
    JacobianMatrix j{c.vars, {}, PolyMatrix(c.entries.size(), c.vars.size())};
    j.rows.reserve(c.entries.size());
    for (std::size_t r = 0; r < c.entries.size(); ++r) {
        j.rows.push_back(c.entries[r].label);
        for (VarId v = 0; v < c.vars.size(); ++v) j.entries(r, v) = partial(c.entries[r].poly, v);
    }
    return j;
}

namespace {

std::size_t max_variable_count(const PolyMatrix& j) {
    std::size_t count = j.cols();
    for (std::size_t r = 0; r < j.rows(); ++r) {
        for (std::size_t c = 0; c < j.cols(); ++c) {
            for (VarId v : j(r, c).variables()) count = std::max<std::size_t>(count, std::size_t(v) + 1);
        }
    }
    return count;
}

unsigned minor_degree_bound(const PolyMatrix& j) {
    std::vector<unsigned> row_degrees;
    for (std::size_t r = 0; r < j.rows(); ++r) {
        unsigned d = 0;
        for (std::size_t c = 0; c < j.cols(); ++c) d = std::max(d, j(r, c).total_degree());
        row_degrees.push_back(d);
    }
    std::sort(row_degrees.rbegin(), row_degrees.rend());
    unsigned total = 0;
    for (std::size_t i = 0; i < std::min(j.rows(), j.cols()); ++i) total += row_degrees[i];
    return total;
}

std::vector<mpz_class> random_integer_point(std::mt19937_64& rng, std::size_t nvars) {
    std::uniform_int_distribution<unsigned long> dist(1, 1UL << 31);
    std::vector<mpz_class> point(nvars);
    for (auto& x : point) x = dist(rng);
    return point;
}

std::vector<mpz_class> evaluate_exact(const PolyMatrix& j, std::span<const mpz_class> point) {
    std::vector<mpz_class> values(j.rows() * j.cols());
    for (std::size_t r = 0; r < j.rows(); ++r) {
        for (std::size_t c = 0; c < j.cols(); ++c) values[r * j.cols() + c] = eval_exact(j(r, c), point);
    }
    return values;
}

} // namespace

RankEstimate generic_rank(const PolyMatrix& j, std::size_t trials, std::uint64_t seed) {
    if (trials == 0) throw AnalysisError(ErrorKind::precondition, "generic_rank needs at least one trial");
    RankEstimate est;
    est.seed = seed;
    est.minor_degree_bound = minor_degree_bound(j);
    std::mt19937_64 rng(seed);
    const std::size_t nvars = max_variable_count(j);
    const std::size_t offset = rng() % kWordPrimes.size();

    double bound = 1.0;
    for (std::size_t t = 0; t < trials; ++t) {
        const std::uint64_t p = kWordPrimes[(offset + t) % kWordPrimes.size()];
        std::uniform_int_distribution<std::uint64_t> dist(0, p - 1);
        std::vector<std::uint64_t> point(nvars);
        for (auto& x : point) x = dist(rng);
        std::vector<std::uint64_t> values(j.rows() * j.cols());
        for (std::size_t r = 0; r < j.rows(); ++r) {
            for (std::size_t c = 0; c < j.cols(); ++c) values[r * j.cols() + c] = eval_mod_p(j(r, c), point, p);
        }
        std::size_t rank = rank_mod_p(std::move(values), j.rows(), j.cols(), p);
        est.primes.push_back(p);
        est.trial_ranks.push_back(rank);
        est.rank = std::max(est.rank, rank);
        bound *= std::min(1.0, double(est.minor_degree_bound) / double(p));
    }
    est.failure_bound = est.minor_degree_bound == 0 ? 0.0 : bound;

    // A rank observed over Q at an integer point bounds the generic rank from
    // below with certainty.
    for (int attempt = 0; attempt < 3; ++attempt) {
        auto point = random_integer_point(rng, nvars);
        std::size_t exact = rank_exact(evaluate_exact(j, point), j.rows(), j.cols());
        est.certified_rank = std::max(est.certified_rank.value_or(0), exact);
        if (exact >= est.rank) {
            est.rank = exact;
            est.certainty = RankCertainty::lower_bound_certified;
            break;
        }
    }
    return est;
}

std::vector<std::size_t> independent_rows(const PolyMatrix& j, std::uint64_t seed) {
    std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
    auto point = random_integer_point(rng, max_variable_count(j));
    auto values = evaluate_exact(j, point);
    std::vector<std::size_t> chosen;
    std::vector<mpz_class> acc;
    std::size_t rank = 0;
    for (std::size_t r = 0; r < j.rows() && chosen.size() < j.cols(); ++r) {
        std::vector<mpz_class> trial = acc;
        trial.insert(trial.end(), values.begin() + static_cast<std::ptrdiff_t>(r * j.cols()),
                     values.begin() + static_cast<std::ptrdiff_t>((r + 1) * j.cols()));
        std::size_t rk = rank_exact(trial, chosen.size() + 1, j.cols());
        if (rk > rank) {
            rank = rk;
            acc = std::move(trial);
            chosen.push_back(r);
        }
    }
    return chosen;
}

namespace {

std::vector<std::vector<std::size_t>> row_subsets(std::size_t n, std::size_t k) {
    std::vector<std::vector<std::size_t>> out;
    if (k > n) return out;
    std::vector<std::size_t> idx(k);
    for (std::size_t i = 0; i < k; ++i) idx[i] = i;
    while (true) {
        out.push_back(idx);
        std::size_t i = k;
        while (i > 0 && idx[i - 1] == n - k + (i - 1)) --i;
        if (i == 0) break;
        ++idx[i - 1];
        for (std::size_t t = i; t < k; ++t) idx[t] = idx[t - 1] + 1;
    }
    return out;
}

} // namespace

std::vector<MinorValue> maximal_minors(const PolyMatrix& j, std::size_t jobs, const Deadline& deadline,
                                       bool stop_at_nonzero) {
    std::vector<std::size_t> cols(j.cols());
    for (std::size_t c = 0; c < cols.size(); ++c) cols[c] = c;
    auto subsets = row_subsets(j.rows(), j.cols());
    std::vector<MinorValue> out(subsets.size());
    auto compute = [&](std::size_t i) {
        out[i].rows = subsets[i];
        out[i].value = det_fraction_free(j.submatrix(subsets[i], cols), deadline);
    };
    if (!stop_at_nonzero) {
        parallel_for(subsets.size(), jobs, compute);
        return out;
    }
    // Batches in subset order keep the reported prefix deterministic.
    const std::size_t batch = std::max<std::size_t>(1, jobs);
    for (std::size_t start = 0; start < subsets.size(); start += batch) {
        std::size_t len = std::min(batch, subsets.size() - start);
        parallel_for(len, jobs, [&](std::size_t i) { compute(start + i); });
        for (std::size_t i = start; i < start + len; ++i) {
            if (!out[i].value.is_zero()) {
                out.resize(i + 1);
                return out;
            }
        }
    }
    return out;
}

Verdict decide(const Model& m, const DecideOptions& opt) {
    require_io_applicable(m);
    return decide(m, coefficient_map(m, opt.deadline), opt);
}

Verdict decide(const Model& m, const CoefficientMap& c, const DecideOptions& opt) {
    require_io_applicable(m);
    Verdict v;
    v.parameters = m.parameter_count();
    v.coefficients = c.size();

    if (v.coefficients < v.parameters) {
        v.status = Status::unidentifiable;
        v.method = Method::parameter_count;
        v.exact = true;
        return v;
    }
    if (m.single_input_output()) {
        const std::size_t io_union = m.inputs() == m.outputs() ? 1 : 2;
        if (m.leaks().size() > io_union) {
            v.status = Status::unidentifiable;
            v.method = Method::too_many_leaks;
            v.exact = true;
            return v;
        }
    }

    const JacobianMatrix jac = jacobian(c);
    v.rank_info = generic_rank(jac.entries, opt.trials, opt.seed);
    v.rank = v.rank_info->rank;
    std::vector<std::size_t> cols(jac.entries.cols());
    for (std::size_t i = 0; i < cols.size(); ++i) cols[i] = i;

    const bool certified = v.rank_info->certainty == RankCertainty::lower_bound_certified;
    if (v.rank == v.parameters && certified) {
        v.status = Status::identifiable;
        v.method = Method::probabilistic_rank;
        v.exact = true;
        if (opt.exact == ExactMode::always) {
            Certificate cert;
            cert.rows = independent_rows(jac.entries, opt.seed);
            cert.minor = det_fraction_free(jac.entries.submatrix(cert.rows, cols), opt.deadline);
            cert.symbolic_rank = v.parameters;
            if (cert.minor.is_zero()) throw std::logic_error("decide: certified rows gave a zero minor");
            v.method = Method::exact_symbolic;
            v.certificate = std::move(cert);
        }
        return v;
    }

    const bool small = v.parameters <= opt.exact_max_parameters && m.size() <= opt.exact_max_compartments;
    const bool escalate = v.rank_info->failure_bound >= opt.max_failure_bound;
    const bool run_exact = opt.exact == ExactMode::always
                        || (opt.exact == ExactMode::automatic && (small || escalate));
    if (!run_exact) {
        v.status = v.rank < v.parameters ? Status::unidentifiable : Status::identifiable;
        v.method = Method::probabilistic_rank;
        v.exact = false;
        return v;
    }

    const SymbolicRank sr = symbolic_rank(jac.entries, opt.deadline);
    Certificate cert;
    cert.symbolic_rank = sr.rank;
    v.method = Method::exact_symbolic;
    v.exact = true;
    v.rank = sr.rank;
    if (sr.rank == v.parameters) {
        cert.kind = Certificate::Kind::nonzero_minor;
        cert.rows = sr.pivot_rows;
        std::sort(cert.rows.begin(), cert.rows.end());
        cert.minor = det_fraction_free(jac.entries.submatrix(cert.rows, cols), opt.deadline);
        v.status = Status::identifiable;
    } else {
        cert.kind = Certificate::Kind::all_minors_zero;
        v.status = Status::unidentifiable;
    }
    v.certificate = std::move(cert);
    return v;
}

bool too_many_leaks(const Model& m) {
    require_io_applicable(m);
    if (!m.single_input_output()) {
        throw AnalysisError(ErrorKind::unsupported, "too-many-leaks needs |In| = |Out| = 1");
    }
    if (m.leaks().empty()) throw AnalysisError(ErrorKind::precondition, "too-many-leaks needs at least one leak");
    const long n = m.size();
    const long edges = static_cast<long>(m.edges().size());
    const long leaks = static_cast<long>(m.leaks().size());
    if (m.inputs() == m.outputs()) return leaks > std::min(1L, 2 * n - edges - 1);
    const long path = shortest_io_path_length(m);
    return leaks > std::min(2L, 2 * n - edges - path);
}

bool add_leak_theorem_check(const Model& m, const DecideOptions& opt) {
    require_io_applicable(m);
    if (!m.single_input_output()) {
        throw AnalysisError(ErrorKind::unsupported, "add-leak theorem needs |In| = |Out| = 1");
    }
    const auto c = coefficient_map(m, opt.deadline);
    if (c.size() >= m.parameter_count()) {
        throw AnalysisError(ErrorKind::precondition,
                            "add-leak theorem needs fewer coefficients than parameters");
    }
    for (const auto& mut : applicable_mutations(m, Mutation::Action::add_leak)) {
        if (decide(apply(m, mut), opt).status != Status::unidentifiable) return false;
    }
    return true;
}

} // namespace lcmid
