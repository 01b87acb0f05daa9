#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "lcm/parameter.hpp"

namespace lcmid {

struct VarPower {
    VarId var;
    std::uint16_t exp;

    friend bool operator==(const VarPower&, const VarPower&) = default;
};

/// Sparse power product. Factors are kept sorted by variable with positive
/// exponents, so equal monomials have equal representations.
class Monomial {
public:
    Monomial() = default;

    static Monomial variable(VarId v, unsigned exp = 1);

    unsigned degree() const { return degree_; }
    unsigned exponent(VarId v) const;
    std::span<const VarPower> factors() const { return factors_; }
    bool is_one() const { return factors_.empty(); }

    bool divides(const Monomial& other) const;
    /// Precondition: `divisor.divides(*this)`.
    Monomial quotient(const Monomial& divisor) const;
    Monomial with_exponent(VarId v, unsigned exp) const;

    friend Monomial operator*(const Monomial& a, const Monomial& b);
    friend bool operator==(const Monomial&, const Monomial&) = default;

    std::size_t hash() const;

private:
    std::vector<VarPower> factors_;
    unsigned degree_ = 0;
};

/// Graded lexicographic order; variable 0 is the largest variable.
std::strong_ordering grlex(const Monomial& a, const Monomial& b);

struct MonomialHash {
    std::size_t operator()(const Monomial& m) const { return m.hash(); }
};

struct Term {
    Monomial monomial;
    mpz_class coeff;
};

/// Exact sparse multivariate polynomial over Z. Terms are stored in
/// descending graded-lex order with no zero coefficients, which makes the
/// representation canonical.
class MultiPoly {
public:
    MultiPoly() = default;
    MultiPoly(long c);  // NOLINT(google-explicit-constructor)
    explicit MultiPoly(const mpz_class& c);

    static MultiPoly variable(VarId v);
    static MultiPoly monomial(Monomial m, mpz_class coeff = 1);
    /// Builds from arbitrary terms; combines duplicates and sorts.
    static MultiPoly from_terms(std::vector<Term> terms);

    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const;
    /// The value of a constant polynomial.
    std::optional<mpz_class> constant_value() const;
    unsigned total_degree() const;
    std::size_t term_count() const { return terms_.size(); }
    std::span<const Term> terms() const { return terms_; }
    const Term& leading_term() const { return terms_.front(); }
    bool is_homogeneous() const;
    /// Sorted set of variables that occur.
    std::vector<VarId> variables() const;

    MultiPoly operator-() const;
    MultiPoly& operator+=(const MultiPoly& q);
    MultiPoly& operator-=(const MultiPoly& q);
    MultiPoly& operator*=(const MultiPoly& q);

    friend MultiPoly operator+(MultiPoly p, const MultiPoly& q) { return p += q; }
    friend MultiPoly operator-(MultiPoly p, const MultiPoly& q) { return p -= q; }
    friend MultiPoly operator*(const MultiPoly& p, const MultiPoly& q);
    friend bool operator==(const MultiPoly& p, const MultiPoly& q);

private:
    explicit MultiPoly(std::vector<Term> canonical_terms) : terms_(std::move(canonical_terms)) {}

    std::vector<Term> terms_;
};

MultiPoly pow(const MultiPoly& p, unsigned e);

MultiPoly partial(const MultiPoly& p, VarId v);
MultiPoly substitute_zero(const MultiPoly& p, VarId v);
bool divisible_by_var(const MultiPoly& p, VarId v);

/// Quotient when `den` divides `num` exactly in Z[k]; nullopt otherwise.
std::optional<MultiPoly> divide_exact(const MultiPoly& num, const MultiPoly& den);

/// Rewrites variable ids through `mapping` (old id -> new id).
MultiPoly remap(const MultiPoly& p, std::span<const VarId> mapping);

/// Evaluation modulo `prime` (< 2^63). `point[v]` is the residue of variable v.
std::uint64_t eval_mod_p(const MultiPoly& p, std::span<const std::uint64_t> point,
                         std::uint64_t prime);
mpz_class eval_exact(const MultiPoly& p, std::span<const mpz_class> point);

/// Canonical text: graded-lex terms, variables as k_{i,j}.
std::string to_string(const MultiPoly& p, const VarTable& vars);
/// Text with variables rendered as x<id>; for diagnostics without a table.
std::string to_string(const MultiPoly& p);

} // namespace lcmid
