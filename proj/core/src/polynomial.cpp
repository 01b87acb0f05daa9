#include "lcm/polynomial.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include "lcm/modular.hpp"

namespace lcmid {

// ---------------------------------------------------------------- VarTable

std::string Parameter::name() const {
    return "k_{" + std::to_string(to) + "," + std::to_string(from) + "}";
}

VarTable::VarTable(std::vector<Parameter> params) : params_(std::move(params)) {
    if (!std::is_sorted(params_.begin(), params_.end())
        || std::adjacent_find(params_.begin(), params_.end()) != params_.end()) {
        throw std::invalid_argument("VarTable: parameters must be strictly ordered");
    }
    if (params_.size() >= 0xFFFF) {
        throw std::invalid_argument("VarTable: too many parameters");
    }
}

std::optional<VarId> VarTable::find(const Parameter& p) const {
    auto it = std::lower_bound(params_.begin(), params_.end(), p);
    if (it == params_.end() || *it != p) return std::nullopt;
    return static_cast<VarId>(it - params_.begin());
}

VarId VarTable::at(const Parameter& p) const {
    if (auto v = find(p)) return *v;
    throw std::out_of_range("VarTable: no parameter " + p.name());
}

std::string VarTable::name(VarId v) const {
    if (v < params_.size()) return params_[v].name();
    return "x" + std::to_string(v);
}

// ---------------------------------------------------------------- Monomial

Monomial Monomial::variable(VarId v, unsigned exp) {
    Monomial m;
    if (exp > 0) {
        m.factors_.push_back({v, static_cast<std::uint16_t>(exp)});
        m.degree_ = exp;
    }
    return m;
}

unsigned Monomial::exponent(VarId v) const {
    auto it = std::lower_bound(factors_.begin(), factors_.end(), v,
                               [](const VarPower& f, VarId x) { return f.var < x; });
    return (it != factors_.end() && it->var == v) ? it->exp : 0;
}

bool Monomial::divides(const Monomial& other) const {
    if (degree_ > other.degree_) return false;
    auto it = other.factors_.begin();
    for (const auto& f : factors_) {
        while (it != other.factors_.end() && it->var < f.var) ++it;
        if (it == other.factors_.end() || it->var != f.var || it->exp < f.exp) return false;
    }
    return true;
}

Monomial Monomial::quotient(const Monomial& divisor) const {
    Monomial q;
    q.factors_.reserve(factors_.size());
    auto d = divisor.factors_.begin();
    for (const auto& f : factors_) {
        unsigned e = f.exp;
        if (d != divisor.factors_.end() && d->var == f.var) {
            e -= d->exp;
            ++d;
        }
        if (e > 0) q.factors_.push_back({f.var, static_cast<std::uint16_t>(e)});
    }
    q.degree_ = degree_ - divisor.degree_;
    return q;
}

Monomial Monomial::with_exponent(VarId v, unsigned exp) const {
    Monomial m;
    m.factors_.reserve(factors_.size() + 1);
    bool placed = false;
    for (const auto& f : factors_) {
        if (!placed && f.var >= v) {
            if (exp > 0) m.factors_.push_back({v, static_cast<std::uint16_t>(exp)});
            placed = true;
            if (f.var == v) continue;
        }
        m.factors_.push_back(f);
    }
    if (!placed && exp > 0) m.factors_.push_back({v, static_cast<std::uint16_t>(exp)});
    m.degree_ = 0;
    for (const auto& f : m.factors_) m.degree_ += f.exp;
    return m;
}

Monomial operator*(const Monomial& a, const Monomial& b) {
    Monomial m;
    m.factors_.reserve(a.factors_.size() + b.factors_.size());
    auto i = a.factors_.begin();
    auto j = b.factors_.begin();
    while (i != a.factors_.end() && j != b.factors_.end()) {
        if (i->var < j->var) {
            m.factors_.push_back(*i++);
        } else if (j->var < i->var) {
            m.factors_.push_back(*j++);
        } else {
            unsigned e = unsigned(i->exp) + j->exp;
            if (e > 0xFFFF) throw std::overflow_error("Monomial: exponent overflow");
            m.factors_.push_back({i->var, static_cast<std::uint16_t>(e)});
            ++i;
            ++j;
        }
    }
    m.factors_.insert(m.factors_.end(), i, a.factors_.end());
    m.factors_.insert(m.factors_.end(), j, b.factors_.end());
    m.degree_ = a.degree_ + b.degree_;
    return m;
}

std::size_t Monomial::hash() const {
    std::size_t h = 1469598103934665603ULL;
    for (const auto& f : factors_) {
        h ^= (std::size_t(f.var) << 16) | f.exp;
        h *= 1099511628211ULL;
    }
    return h;
}

std::strong_ordering grlex(const Monomial& a, const Monomial& b) {
    if (auto c = a.degree() <=> b.degree(); c != 0) return c;
    auto fa = a.factors();
    auto fb = b.factors();
    std::size_t i = 0;
    for (; i < fa.size() && i < fb.size(); ++i) {
        // The monomial whose first differing variable is smaller (i.e. earlier,
        // hence lex-larger) carries a positive exponent the other lacks.
        if (fa[i].var != fb[i].var) {
            return fa[i].var < fb[i].var ? std::strong_ordering::greater
                                         : std::strong_ordering::less;
        }
        if (fa[i].exp != fb[i].exp) return fa[i].exp <=> fb[i].exp;
    }
    return fa.size() <=> fb.size();
}

namespace {

bool grlex_greater(const Term& a, const Term& b) {
    return grlex(a.monomial, b.monomial) > 0;
}

struct GrlexGreater {
    bool operator()(const Monomial& a, const Monomial& b) const { return grlex(a, b) > 0; }
};

} // namespace

// ---------------------------------------------------------------- MultiPoly

MultiPoly::MultiPoly(long c) {
    if (c != 0) terms_.push_back({Monomial{}, mpz_class(c)});
}

MultiPoly::MultiPoly(const mpz_class& c) {
    if (c != 0) terms_.push_back({Monomial{}, c});
}

MultiPoly MultiPoly::variable(VarId v) {
    return MultiPoly(std::vector<Term>{{Monomial::variable(v), mpz_class(1)}});
}

MultiPoly MultiPoly::monomial(Monomial m, mpz_class coeff) {
    if (coeff == 0) return {};
    return MultiPoly(std::vector<Term>{{std::move(m), std::move(coeff)}});
}

MultiPoly MultiPoly::from_terms(std::vector<Term> terms) {
    std::sort(terms.begin(), terms.end(), grlex_greater);
    std::vector<Term> out;
    out.reserve(terms.size());
    for (auto& t : terms) {
        if (!out.empty() && out.back().monomial == t.monomial) {
            out.back().coeff += t.coeff;
        } else {
            if (!out.empty() && out.back().coeff == 0) out.pop_back();
            out.push_back(std::move(t));
        }
    }
    if (!out.empty() && out.back().coeff == 0) out.pop_back();
    return MultiPoly(std::move(out));
}

bool MultiPoly::is_constant() const {
    return terms_.empty() || (terms_.size() == 1 && terms_[0].monomial.is_one());
}

std::optional<mpz_class> MultiPoly::constant_value() const {
    if (terms_.empty()) return mpz_class(0);
    if (terms_.size() == 1 && terms_[0].monomial.is_one()) return terms_[0].coeff;
    return std::nullopt;
}

unsigned MultiPoly::total_degree() const {
    return terms_.empty() ? 0 : terms_.front().monomial.degree();
}

bool MultiPoly::is_homogeneous() const {
    return terms_.empty()
        || terms_.front().monomial.degree() == terms_.back().monomial.degree();
}

std::vector<VarId> MultiPoly::variables() const {
    std::vector<VarId> vars;
    for (const auto& t : terms_) {
        for (const auto& f : t.monomial.factors()) vars.push_back(f.var);
    }
    std::sort(vars.begin(), vars.end());
    vars.erase(std::unique(vars.begin(), vars.end()), vars.end());
    return vars;
}

MultiPoly MultiPoly::operator-() const {
    MultiPoly r = *this;
    for (auto& t : r.terms_) t.coeff = -t.coeff;
    return r;
}

namespace {

// Merge of two canonical term lists; `sign` is +1 or -1 for q.
std::vector<Term> merge_terms(const std::vector<Term>& p, std::span<const Term> q, int sign) {
    std::vector<Term> out;
    out.reserve(p.size() + q.size());
    std::size_t i = 0, j = 0;
    while (i < p.size() && j < q.size()) {
        auto c = grlex(p[i].monomial, q[j].monomial);
        if (c > 0) {
            out.push_back(p[i++]);
        } else if (c < 0) {
            out.push_back({q[j].monomial, sign > 0 ? q[j].coeff : mpz_class(-q[j].coeff)});
            ++j;
        } else {
            mpz_class s = sign > 0 ? mpz_class(p[i].coeff + q[j].coeff)
                                   : mpz_class(p[i].coeff - q[j].coeff);
            if (s != 0) out.push_back({p[i].monomial, std::move(s)});
            ++i;
            ++j;
        }
    }
    for (; i < p.size(); ++i) out.push_back(p[i]);
    for (; j < q.size(); ++j) {
        out.push_back({q[j].monomial, sign > 0 ? q[j].coeff : mpz_class(-q[j].coeff)});
    }
    return out;
}

} // namespace

MultiPoly& MultiPoly::operator+=(const MultiPoly& q) {
    if (q.is_zero()) return *this;
    if (is_zero()) return *this = q;
    terms_ = merge_terms(terms_, q.terms_, +1);
    return *this;
}

MultiPoly& MultiPoly::operator-=(const MultiPoly& q) {
    if (q.is_zero()) return *this;
    terms_ = merge_terms(terms_, q.terms_, -1);
    return *this;
}

MultiPoly operator*(const MultiPoly& p, const MultiPoly& q) {
    if (p.is_zero() || q.is_zero()) return {};
    if (p.terms_.size() == 1 || q.terms_.size() == 1) {
        // Multiplying by a single term preserves the term order.
        const auto& single = p.terms_.size() == 1 ? p.terms_[0] : q.terms_[0];
        const auto& many = p.terms_.size() == 1 ? q.terms_ : p.terms_;
        std::vector<Term> out;
        out.reserve(many.size());
        for (const auto& t : many) out.push_back({t.monomial * single.monomial, t.coeff * single.coeff});
        return MultiPoly(std::move(out));
    }
    std::unordered_map<Monomial, mpz_class, MonomialHash> acc;
    acc.reserve(p.terms_.size() * q.terms_.size());
    for (const auto& a : p.terms_) {
        for (const auto& b : q.terms_) {
            auto& slot = acc[a.monomial * b.monomial];
            mpz_addmul(slot.get_mpz_t(), a.coeff.get_mpz_t(), b.coeff.get_mpz_t());
        }
    }
    std::vector<Term> out;
    out.reserve(acc.size());
    for (auto& [m, c] : acc) {
        if (c != 0) out.push_back({m, std::move(c)});
    }
    std::sort(out.begin(), out.end(), grlex_greater);
    return MultiPoly(std::move(out));
}

MultiPoly& MultiPoly::operator*=(const MultiPoly& q) {
    return *this = *this * q;
}

bool operator==(const MultiPoly& p, const MultiPoly& q) {
    if (p.terms_.size() != q.terms_.size()) return false;
    for (std::size_t i = 0; i < p.terms_.size(); ++i) {
        if (p.terms_[i].coeff != q.terms_[i].coeff
            || !(p.terms_[i].monomial == q.terms_[i].monomial)) {
            return false;
        }
    }
    return true;
}

MultiPoly pow(const MultiPoly& p, unsigned e) {
    MultiPoly result(1);
    MultiPoly base = p;
    while (e > 0) {
        if (e & 1U) result *= base;
        e >>= 1U;
        if (e > 0) base *= base;
    }
    return result;
}

// ---------------------------------------------------------------- operations

MultiPoly partial(const MultiPoly& p, VarId v) {
    std::vector<Term> out;
    for (const auto& t : p.terms()) {
        unsigned e = t.monomial.exponent(v);
        if (e == 0) continue;
        out.push_back({t.monomial.with_exponent(v, e - 1), t.coeff * e});
    }
    // Lowering the exponent of a single variable can reorder terms.
    return MultiPoly::from_terms(std::move(out));
}

MultiPoly substitute_zero(const MultiPoly& p, VarId v) {
    std::vector<Term> out;
    for (const auto& t : p.terms()) {
        if (t.monomial.exponent(v) == 0) out.push_back(t);
    }
    return MultiPoly::from_terms(std::move(out));
}

bool divisible_by_var(const MultiPoly& p, VarId v) {
    return std::all_of(p.terms().begin(), p.terms().end(),
                       [v](const Term& t) { return t.monomial.exponent(v) > 0; });
}

std::optional<MultiPoly> divide_exact(const MultiPoly& num, const MultiPoly& den) {
    if (den.is_zero()) throw std::domain_error("divide_exact: division by zero");
    if (num.is_zero()) return MultiPoly{};
    if (den.term_count() == 1) {
        const auto& d = den.leading_term();
        std::vector<Term> out;
        out.reserve(num.term_count());
        for (const auto& t : num.terms()) {
            if (!d.monomial.divides(t.monomial) || !mpz_divisible_p(t.coeff.get_mpz_t(), d.coeff.get_mpz_t())) {
                return std::nullopt;
            }
            mpz_class c;
            mpz_divexact(c.get_mpz_t(), t.coeff.get_mpz_t(), d.coeff.get_mpz_t());
            out.push_back({t.monomial.quotient(d.monomial), std::move(c)});
        }
        return MultiPoly::from_terms(std::move(out));
    }

    // Leading-term reduction; every step cancels the current leading term.
    std::map<Monomial, mpz_class, GrlexGreater> rem;
    for (const auto& t : num.terms()) rem.emplace(t.monomial, t.coeff);
    const auto& lead = den.leading_term();
    std::vector<Term> quotient;
    while (!rem.empty()) {
        auto it = rem.begin();
        if (!lead.monomial.divides(it->first)
            || !mpz_divisible_p(it->second.get_mpz_t(), lead.coeff.get_mpz_t())) {
            return std::nullopt;
        }
        Monomial qm = it->first.quotient(lead.monomial);
        mpz_class qc;
        mpz_divexact(qc.get_mpz_t(), it->second.get_mpz_t(), lead.coeff.get_mpz_t());
        for (const auto& t : den.terms()) {
            Monomial m = qm * t.monomial;
            auto [slot, inserted] = rem.try_emplace(std::move(m));
            mpz_submul(slot->second.get_mpz_t(), qc.get_mpz_t(), t.coeff.get_mpz_t());
            if (slot->second == 0) rem.erase(slot);
        }
        quotient.push_back({std::move(qm), std::move(qc)});
    }
    // Quotient terms were produced in strictly descending order.
    return MultiPoly::from_terms(std::move(quotient));
}

MultiPoly remap(const MultiPoly& p, std::span<const VarId> mapping) {
    std::vector<Term> out;
    out.reserve(p.term_count());
    for (const auto& t : p.terms()) {
        Monomial m;
        for (const auto& f : t.monomial.factors()) {
            m = m * Monomial::variable(mapping[f.var], f.exp);
        }
        out.push_back({std::move(m), t.coeff});
    }
    return MultiPoly::from_terms(std::move(out));
}

std::uint64_t eval_mod_p(const MultiPoly& p, std::span<const std::uint64_t> point,
                         std::uint64_t prime) {
    std::uint64_t acc = 0;
    for (const auto& t : p.terms()) {
        std::uint64_t v;
        if (mpz_fits_slong_p(t.coeff.get_mpz_t())) {
            long c = mpz_get_si(t.coeff.get_mpz_t());
            v = c >= 0 ? static_cast<std::uint64_t>(c) % prime
                       : sub_mod(0, (0 - static_cast<std::uint64_t>(c)) % prime, prime);
        } else {
            v = residue(t.coeff, prime);
        }
        for (const auto& f : t.monomial.factors()) {
            if (f.var >= point.size()) throw std::out_of_range("eval_mod_p: point too short");
            std::uint64_t x = point[f.var];
            for (unsigned e = 0; e < f.exp; ++e) v = mul_mod(v, x, prime);
        }
        acc = add_mod(acc, v, prime);
    }
    return acc;
}

mpz_class eval_exact(const MultiPoly& p, std::span<const mpz_class> point) {
    mpz_class acc = 0;
    mpz_class power;
    for (const auto& t : p.terms()) {
        mpz_class v = t.coeff;
        for (const auto& f : t.monomial.factors()) {
            if (f.var >= point.size()) throw std::out_of_range("eval_exact: point too short");
            mpz_pow_ui(power.get_mpz_t(), point[f.var].get_mpz_t(), f.exp);
            v *= power;
        }
        acc += v;
    }
    return acc;
}

namespace {

template <class NameFn>
std::string render(const MultiPoly& p, NameFn&& name) {
    if (p.is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& t : p.terms()) {
        mpz_class mag = abs(t.coeff);
        bool negative = t.coeff < 0;
        if (first) {
            if (negative) os << '-';
        } else {
            os << (negative ? " - " : " + ");
        }
        first = false;
        bool wrote = false;
        if (mag != 1 || t.monomial.is_one()) {
            os << mag.get_str();
            wrote = true;
        }
        for (const auto& f : t.monomial.factors()) {
            if (wrote) os << '*';
            os << name(f.var);
            if (f.exp > 1) os << '^' << f.exp;
            wrote = true;
        }
    }
    return os.str();
}

} // namespace

std::string to_string(const MultiPoly& p, const VarTable& vars) {
    return render(p, [&](VarId v) { return vars.name(v); });
}

std::string to_string(const MultiPoly& p) {
    return render(p, [](VarId v) { return "x" + std::to_string(v); });
}

} // namespace lcmid
