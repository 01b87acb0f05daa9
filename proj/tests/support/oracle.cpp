#include "oracle.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <stdexcept>

namespace oracle {

using lcmid::Edge;
using lcmid::Monomial;
using lcmid::Parameter;
using lcmid::Term;
using lcmid::VarId;

namespace {

class Parser {
public:
    Parser(const std::string& s, const VarTable& vars) : s_(s), vars_(vars) {}

    MultiPoly run() {
        MultiPoly p = expr();
        skip();
        if (pos_ != s_.size()) fail("trailing input");
        return p;
    }

private:
    [[noreturn]] void fail(const std::string& why) {
        throw std::runtime_error("parse error at " + std::to_string(pos_) + ": " + why + " in '" + s_ + "'");
    }

    void skip() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }

    char peek() {
        skip();
        return pos_ < s_.size() ? s_[pos_] : '\0';
    }

    MultiPoly expr() {
        MultiPoly acc;
        bool first = true;
        while (true) {
            char c = peek();
            int sign = 1;
            if (c == '+' || c == '-') {
                sign = c == '-' ? -1 : 1;
                ++pos_;
            } else if (!first) {
                break;
            }
            MultiPoly t = term();
            acc += sign > 0 ? t : -t;
            first = false;
        }
        return acc;
    }

    bool starts_factor(char c) { return c == 'k' || c == '(' || std::isdigit(static_cast<unsigned char>(c)); }

    MultiPoly term() {
        MultiPoly acc = power();
        while (true) {
            char c = peek();
            if (c == '*') {
                ++pos_;
                acc = acc * power();
            } else if (starts_factor(c)) {
                acc = acc * power();
            } else {
                return acc;
            }
        }
    }

    MultiPoly power() {
        MultiPoly base = atom();
        if (peek() == '^') {
            ++pos_;
            base = lcmid::pow(base, static_cast<unsigned>(number()));
        }
        return base;
    }

    long number() {
        skip();
        std::size_t start = pos_;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        if (start == pos_) fail("expected number");
        return std::stol(s_.substr(start, pos_ - start));
    }

    MultiPoly atom() {
        char c = peek();
        if (c == '(') {
            ++pos_;
            MultiPoly p = expr();
            if (peek() != ')') fail("expected )");
            ++pos_;
            return p;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) return MultiPoly(number());
        if (c == 'k') {
            ++pos_;
            int i = 0, j = 0;
            if (pos_ < s_.size() && s_[pos_] == '_') {
                ++pos_;
                if (s_.at(pos_) != '{') fail("expected {");
                std::size_t close = s_.find('}', pos_);
                std::string inner = s_.substr(pos_ + 1, close - pos_ - 1);
                pos_ = close + 1;
                auto comma = inner.find(',');
                if (comma != std::string::npos) {
                    i = std::stoi(inner.substr(0, comma));
                    j = std::stoi(inner.substr(comma + 1));
                } else if (inner.size() == 2) {
                    i = inner[0] - '0';
                    j = inner[1] - '0';
                } else {
                    fail("ambiguous subscript");
                }
            } else {
                if (pos_ + 2 > s_.size()) fail("short name");
                i = s_[pos_] - '0';
                j = s_[pos_ + 1] - '0';
                pos_ += 2;
            }
            auto v = vars_.find(Parameter{i, j});
            if (!v) fail("unknown parameter k" + std::to_string(i) + std::to_string(j));
            return MultiPoly::variable(*v);
        }
        fail("unexpected character");
    }

    const std::string& s_;
    const VarTable& vars_;
    std::size_t pos_ = 0;
};

int parity(const std::vector<std::size_t>& perm) {
    int inv = 0;
    for (std::size_t a = 0; a < perm.size(); ++a) {
        for (std::size_t b = a + 1; b < perm.size(); ++b) inv += perm[a] > perm[b];
    }
    return inv % 2 ? -1 : 1;
}

// A = compartmental matrix built straight from the definition.
PolyMatrix build_a(const Model& m, const VarTable& vars) {
    const auto n = static_cast<std::size_t>(m.size());
    PolyMatrix a(n, n);
    for (const auto& e : m.edges()) {
        auto k = MultiPoly::variable(vars.at(Parameter::edge(e.from, e.to)));
        a(static_cast<std::size_t>(e.to - 1), static_cast<std::size_t>(e.from - 1)) += k;
        a(static_cast<std::size_t>(e.from - 1), static_cast<std::size_t>(e.from - 1)) -= k;
    }
    for (int l : m.leaks()) {
        a(static_cast<std::size_t>(l - 1), static_cast<std::size_t>(l - 1)) -=
            MultiPoly::variable(vars.at(Parameter::leak(l)));
    }
    return a;
}

std::vector<MultiPoly> collect(const MultiPoly& p, VarId d, std::size_t orders) {
    std::vector<std::vector<Term>> parts(orders);
    for (const auto& t : p.terms()) {
        unsigned e = t.monomial.exponent(d);
        if (e >= orders) throw std::logic_error("derivative order out of range");
        parts[e].push_back({t.monomial.with_exponent(d, 0), t.coeff});
    }
    std::vector<MultiPoly> out;
    for (auto& v : parts) out.push_back(MultiPoly::from_terms(std::move(v)));
    return out;
}

} // namespace

MultiPoly parse(const std::string& text, const VarTable& vars) {
    return Parser(text, vars).run();
}

MultiPoly leibniz_det(const PolyMatrix& m) {
    if (!m.is_square()) throw std::invalid_argument("square matrix required");
    std::vector<std::size_t> perm(m.rows());
    std::iota(perm.begin(), perm.end(), 0);
    MultiPoly sum;
    do {
        MultiPoly prod(parity(perm));
        for (std::size_t r = 0; r < perm.size() && !prod.is_zero(); ++r) prod = prod * m(r, perm[r]);
        sum += prod;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return sum;
}

bool strongly_connected(int n, const std::vector<Edge>& edges) {
    const auto N = static_cast<std::size_t>(n);
    std::vector<std::vector<bool>> reach(N, std::vector<bool>(N, false));
    for (std::size_t i = 0; i < N; ++i) reach[i][i] = true;
    for (const auto& e : edges) reach[static_cast<std::size_t>(e.from - 1)][static_cast<std::size_t>(e.to - 1)] = true;
    for (std::size_t k = 0; k < N; ++k) {
        for (std::size_t i = 0; i < N; ++i) {
            for (std::size_t j = 0; j < N; ++j) {
                if (reach[i][k] && reach[k][j]) reach[i][j] = true;
            }
        }
    }
    for (const auto& row : reach) {
        if (std::find(row.begin(), row.end(), false) != row.end()) return false;
    }
    return true;
}

IoOracle io_equation(const Model& m, int out) {
    const VarTable vars = m.var_table();
    const auto d = static_cast<VarId>(vars.size());
    const auto n = static_cast<std::size_t>(m.size());
    PolyMatrix a = build_a(m, vars);
    PolyMatrix op(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) op(i, j) = -a(i, j);
        op(i, i) += MultiPoly::variable(d);
    }
    IoOracle res;
    res.lhs = collect(leibniz_det(op), d, n + 1);
    for (int in : m.inputs()) {
        std::vector<std::size_t> rows, cols;
        for (std::size_t r = 0; r < n; ++r) {
            if (r != static_cast<std::size_t>(in - 1)) rows.push_back(r);
            if (r != static_cast<std::size_t>(out - 1)) cols.push_back(r);
        }
        MultiPoly minor = n == 1 ? MultiPoly(1) : leibniz_det(op.submatrix(rows, cols));
        if ((in + out) % 2) minor = -minor;
        res.rhs.push_back(collect(minor, d, n));
    }
    return res;
}

std::vector<MultiPoly> coefficient_map(const Model& m) {
    std::vector<MultiPoly> out;
    for (int y : m.outputs()) {
        auto eq = io_equation(m, y);
        for (std::size_t k = eq.lhs.size(); k-- > 0;) {
            if (!eq.lhs[k].is_constant()) out.push_back(eq.lhs[k]);
        }
        for (const auto& r : eq.rhs) {
            for (std::size_t k = r.size(); k-- > 0;) {
                if (!r[k].is_constant()) out.push_back(r[k]);
            }
        }
    }
    return out;
}

std::size_t symbolic_rank(const std::vector<MultiPoly>& coeffs, std::size_t nvars) {
    PolyMatrix j(coeffs.size(), nvars);
    for (std::size_t r = 0; r < coeffs.size(); ++r) {
        for (std::size_t c = 0; c < nvars; ++c) j(r, c) = lcmid::partial(coeffs[r], static_cast<VarId>(c));
    }
    // Largest k with a nonzero k x k minor.
    for (std::size_t k = std::min(coeffs.size(), nvars); k > 0; --k) {
        std::vector<bool> rsel(coeffs.size(), false), csel(nvars, false);
        std::fill(rsel.begin(), rsel.begin() + static_cast<long>(k), true);
        do {
            std::vector<std::size_t> rows;
            for (std::size_t i = 0; i < rsel.size(); ++i) {
                if (rsel[i]) rows.push_back(i);
            }
            std::fill(csel.begin(), csel.end(), false);
            std::fill(csel.begin(), csel.begin() + static_cast<long>(k), true);
            do {
                std::vector<std::size_t> cols;
                for (std::size_t i = 0; i < csel.size(); ++i) {
                    if (csel[i]) cols.push_back(i);
                }
                if (!leibniz_det(j.submatrix(rows, cols)).is_zero()) return k;
            } while (std::prev_permutation(csel.begin(), csel.end()));
        } while (std::prev_permutation(rsel.begin(), rsel.end()));
    }
    return 0;
}

MultiPoly random_poly(std::mt19937_64& rng, std::size_t nvars, int terms, int max_exp, int max_coeff) {
    std::uniform_int_distribution<int> coeff(-max_coeff, max_coeff);
    std::uniform_int_distribution<int> expo(0, max_exp);
    MultiPoly p;
    for (int t = 0; t < terms; ++t) {
        MultiPoly mono(coeff(rng));
        for (std::size_t v = 0; v < nvars; ++v) {
            mono = mono * lcmid::pow(MultiPoly::variable(static_cast<VarId>(v)), static_cast<unsigned>(expo(rng)));
        }
        p += mono;
    }
    return p;
}

Model random_model(std::mt19937_64& rng, int n, int max_leaks) {
    std::uniform_int_distribution<int> node(1, n);
    std::bernoulli_distribution coin(0.4);
    while (true) {
        std::vector<Edge> edges;
        for (int f = 1; f <= n; ++f) {
            for (int t = 1; t <= n; ++t) {
                if (f != t && coin(rng)) edges.push_back({f, t});
            }
        }
        if (!strongly_connected(n, edges)) continue;
        std::vector<int> leaks;
        std::uniform_int_distribution<int> nleaks(0, max_leaks);
        for (int k = nleaks(rng); k > 0; --k) leaks.push_back(node(rng));
        return Model(n, edges, {node(rng)}, {node(rng)}, leaks);
    }
}

} // namespace oracle
