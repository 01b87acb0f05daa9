#include "lcm/modular.hpp"

#include <stdexcept>
#include <utility>

namespace lcmid {

std::uint64_t pow_mod(std::uint64_t base, std::uint64_t exp, std::uint64_t p) {
    std::uint64_t result = 1 % p;
    base %= p;
    while (exp > 0) {
        if (exp & 1U) result = mul_mod(result, base, p);
        base = mul_mod(base, base, p);
        exp >>= 1U;
    }
    return result;
}

std::uint64_t inv_mod(std::uint64_t a, std::uint64_t p) {
    if (a % p == 0) throw std::domain_error("inv_mod: zero has no inverse");
    return pow_mod(a, p - 2, p);  // p prime
}

std::uint64_t residue(const mpz_class& x, std::uint64_t p) {
    mpz_class r;
    mpz_class modulus;
    mpz_import(modulus.get_mpz_t(), 1, 1, sizeof(p), 0, 0, &p);
    mpz_fdiv_r(r.get_mpz_t(), x.get_mpz_t(), modulus.get_mpz_t());
    std::uint64_t out = 0;
    if (r != 0) mpz_export(&out, nullptr, 1, sizeof(out), 0, 0, r.get_mpz_t());
    return out;
}

std::size_t rank_mod_p(std::vector<std::uint64_t> a, std::size_t rows, std::size_t cols,
                       std::uint64_t p) {
    if (a.size() != rows * cols) throw std::invalid_argument("rank_mod_p: shape mismatch");
    std::size_t rank = 0;
    for (std::size_t c = 0; c < cols && rank < rows; ++c) {
        std::size_t pivot = rank;
        while (pivot < rows && a[pivot * cols + c] == 0) ++pivot;
        if (pivot == rows) continue;
        if (pivot != rank) {
            for (std::size_t k = 0; k < cols; ++k) std::swap(a[pivot * cols + k], a[rank * cols + k]);
        }
        std::uint64_t inv = inv_mod(a[rank * cols + c], p);
        for (std::size_t r = rank + 1; r < rows; ++r) {
            std::uint64_t f = a[r * cols + c];
            if (f == 0) continue;
            f = mul_mod(f, inv, p);
            for (std::size_t k = c; k < cols; ++k) {
                a[r * cols + k] = sub_mod(a[r * cols + k], mul_mod(f, a[rank * cols + k], p), p);
            }
        }
        ++rank;
    }
    return rank;
}

std::size_t rank_exact(std::vector<mpz_class> a, std::size_t rows, std::size_t cols) {
    if (a.size() != rows * cols) throw std::invalid_argument("rank_exact: shape mismatch");
    std::size_t rank = 0;
    mpz_class prev = 1;
    mpz_class t;
    for (std::size_t c = 0; c < cols && rank < rows; ++c) {
        std::size_t pivot = rank;
        while (pivot < rows && a[pivot * cols + c] == 0) ++pivot;
        if (pivot == rows) continue;
        if (pivot != rank) {
            for (std::size_t k = 0; k < cols; ++k) std::swap(a[pivot * cols + k], a[rank * cols + k]);
        }
        const mpz_class& piv = a[rank * cols + c];
        for (std::size_t r = rank + 1; r < rows; ++r) {
            mpz_class f = a[r * cols + c];
            for (std::size_t k = c; k < cols; ++k) {
                // Bareiss step; the division by the previous pivot is exact.
                t = piv * a[r * cols + k] - f * a[rank * cols + k];
                mpz_divexact(a[r * cols + k].get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
            }
        }
        prev = piv;
        ++rank;
    }
    return rank;
}

} // namespace lcmid
