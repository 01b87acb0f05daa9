#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include <gmpxx.h>

namespace lcmid {

/// Fixed public list of primes just below 2^62, largest first.
inline constexpr std::array<std::uint64_t, 16> kWordPrimes = {
    0x3fffffffffffffc7ULL, 0x3fffffffffffffa9ULL, 0x3fffffffffffff8bULL, 0x3fffffffffffff71ULL,
    0x3fffffffffffff67ULL, 0x3fffffffffffff59ULL, 0x3fffffffffffff55ULL, 0x3fffffffffffff3dULL,
    0x3fffffffffffff35ULL, 0x3ffffffffffffeefULL, 0x3ffffffffffffee1ULL, 0x3ffffffffffffec3ULL,
    0x3ffffffffffffe45ULL, 0x3ffffffffffffe1dULL, 0x3ffffffffffffe11ULL, 0x3ffffffffffffdc1ULL,
};

inline std::uint64_t add_mod(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
    std::uint64_t s = a + b;  // a, b < p < 2^63, no overflow
    return s >= p ? s - p : s;
}

inline std::uint64_t sub_mod(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
    return a >= b ? a - b : a + (p - b);
}

__extension__ using uint128 = unsigned __int128;

inline std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
    return static_cast<std::uint64_t>((static_cast<uint128>(a) * b) % p);
}

std::uint64_t pow_mod(std::uint64_t base, std::uint64_t exp, std::uint64_t p);
std::uint64_t inv_mod(std::uint64_t a, std::uint64_t p);

/// Nonnegative residue of an arbitrary-precision integer.
std::uint64_t residue(const mpz_class& x, std::uint64_t p);

/// Rank of a row-major rows x cols matrix over GF(p). The matrix is consumed.
std::size_t rank_mod_p(std::vector<std::uint64_t> a, std::size_t rows, std::size_t cols,
                       std::uint64_t p);

/// Rank over Q of an integer matrix by fraction-free elimination.
std::size_t rank_exact(std::vector<mpz_class> a, std::size_t rows, std::size_t cols);

} // namespace lcmid
