#pragma once

#include <cstdint>
#include <numeric>
#include <optional>

#include "ecdlp/error.hpp"

namespace ecdlp {

/// Least non-negative residue of `a` modulo `m` (m > 0).
constexpr std::int64_t mod(std::int64_t a, std::int64_t m) {
    std::int64_t r = a % m;
    return r < 0 ? r + m : r;
}

/// Number of bits needed to write `v` in binary; bit_length(0) == 0.
constexpr int bit_length(std::uint64_t v) {
    int n = 0;
    while (v != 0) {
        ++n;
        v >>= 1;
    }
    return n;
}

/// Modular inverse by the extended Euclidean algorithm; nullopt when gcd(a, m) != 1.
inline std::optional<std::int64_t> try_inverse_mod(std::int64_t a, std::int64_t m) {
    std::int64_t old_r = mod(a, m), r = m;
    std::int64_t old_s = 1, s = 0;
    while (r != 0) {
        std::int64_t q = old_r / r;
        std::int64_t t = old_r - q * r;
        old_r = r;
        r = t;
        t = old_s - q * s;
        old_s = s;
        s = t;
    }
    if (old_r != 1) return std::nullopt;
    return mod(old_s, m);
}

inline std::int64_t inverse_mod(std::int64_t a, std::int64_t m) {
    auto inv = try_inverse_mod(a, m);
    if (!inv) {
        throw Error(ErrorKind::NotInvertible,
                    std::to_string(a) + " has no inverse modulo " + std::to_string(m));
    }
    return *inv;
}

/// base^exp mod m; negative exponents go through the modular inverse.
inline std::int64_t pow_mod(std::int64_t base, std::int64_t exp, std::int64_t m) {
    if (m == 1) return 0;
    if (exp < 0) {
        base = inverse_mod(base, m);
        exp = -exp;
    }
    std::int64_t result = 1;
    std::int64_t b = mod(base, m);
    while (exp > 0) {
        if (exp & 1) result = (result * b) % m;
        b = (b * b) % m;
        exp >>= 1;
    }
    return result;
}

/// Deterministic trial division; moduli in this library are tiny.
constexpr bool is_prime(std::int64_t n) {
    if (n < 2) return false;
    if (n % 2 == 0) return n == 2;
    for (std::int64_t d = 3; d * d <= n; d += 2) {
        if (n % d == 0) return false;
    }
    return true;
}

}  // namespace ecdlp
