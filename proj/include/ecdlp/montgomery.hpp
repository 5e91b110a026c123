#pragma once

// Montgomery representation: a register with shift k holds a * 2^k mod p.

#include <cstdint>

#include "ecdlp/circuit.hpp"
#include "ecdlp/modmath.hpp"
#include "ecdlp/qarith.hpp"

namespace ecdlp {

inline std::int64_t to_montgomery_classical(std::int64_t a, int k, std::int64_t p) {
    return mod(a, p) * pow_mod(2, k, p) % p;
}

inline std::int64_t from_montgomery_classical(std::int64_t raw, int k, std::int64_t p) {
    return mod(raw, p) * pow_mod(2, -k, p) % p;
}

/// Decoded value of a raw residue held by register `x`.
inline std::int64_t decode(const ModReg& x, std::int64_t raw) { return from_montgomery_classical(raw, x.shift, x.modulus); }

inline void check_same_modulus(const ModReg& x, const ModReg& y) {
    if (x.modulus != y.modulus) {
        throw Error(ErrorKind::ModulusMismatch,
                    "moduli " + std::to_string(x.modulus) + " and " + std::to_string(y.modulus) + " differ");
    }
}

/// x <- c * x mod p: multiply-accumulate into a fresh register, swap, then clear the old
/// value by subtracting c^-1 times the new one.
inline void inplace_mul_const(Circuit& circ, Adder be, const ModReg& x, std::int64_t c) {
    const std::int64_t p = x.modulus;
    const std::int64_t cc = mod(c, p);
    const std::int64_t cinv = inverse_mod(cc, p);
    if (cc == 1) return;
    QReg z = circ.alloc_register(x.size(), "mulc");
    for (std::size_t i = 0; i < x.size(); ++i) {
        mod_adder(circ, be, cc * pow_mod(2, static_cast<std::int64_t>(i), p) % p, z, p, x[i]);
    }
    for (std::size_t i = 0; i < x.size(); ++i) circ.swap(x[i], z[i]);
    for (std::size_t i = 0; i < x.size(); ++i) {
        mod_subtractor(circ, be, cinv * pow_mod(2, static_cast<std::int64_t>(i), p) % p, z, p, x[i]);
    }
    circ.dealloc(z);
}

inline void to_montgomery_qm(Circuit& circ, Adder be, ModReg& x, int k) {
    if (x.shift != 0) throw Error(ErrorKind::ShiftAlreadySet, "register already carries shift " + std::to_string(x.shift));
    inplace_mul_const(circ, be, x, pow_mod(2, k, x.modulus));
    x.shift = k;
}

inline void to_standard_qm(Circuit& circ, Adder be, ModReg& x) {
    inplace_mul_const(circ, be, x, pow_mod(2, -x.shift, x.modulus));
    x.shift = 0;
}

/// z <- z / 2 mod p (odd p), the inverse of modular doubling.
inline void mod_halve(Circuit& circ, Adder be, const QReg& z, std::int64_t p) {
    emit_inverse(circ, [&](Circuit& c) { mod_double(c, be, z, p); }, be == Adder::gidney);
}

/// Fresh register z with decode(z) = decode(x) * decode(y). Built by Montgomery halving:
/// for each bit x_i, z += x_i * y then z <- z/2, so z holds x*y*2^-n and the recorded
/// shift is shift(x) + shift(y) - n.
inline ModReg montgomery_mul(Circuit& circ, Adder be, const ModReg& x, const ModReg& y, Ctrl ctrl = {}) {
    check_same_modulus(x, y);
    const std::int64_t p = x.modulus;
    ModReg z{circ.alloc_register(y.size(), "prod"), p, x.shift + y.shift - static_cast<int>(x.size())};
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (ctrl) {
            QubitId t = detail::and_compute(circ, *ctrl, x[i]);
            mod_adder(circ, be, y.reg, z.reg, p, t);
            detail::and_uncompute(circ, be, *ctrl, x[i], t);
        } else {
            mod_adder(circ, be, y.reg, z.reg, p, x[i]);
        }
        mod_halve(circ, be, z.reg, p);
    }
    return z;
}

/// b <- b + a at decode level, for registers with possibly different shifts k (a) and l (b).
/// Each bit a_i contributes the constant 2^(i-k) * 2^l into b.
inline void montgomery_addition(Circuit& circ, Adder be, const ModReg& a, const ModReg& b, Ctrl ctrl = {}) {
    check_same_modulus(a, b);
    const std::int64_t p = a.modulus;
    for (std::size_t i = 0; i < a.size(); ++i) {
        std::int64_t c = pow_mod(2, static_cast<std::int64_t>(i) - a.shift + b.shift, p);
        if (ctrl) {
            QubitId t = detail::and_compute(circ, *ctrl, a[i]);
            mod_adder(circ, be, c, b.reg, p, t);
            detail::and_uncompute(circ, be, *ctrl, a[i], t);
        } else {
            mod_adder(circ, be, c, b.reg, p, a[i]);
        }
    }
}

}  // namespace ecdlp
