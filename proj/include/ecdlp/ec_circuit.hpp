#pragma once

// In-place addition of a classical point to a point held in quantum registers.

#include <cstdint>
#include <string>

#include "ecdlp/circuit.hpp"
#include "ecdlp/classical_ec.hpp"
#include "ecdlp/kaliski.hpp"
#include "ecdlp/montgomery.hpp"
#include "ecdlp/qarith.hpp"
#include "ecdlp/uncompute.hpp"

namespace ecdlp {

struct EcPointRegs {
    ModReg x;
    ModReg y;
};

struct EcAddOptions {
    /// Backend for the arithmetic outside the inversions.
    Adder arith = Adder::gidney;
    /// Backend inside the conjugated inversions. Gidney's measured AND uncomputations are
    /// undone as fresh ANDs, so both backends give an exactly inverted region.
    Adder inversion = Adder::gidney;
};

inline EcPointRegs alloc_point(Circuit& circ, std::int64_t p, const std::string& label = "ecp") {
    return {alloc_modreg(circ, p, label + ".x"), alloc_modreg(circ, p, label + ".y")};
}

inline void load_point(Circuit& circ, const EcPointRegs& pt, const Point& P) {
    if (P.is_infinity()) throw Error(ErrorKind::InvalidArgument, "the neutral element has no affine encoding");
    for (std::size_t i = 0; i < pt.x.size(); ++i) {
        if ((P.x() >> i) & 1) circ.x(pt.x[i]);
        if ((P.y() >> i) & 1) circ.x(pt.y[i]);
    }
}

namespace detail {

/// Computes the standard-form product a*b into a fresh register, hands it to `use`, then
/// uncomputes it by replaying the multiplication backwards.
template <class Use>
void with_product(Circuit& circ, Adder be, const ModReg& a, const ModReg& b, Use&& use) {
    ModReg temp;
    auto seq = capture(circ, [&](Circuit& c) {
        temp = montgomery_mul(c, be, a, b);
        to_standard_qm(c, be, temp);
    });
    use(temp);
    circ.append_inverse(seq, be == Adder::gidney);
}

/// Within a conjugated inversion of x, XORs the standard-form product y * x^-1 into lam.
inline void xor_quotient(Circuit& circ, const EcAddOptions& opt, const EcPointRegs& pt, const ModReg& lam) {
    const std::int64_t p = pt.x.modulus;
    QReg m = circ.alloc_register(static_cast<std::size_t>(kaliski_rounds(p)), "m");
    ModReg inv = pt.x;
    conjugate(
        circ, [&](Circuit& c) { kaliski_quantum_raw(c, opt.inversion, inv, m); },
        [&](Circuit& c) {
            with_product(c, opt.arith, pt.y, inv, [&](const ModReg& t) {
                for (std::size_t i = 0; i < t.size(); ++i) c.cx(t[i], lam[i]);
            });
        },
        opt.inversion == Adder::gidney);
    circ.dealloc(m);
}

}  // namespace detail

/// True when ell_add_inpl handles (Q, A) correctly with the control in the given state.
/// With the control off the slope is still computed, so only a shared x coordinate breaks it.
inline bool addition_supported(const Curve& c, const Point& Q, const Point& A, bool ctrl_on = true) {
    if (Q.is_infinity() || A.is_infinity()) return false;
    return ctrl_on ? !is_exceptional_addition(c, Q, A) : Q.x() != A.x();
}

/// pt <- pt + G (generic case: pt != +-G, pt + G != +-G). With ctrl, acts only when ctrl is 1.
inline void ell_add_inpl(Circuit& circ, const EcPointRegs& pt, const Point& G, Ctrl ctrl = {},
                         const EcAddOptions& opt = {}) {
    if (G.is_infinity()) throw Error(ErrorKind::InvalidArgument, "cannot add the neutral element in the generic adder");
    const std::int64_t p = pt.x.modulus;
    const Adder be = opt.arith;
    const std::int64_t gx = G.x(), gy = G.y();

    // Step 1: (x, y) <- (x - gx, y - gy).
    mod_adder(circ, be, mod(-gy, p), pt.y.reg, p, ctrl);
    mod_adder(circ, be, mod(-gx, p), pt.x.reg, p);

    // Step 2: lambda = y / x, then y <- y - lambda * x = 0.
    ModReg lam = alloc_modreg(circ, p, "lambda");
    detail::xor_quotient(circ, opt, pt, lam);
    detail::with_product(circ, be, lam, pt.x, [&](const ModReg& t) { mod_subtractor(circ, be, t.reg, pt.y.reg, p); });

    // Step 3: x <- x + 3gx - lambda^2 = gx - x3.
    mod_adder(circ, be, mod(3 * gx, p), pt.x.reg, p, ctrl);
    detail::with_product(circ, be, lam, lam, [&](const ModReg& t) { mod_subtractor(circ, be, t.reg, pt.x.reg, p, ctrl); });

    // Step 4: y <- lambda * (gx - x3) = y3 + gy.
    detail::with_product(circ, be, lam, pt.x, [&](const ModReg& t) { mod_adder(circ, be, t.reg, pt.y.reg, p); });

    // Step 5: lambda = y / x once more, which clears the slope register.
    detail::xor_quotient(circ, opt, pt, lam);

    // Step 6.
    circ.dealloc(lam.reg);
    mod_adder(circ, be, mod(-gy, p), pt.y.reg, p, ctrl);

    // Step 7: x <- -(gx - x3) + gx. Negating under ctrl before the unconditional +gx keeps
    // ctrl = 0 an identity (it only undoes step 1).
    inpl_rsub(circ, be, pt.x, p, ctrl);
    mod_adder(circ, be, gx, pt.x.reg, p);
}

/// pt <- pt + k*P for the quantum scalar k, adding the classically doubled 2^i P under k_i.
inline void ctrl_ell_mult_add(Circuit& circ, const Curve& curve, const Point& P, const EcPointRegs& pt, const QReg& k,
                              const EcAddOptions& opt = {}) {
    Point power = P;
    for (std::size_t i = 0; i < k.size(); ++i) {
        if (!power.is_infinity()) ell_add_inpl(circ, pt, power, k[i], opt);
        power = ec_add(curve, power, power);
    }
}

}  // namespace ecdlp
