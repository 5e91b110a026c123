#pragma once

// Integer and modular arithmetic on little-endian quantum registers.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ecdlp/circuit.hpp"
#include "ecdlp/modmath.hpp"

namespace ecdlp {

enum class Adder { gidney, cuccaro };

inline const char* to_string(Adder a) { return a == Adder::gidney ? "gidney" : "cuccaro"; }

using Ctrl = std::optional<QubitId>;

/// Register holding residues modulo `modulus`, carrying its Montgomery shift as metadata.
struct ModReg {
    QReg reg;
    std::int64_t modulus = 0;
    int shift = 0;

    std::size_t size() const { return reg.size(); }
    QubitId operator[](std::size_t i) const { return reg[i]; }
};

/// Bits needed for residues below n.
inline std::size_t residue_width(std::int64_t n) { return static_cast<std::size_t>(std::max(1, bit_length(static_cast<std::uint64_t>(n - 1)))); }

inline ModReg alloc_modreg(Circuit& circ, std::int64_t modulus, const std::string& label) {
    return ModReg{circ.alloc_register(residue_width(modulus), label), modulus, 0};
}

namespace detail {

inline std::uint64_t width_mask(std::size_t w) { return w >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << w) - 1; }

/// Fresh qubit holding a AND b (a plain copy when a and b are the same qubit).
inline QubitId and_compute(Circuit& circ, QubitId a, QubitId b) {
    QubitId t = circ.alloc_qubit("and");
    if (a == b) circ.cx(a, t);
    else circ.and_gate(a, b, t);
    return t;
}

inline void and_uncompute(Circuit& circ, Adder be, QubitId a, QubitId b, QubitId t) {
    if (a == b) {
        circ.cx(a, t);
        circ.dealloc(t);
    } else if (be == Adder::gidney) {
        circ.and_uncompute_mbu(a, b, t);
    } else {
        circ.ccx(a, b, t);
        circ.dealloc(t);
    }
}

/// Ripple-carry addition with temporary logical-AND carries (b += a, width(a) <= width(b)).
inline void gidney_add(Circuit& circ, const QReg& a, const QReg& b) {
    const std::size_t w = b.size(), k = a.size();
    if (w == 1) {
        circ.cx(a[0], b[0]);
        return;
    }
    std::vector<QubitId> car(w);
    for (std::size_t i = 0; i + 1 < w; ++i) {
        if (i < k) {
            if (i > 0) {
                circ.cx(car[i], a[i]);
                circ.cx(car[i], b[i]);
            }
            car[i + 1] = and_compute(circ, a[i], b[i]);
            if (i > 0) circ.cx(car[i], car[i + 1]);
        } else {
            car[i + 1] = and_compute(circ, b[i], car[i]);
        }
    }
    if (w - 1 < k) circ.cx(a[w - 1], b[w - 1]);
    circ.cx(car[w - 1], b[w - 1]);
    for (std::size_t i = w - 1; i-- > 0;) {
        if (i < k) {
            if (i > 0) circ.cx(car[i], car[i + 1]);
            circ.and_uncompute_mbu(a[i], b[i], car[i + 1]);
            if (i > 0) circ.cx(car[i], a[i]);
            circ.cx(a[i], b[i]);
        } else {
            circ.and_uncompute_mbu(b[i], car[i], car[i + 1]);
            circ.cx(car[i], b[i]);
        }
    }
}

inline void maj(Circuit& circ, QubitId c, QubitId b, QubitId a) {
    circ.cx(a, b);
    circ.cx(a, c);
    circ.ccx(c, b, a);
}

inline void uma(Circuit& circ, QubitId c, QubitId b, QubitId a) {
    circ.ccx(c, b, a);
    circ.cx(a, c);
    circ.cx(c, b);
}

/// Unitary MAJ/UMA ripple-carry addition (b += a); a is zero-padded to width(b).
inline void cuccaro_add(Circuit& circ, const QReg& a_in, const QReg& b) {
    const std::size_t w = b.size();
    QReg a = a_in;
    QReg pad;
    if (a.size() < w) {
        pad = circ.alloc_register(w - a.size(), "pad");
        for (auto q : pad) a.bits.push_back(q);
    }
    if (w == 1) {
        circ.cx(a[0], b[0]);
    } else {
        QubitId c0 = circ.alloc_qubit("c0");
        maj(circ, c0, b[0], a[0]);
        for (std::size_t i = 1; i + 1 < w; ++i) maj(circ, a[i - 1], b[i], a[i]);
        circ.cx(a[w - 2], b[w - 1]);
        circ.cx(a[w - 1], b[w - 1]);
        for (std::size_t i = w - 1; i-- > 1;) uma(circ, a[i - 1], b[i], a[i]);
        uma(circ, c0, b[0], a[0]);
        circ.dealloc(c0);
    }
    if (!pad.empty()) circ.dealloc(pad);
}

inline void raw_add(Circuit& circ, Adder be, const QReg& a, const QReg& b) {
    if (be == Adder::gidney) gidney_add(circ, a, b);
    else cuccaro_add(circ, a, b);
}

inline void check_widths(const QReg& a, const QReg& b) {
    if (a.empty() || b.empty() || a.size() > b.size()) {
        throw Error(ErrorKind::WidthMismatch, "addend width " + std::to_string(a.size()) + " vs target width " +
                                                  std::to_string(b.size()));
    }
}

/// Scratch register of width w holding constant c (optionally only when ctrl is set).
inline QReg load_const(Circuit& circ, std::uint64_t c, std::size_t w, Ctrl ctrl) {
    QReg s = circ.alloc_register(w, "const");
    for (std::size_t i = 0; i < w; ++i) {
        if ((c >> i) & 1u) {
            if (ctrl) circ.cx(*ctrl, s[i]);
            else circ.x(s[i]);
        }
    }
    return s;
}

inline void unload_const(Circuit& circ, const QReg& s, std::uint64_t c, Ctrl ctrl) {
    for (std::size_t i = 0; i < s.size(); ++i) {
        if ((c >> i) & 1u) {
            if (ctrl) circ.cx(*ctrl, s[i]);
            else circ.x(s[i]);
        }
    }
    circ.dealloc(s);
}

}  // namespace detail

/// b <- (a + b) mod 2^width(b), optionally controlled.
inline void build_adder(Circuit& circ, Adder be, const QReg& a, const QReg& b, Ctrl ctrl = {}) {
    detail::check_widths(a, b);
    if (!ctrl) {
        detail::raw_add(circ, be, a, b);
        return;
    }
    // Copy ctrl AND a into scratch, add the scratch, then erase it.
    QReg s;
    for (auto q : a) s.bits.push_back(detail::and_compute(circ, *ctrl, q));
    detail::raw_add(circ, be, s, b);
    for (std::size_t i = s.size(); i-- > 0;) detail::and_uncompute(circ, be, *ctrl, a[i], s[i]);
}

/// b <- (b + c) mod 2^width(b) for a classical constant c.
inline void build_adder(Circuit& circ, Adder be, std::int64_t c, const QReg& b, Ctrl ctrl = {}) {
    const std::size_t w = b.size();
    const std::uint64_t cv = static_cast<std::uint64_t>(c) & detail::width_mask(w);
    QReg s = detail::load_const(circ, cv, w, ctrl);
    detail::raw_add(circ, be, s, b);
    detail::unload_const(circ, s, cv, ctrl);
}

/// b <- (b - a) mod 2^width(b), emitted as the reversed adder.
inline void build_subtractor(Circuit& circ, Adder be, const QReg& a, const QReg& b, Ctrl ctrl = {}) {
    detail::check_widths(a, b);
    emit_inverse(circ, [&](Circuit& c) { build_adder(c, be, a, b, ctrl); }, be == Adder::gidney);
}

inline void build_subtractor(Circuit& circ, Adder be, std::int64_t c, const QReg& b, Ctrl ctrl = {}) {
    emit_inverse(circ, [&](Circuit& cc) { build_adder(cc, be, c, b, ctrl); }, be == Adder::gidney);
}

namespace detail {

/// Either a quantum register or a classical constant.
struct Addend {
    const QReg* reg = nullptr;
    std::int64_t value = 0;

    void add(Circuit& circ, Adder be, const QReg& b, Ctrl ctrl) const {
        if (reg) build_adder(circ, be, *reg, b, ctrl);
        else build_adder(circ, be, value, b, ctrl);
    }
    void sub(Circuit& circ, Adder be, const QReg& b, Ctrl ctrl) const {
        if (reg) build_subtractor(circ, be, *reg, b, ctrl);
        else build_subtractor(circ, be, value, b, ctrl);
    }
};

inline void mod_adder_impl(Circuit& circ, Adder be, const Addend& a, const QReg& b, std::int64_t N, Ctrl ctrl) {
    QubitId flag = circ.alloc_qubit("reduction_not_necessary");
    QubitId sign = circ.alloc_qubit("sign");
    QReg bx = b.with_top(sign);
    a.add(circ, be, bx, ctrl);
    build_subtractor(circ, be, N, bx);
    circ.cx(sign, flag);
    build_adder(circ, be, N, bx, flag);
    a.sub(circ, be, bx, ctrl);
    circ.cx(sign, flag);
    circ.x(flag);
    a.add(circ, be, bx, ctrl);
    circ.dealloc(sign);
    circ.dealloc(flag);
}

}  // namespace detail

/// b <- (a + b) mod N for a, b < N. With ctrl only the three additions of a are controlled.
inline void mod_adder(Circuit& circ, Adder be, const QReg& a, const QReg& b, std::int64_t N, Ctrl ctrl = {}) {
    detail::check_widths(a, b);
    detail::mod_adder_impl(circ, be, detail::Addend{&a, 0}, b, N, ctrl);
}

inline void mod_adder(Circuit& circ, Adder be, std::int64_t a, const QReg& b, std::int64_t N, Ctrl ctrl = {}) {
    if (a < 0 || a >= N) throw Error(ErrorKind::ValueOutOfRange, "constant addend must lie in [0, N)");
    detail::mod_adder_impl(circ, be, detail::Addend{nullptr, a}, b, N, ctrl);
}

/// b <- (b - a) mod N, the reversed modular adder.
inline void mod_subtractor(Circuit& circ, Adder be, const QReg& a, const QReg& b, std::int64_t N, Ctrl ctrl = {}) {
    emit_inverse(circ, [&](Circuit& c) { mod_adder(c, be, a, b, N, ctrl); }, be == Adder::gidney);
}

inline void mod_subtractor(Circuit& circ, Adder be, std::int64_t a, const QReg& b, std::int64_t N, Ctrl ctrl = {}) {
    mod_adder(circ, be, mod(-a, N), b, N, ctrl);
}

namespace detail {

/// out ^= carry-out of u + vbar, i.e. [u > v] when vbar holds the complement of v.
inline void carry_out(Circuit& circ, Adder be, const QReg& u, const QReg& vbar, QubitId out) {
    const std::size_t w = u.size();
    auto fwd = record(circ, [&](Circuit& c) {
        std::vector<QubitId> car(w + 1);
        car[1] = and_compute(c, u[0], vbar[0]);
        for (std::size_t i = 1; i < w; ++i) {
            c.cx(car[i], u[i]);
            c.cx(car[i], vbar[i]);
            car[i + 1] = and_compute(c, u[i], vbar[i]);
            c.cx(car[i], car[i + 1]);
        }
    });
    circ.append_all(fwd);
    // Last carry is the most recent Alloc in the forward record.
    QubitId top = 0;
    for (const auto& g : fwd) {
        if (g.kind == GateKind::Alloc) top = g.q[0];
    }
    circ.cx(top, out);
    circ.append_inverse(fwd, be == Adder::gidney);
}

}  // namespace detail

/// out ^= [u > v] for equal-width unsigned registers.
inline void build_comparator_gt(Circuit& circ, Adder be, const QReg& u, const QReg& v, QubitId out) {
    if (u.size() != v.size() || u.empty()) throw Error(ErrorKind::WidthMismatch, "comparator operands differ in width");
    for (auto q : v) circ.x(q);
    detail::carry_out(circ, be, u, v, out);
    for (auto q : v) circ.x(q);
}

/// out ^= [u > c] for a classical constant c.
inline void build_comparator_gt(Circuit& circ, Adder be, const QReg& u, std::int64_t c, QubitId out) {
    const std::size_t w = u.size();
    if (c < 0) throw Error(ErrorKind::ValueOutOfRange, "negative comparison constant");
    if (static_cast<std::uint64_t>(c) > detail::width_mask(w)) return;  // u > c never holds
    const std::uint64_t cbar = ~static_cast<std::uint64_t>(c) & detail::width_mask(w);
    QReg s = detail::load_const(circ, cbar, w, {});
    detail::carry_out(circ, be, u, s, out);
    detail::unload_const(circ, s, cbar, {});
}

enum class Direction { left, right };

/// Rotates the bits of reg by one position: left doubles (top bit must be 0), right halves
/// (bit 0 must be 0).
inline void build_cyclic_shift(Circuit& circ, const QReg& reg, Direction dir, Ctrl ctrl = {}) {
    const std::size_t w = reg.size();
    if (w < 2) return;
    auto sw = [&](std::size_t i) {
        if (ctrl) circ.cswap(*ctrl, reg[i], reg[i + 1]);
        else circ.swap(reg[i], reg[i + 1]);
    };
    if (dir == Direction::left) {
        for (std::size_t i = w - 1; i-- > 0;) sw(i);
    } else {
        for (std::size_t i = 0; i + 1 < w; ++i) sw(i);
    }
}

/// r <- 2r mod p for r < p. A temporary headroom qubit is used when width(r) cannot hold 2(p-1).
inline void mod_double(Circuit& circ, Adder be, const QReg& r_in, std::int64_t p) {
    QReg r = r_in;
    std::optional<QubitId> head;
    if (static_cast<std::uint64_t>(2 * (p - 1)) > detail::width_mask(r.size())) {
        head = circ.alloc_qubit("headroom");
        r = r.with_top(*head);
    }
    build_cyclic_shift(circ, r, Direction::left);
    QubitId larger = circ.alloc_qubit("larger");
    build_comparator_gt(circ, be, r, p, larger);
    build_subtractor(circ, be, p, r, larger);
    // 2r is even, so 2r - p is odd exactly when the reduction happened.
    circ.cx(r[0], larger);
    circ.dealloc(larger);
    if (head) circ.dealloc(*head);
}

/// r <- (p - r) mod N for r in [0, N), where N is the register's modulus.
/// NOT gives N-1-r after adding N, which stays a valid residue even for r = 0;
/// the modular addition of p+1 finishes the job.
inline void inpl_rsub(Circuit& circ, Adder be, const QReg& r, std::int64_t N, std::int64_t p, Ctrl ctrl = {}) {
    for (auto q : r) {
        if (ctrl) circ.cx(*ctrl, q);
        else circ.x(q);
    }
    build_adder(circ, be, N, r, ctrl);
    mod_adder(circ, be, mod(p + 1, N), r, N, ctrl);
}

inline void inpl_rsub(Circuit& circ, Adder be, const ModReg& r, std::int64_t p, Ctrl ctrl = {}) {
    inpl_rsub(circ, be, r.reg, r.modulus, p, ctrl);
}

}  // namespace ecdlp
