#pragma once

// Kaliski's almost-inverse with swaps, run for a fixed 2n rounds so that it can be
// executed reversibly. After the loop p - r = v^-1 * 2^(2n) (mod p).

#include <cstdint>
#include <string>
#include <vector>

#include "ecdlp/circuit.hpp"
#include "ecdlp/modmath.hpp"
#include "ecdlp/montgomery.hpp"
#include "ecdlp/qarith.hpp"

namespace ecdlp {

/// Register values between rounds. `m` is the garbage bit written by the round that
/// produced this state.
struct KaliskiState {
    std::int64_t u = 0, v = 0, r = 0, s = 0;
    bool f = true;
    bool m = false;

    friend bool operator==(const KaliskiState&, const KaliskiState&) = default;
};

inline int kaliski_rounds(std::int64_t p) { return 2 * bit_length(static_cast<std::uint64_t>(p)); }

/// State before round 0 followed by the state after each of the 2n rounds.
inline std::vector<KaliskiState> kaliski_trace(std::int64_t v, std::int64_t p) {
    if (mod(v, p) == 0) throw Error(ErrorKind::NotInvertible, "0 has no inverse modulo " + std::to_string(p));
    std::vector<KaliskiState> trace;
    KaliskiState st{p, v, 0, 1, true, false};
    trace.push_back(st);
    for (int i = 0; i < kaliski_rounds(p); ++i) {
        st.m = false;
        if (st.f && st.v == 0) {
            st.f = false;
            st.m = true;
        }
        bool swapped = false;
        if (st.f) {
            const bool u_odd = st.u & 1, v_odd = st.v & 1;
            if (!u_odd || (!v_odd ? false : st.u > st.v)) {
                // u even (then v is odd), or both odd with u > v.
                std::swap(st.u, st.v);
                std::swap(st.r, st.s);
                swapped = true;
            }
            if (u_odd && !v_odd) st.m = true;
            if (u_odd && v_odd) {
                st.v -= st.u;
                st.s += st.r;
                if (swapped) st.m = true;
            }
            st.v /= 2;
        }
        st.r *= 2;
        if (st.r > p) st.r -= p;
        if (swapped) {
            std::swap(st.u, st.v);
            std::swap(st.r, st.s);
        }
        trace.push_back(st);
    }
    return trace;
}

/// v^-1 mod p via the fixed-round loop.
inline std::int64_t kaliski_classical(std::int64_t v, std::int64_t p) {
    auto trace = kaliski_trace(v, p);
    const std::int64_t r = trace.back().r;
    const std::int64_t almost = mod(p - r, 2 * p);
    return almost * pow_mod(2, -kaliski_rounds(p), p) % p;
}

struct KaliskiWorkspace {
    QReg u, v, r, s;
    QubitId a = 0, b = 0, add = 0, f = 0;
    QReg m;
    std::int64_t p = 0;
};

/// Register width for the modulus-2p registers r and s.
inline std::size_t kaliski_rs_width(std::int64_t p) { return residue_width(2 * p); }

namespace detail {

/// target ^= [reg == 0], via one MCX (up to 3 bits) or a ladder of temporary ANDs.
inline void flip_if_zero(Circuit& circ, Adder be, const QReg& reg, QubitId target) {
    if (reg.size() <= 3) {
        bool states[3] = {false, false, false};
        circ.mcx(std::span<const QubitId>(reg.bits), target, std::span<const bool>(states, reg.size()));
        return;
    }
    for (auto q : reg) circ.x(q);
    auto fwd = record(circ, [&](Circuit& c) {
        QubitId acc = and_compute(c, reg[0], reg[1]);
        for (std::size_t i = 2; i + 1 < reg.size(); ++i) acc = and_compute(c, acc, reg[i]);
        (void)acc;
    });
    circ.append_all(fwd);
    QubitId last = 0;
    for (const auto& g : fwd) {
        if (g.kind == GateKind::Alloc) last = g.q[0];
    }
    circ.ccx(last, reg[reg.size() - 1], target);
    circ.append_inverse(fwd, be == Adder::gidney);
    for (auto q : reg) circ.x(q);
}

}  // namespace detail

/// One round of the reversible loop (index i selects the garbage qubit m[i]).
inline void build_kaliski_round(Circuit& circ, Adder be, KaliskiWorkspace& ws, int i) {
    const std::int64_t p = ws.p;
    const QubitId mi = ws.m[static_cast<std::size_t>(i)];
    const QubitId f = ws.f, a = ws.a, b = ws.b, add = ws.add;

    // Stop flag: m[i] = f AND (v == 0), then f ^= m[i].
    QubitId is_zero = circ.alloc_qubit("is_zero");
    detail::flip_if_zero(circ, be, ws.v, is_zero);
    circ.ccx(f, is_zero, mi);
    detail::flip_if_zero(circ, be, ws.v, is_zero);
    circ.dealloc(is_zero);
    circ.cx(mi, f);

    // Step 1: parity cases.
    circ.mcx({f, ws.u[0]}, a, {true, false});
    circ.mcx({f, a, ws.v[0]}, mi, {true, false, false});
    circ.cx(a, b);
    circ.cx(mi, b);

    // Step 2: both odd, decide on u > v.
    QubitId l = circ.alloc_qubit("l");
    build_comparator_gt(circ, be, ws.u, ws.v, l);
    circ.mcx({f, l, b}, a, {true, true, false});
    circ.mcx({f, l, b}, mi, {true, true, false});
    build_comparator_gt(circ, be, ws.u, ws.v, l);
    circ.dealloc(l);

    // Step 3.
    for (std::size_t k = 0; k < ws.u.size(); ++k) circ.cswap(a, ws.u[k], ws.v[k]);
    for (std::size_t k = 0; k < ws.r.size(); ++k) circ.cswap(a, ws.r[k], ws.s[k]);

    // Step 4.
    circ.mcx({f, b}, add, {true, false});
    build_subtractor(circ, be, ws.u, ws.v, add);
    build_adder(circ, be, ws.r, ws.s, add);

    // Step 5.
    circ.mcx({f, b}, add, {true, false});
    circ.cx(mi, b);
    circ.cx(a, b);

    build_cyclic_shift(circ, ws.v, Direction::right, f);
    mod_double(circ, be, ws.r, p);

    for (std::size_t k = 0; k < ws.u.size(); ++k) circ.cswap(a, ws.u[k], ws.v[k]);
    for (std::size_t k = 0; k < ws.r.size(); ++k) circ.cswap(a, ws.r[k], ws.s[k]);
    circ.mcx({ws.s[0]}, a, {false});
}

/// Allocates u = p, r = 0, s = 1, f = 1 and the clean flags a, b, add around v.
inline KaliskiWorkspace kaliski_alloc_workspace(Circuit& circ, const QReg& v, const QReg& m, std::int64_t p) {
    KaliskiWorkspace ws;
    ws.p = p;
    ws.v = v;
    ws.m = m;
    ws.u = circ.alloc_register(v.size(), "u");
    for (std::size_t k = 0; k < v.size(); ++k) {
        if ((p >> k) & 1) circ.x(ws.u[k]);
    }
    const std::size_t wrs = kaliski_rs_width(p);
    ws.r = circ.alloc_register(wrs, "r");
    ws.s = circ.alloc_register(wrs, "s");
    circ.x(ws.s[0]);
    ws.a = circ.alloc_qubit("a");
    ws.b = circ.alloc_qubit("b");
    ws.add = circ.alloc_qubit("add");
    ws.f = circ.alloc_qubit("f");
    circ.x(ws.f);
    return ws;
}

/// In-place v <- v^-1 * 2^(2n) (mod p) on the raw register contents, leaving one garbage
/// bit per round in m. At decode level this is inversion: the recorded shift becomes 2n - k.
inline void kaliski_quantum_raw(Circuit& circ, Adder be, ModReg& v, const QReg& m) {
    const std::int64_t p = v.modulus;
    const int rounds = kaliski_rounds(p);
    if (m.size() < static_cast<std::size_t>(rounds)) {
        throw Error(ErrorKind::WidthMismatch, "garbage register needs " + std::to_string(rounds) + " qubits");
    }
    if (v.size() != static_cast<std::size_t>(bit_length(static_cast<std::uint64_t>(p)))) {
        throw Error(ErrorKind::WidthMismatch, "inversion register must have bit_length(p) qubits");
    }
    KaliskiWorkspace ws = kaliski_alloc_workspace(circ, v.reg, m, p);
    for (int i = 0; i < rounds; ++i) build_kaliski_round(circ, be, ws, i);
    circ.dealloc(ws.a);
    circ.dealloc(ws.add);
    circ.dealloc(ws.b);

    inpl_rsub(circ, be, ws.r, 2 * p, p);
    for (std::size_t k = 0; k < v.size(); ++k) circ.swap(v[k], ws.r[k]);

    circ.dealloc(ws.f);
    circ.x(ws.u[0]);
    circ.dealloc(ws.u);
    circ.dealloc(ws.r);
    build_subtractor(circ, be, p, ws.s);
    circ.dealloc(ws.s);
    v.shift = rounds - v.shift;
}

/// In-place modular inversion in standard representation.
inline void kaliski_quantum(Circuit& circ, Adder be, ModReg& v, const QReg& m) {
    if (v.shift != 0) throw Error(ErrorKind::ShiftAlreadySet, "kaliski_quantum expects standard representation");
    kaliski_quantum_raw(circ, be, v, m);
    to_standard_qm(circ, be, v);
}

}  // namespace ecdlp
