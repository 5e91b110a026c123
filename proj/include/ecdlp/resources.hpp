#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>
#include <vector>

#include "ecdlp/circuit.hpp"

namespace ecdlp {

/// Non-negative count with exact halves (stored as twice the value).
class HalfCount {
public:
    constexpr HalfCount() = default;
    static constexpr HalfCount from_halves(std::uint64_t halves) {
        HalfCount c;
        c.halves_ = halves;
        return c;
    }
    constexpr std::uint64_t halves() const { return halves_; }
    constexpr double value() const { return static_cast<double>(halves_) / 2.0; }
    constexpr bool is_integer() const { return halves_ % 2 == 0; }

    HalfCount& operator+=(HalfCount o) {
        halves_ += o.halves_;
        return *this;
    }
    friend constexpr bool operator==(HalfCount, HalfCount) = default;

    std::string to_string() const {
        std::string s = std::to_string(halves_ / 2);
        if (halves_ % 2) s += ".5";
        return s;
    }

private:
    std::uint64_t halves_ = 0;
};

struct ResourceReport {
    std::size_t qubit_count = 0;
    std::uint64_t t_count = 0;
    HalfCount cx_count;
    std::uint64_t t_depth = 0;
    std::uint64_t depth = 0;
    std::uint64_t rotation_count = 0;
    std::uint64_t measurement_count = 0;
    std::uint64_t gate_count = 0;
};

struct DecomposeOptions {
    /// Replace SWAP by three CX; when false SWAP is left in place (Clifford).
    bool expand_swap = true;
    /// Lower AND gates with the 4-T logical-AND circuit; when false they cost a full Toffoli.
    bool logical_and = true;
};

struct ReportOptions {
    /// Count any remaining SWAP as free rather than 3 CX.
    bool swap_free = false;
    /// See DecomposeOptions::logical_and.
    bool logical_and = true;
};

namespace detail {

/// Reduces an angle to k * pi/4 when it is (numerically) such a multiple.
inline bool as_eighth_turns(double theta, int& k) {
    double q = theta / (std::numbers::pi / 4.0);
    double r = std::round(q);
    if (std::abs(q - r) > 1e-12) return false;
    k = static_cast<int>(((static_cast<long long>(r) % 8) + 8) % 8);
    return true;
}

class Decomposer {
public:
    Decomposer(Circuit& out, DecomposeOptions opt) : out_(out), opt_(opt) {}

    void gate(const Gate& g) {
        cond_bit_ = g.cond_bit;
        cond_value_ = g.cond_value;
        switch (g.kind) {
            case GateKind::CCX: toffoli(g.q[0], g.q[1], g.q[2]); break;
            case GateKind::AND:
                if (opt_.logical_and) {
                    logical_and(g.q[0], g.q[1], g.q[2]);
                } else {
                    toffoli(g.q[0], g.q[1], g.q[2]);
                }
                break;
            case GateKind::CSWAP:
                emit(GateKind::CX, {g.q[2], g.q[1]});
                toffoli(g.q[0], g.q[1], g.q[2]);
                emit(GateKind::CX, {g.q[2], g.q[1]});
                break;
            case GateKind::SWAP:
                if (opt_.expand_swap) {
                    emit(GateKind::CX, {g.q[0], g.q[1]});
                    emit(GateKind::CX, {g.q[1], g.q[0]});
                    emit(GateKind::CX, {g.q[0], g.q[1]});
                } else {
                    pass(g);
                }
                break;
            case GateKind::MCX: mcx(g); break;
            case GateKind::Phase: phase(g); break;
            case GateKind::CPhase:
                if (int k; as_eighth_turns(g.angle, k) && k == 4) {
                    emit(GateKind::CZ, {g.q[0], g.q[1]});
                } else if (as_eighth_turns(g.angle, k) && k == 0) {
                    // identity
                } else {
                    pass(g);
                }
                break;
            default: pass(g); break;
        }
    }

private:
    void emit(GateKind k, std::initializer_list<QubitId> qs) {
        Gate g = Circuit::make(k, qs);
        g.cond_bit = cond_bit_;
        g.cond_value = cond_value_;
        out_.append(g);
    }
    void pass(const Gate& g) { out_.append(g); }

    // Logical AND into |0>: 4 T, T-depth 2.
    void logical_and(QubitId a, QubitId b, QubitId t) {
        emit(GateKind::H, {t});
        emit(GateKind::T, {t});
        emit(GateKind::CX, {a, t});
        emit(GateKind::CX, {b, t});
        emit(GateKind::CX, {t, a});
        emit(GateKind::CX, {t, b});
        emit(GateKind::Tdg, {a});
        emit(GateKind::Tdg, {b});
        emit(GateKind::T, {t});
        emit(GateKind::CX, {t, a});
        emit(GateKind::CX, {t, b});
        emit(GateKind::H, {t});
        emit(GateKind::S, {t});
    }

    // Standard 7-T / 6-CX / 2-H Toffoli network.
    void toffoli(QubitId a, QubitId b, QubitId t) {
        emit(GateKind::H, {t});
        emit(GateKind::CX, {b, t});
        emit(GateKind::Tdg, {t});
        emit(GateKind::CX, {a, t});
        emit(GateKind::T, {t});
        emit(GateKind::CX, {b, t});
        emit(GateKind::Tdg, {t});
        emit(GateKind::CX, {a, t});
        emit(GateKind::T, {b});
        emit(GateKind::T, {t});
        emit(GateKind::H, {t});
        emit(GateKind::CX, {a, b});
        emit(GateKind::T, {a});
        emit(GateKind::Tdg, {b});
        emit(GateKind::CX, {a, b});
    }

    void mcx(const Gate& g) {
        const int nc = g.num_controls();
        if (nc > 3) throw Error(ErrorKind::UnsupportedGate, "more than 3 controls");
        const QubitId target = g.q[nc];
        for (int i = 0; i < nc; ++i) {
            if (!g.control_active(i)) emit(GateKind::X, {g.q[i]});
        }
        if (nc == 1) {
            emit(GateKind::CX, {g.q[0], target});
        } else if (nc == 2) {
            toffoli(g.q[0], g.q[1], target);
        } else {
            if (g.conditioned()) throw Error(ErrorKind::UnsupportedGate, "classically controlled 3-control MCX");
            QubitId anc = out_.alloc_qubit("mcx_anc");
            toffoli(g.q[0], g.q[1], anc);
            toffoli(anc, g.q[2], target);
            toffoli(g.q[0], g.q[1], anc);
            out_.dealloc(anc);
        }
        for (int i = 0; i < nc; ++i) {
            if (!g.control_active(i)) emit(GateKind::X, {g.q[i]});
        }
    }

    void phase(const Gate& g) {
        int k = 0;
        if (!as_eighth_turns(g.angle, k)) {
            pass(g);
            return;
        }
        QubitId q = g.q[0];
        if (k & 4) emit(GateKind::Z, {q});
        if (k & 2) emit(GateKind::S, {q});
        if (k & 1) emit(GateKind::T, {q});
    }

    Circuit& out_;
    DecomposeOptions opt_;
    std::int32_t cond_bit_ = -1;
    std::uint8_t cond_value_ = 1;
};

}  // namespace detail

/// Lowers CCX, AND, CSWAP, SWAP, MCX (<= 3 controls) and pi/4-multiple phases to Clifford+T.
/// Other phase angles and non-pi CPhase gates are kept and tallied as rotations.
inline Circuit decompose_to_clifford_t(const Circuit& circ, DecomposeOptions opt = {}) {
    Circuit out;
    for (std::size_t i = 0; i < circ.num_cbits(); ++i) out.new_cbit();
    detail::Decomposer d(out, opt);
    for (const auto& g : circ.gates()) d.gate(g);
    return out;
}

/// Counts resources on an already-decomposed circuit. Each classically controlled CZ adds
/// half a CX. T-depth is the as-soon-as-possible layering of T/T-dagger gates.
inline ResourceReport resource_report(const Circuit& circ, ReportOptions opt = {}) {
    ResourceReport rep;
    std::vector<std::uint64_t> tdepth(circ.qubit_capacity(), 0);
    std::vector<std::uint64_t> depth(circ.qubit_capacity(), 0);
    std::vector<std::uint64_t> c_tdepth(circ.num_cbits(), 0);
    std::vector<std::uint64_t> c_depth(circ.num_cbits(), 0);
    std::size_t live = 0;
    std::uint64_t cx_halves = 0;
    for (const auto& g : circ.gates()) {
        auto qs = g.qubits();
        if (g.kind == GateKind::Alloc) {
            ++live;
            rep.qubit_count = std::max(rep.qubit_count, live);
            tdepth[qs[0]] = 0;
            depth[qs[0]] = 0;
            continue;
        }
        if (g.kind == GateKind::Dealloc) {
            --live;
            continue;
        }
        ++rep.gate_count;
        std::uint64_t td = 0, d = 0;
        for (auto q : qs) {
            td = std::max(td, tdepth[q]);
            d = std::max(d, depth[q]);
        }
        if (g.conditioned()) {
            td = std::max(td, c_tdepth[g.cond_bit]);
            d = std::max(d, c_depth[g.cond_bit]);
        }
        switch (g.kind) {
            case GateKind::T:
            case GateKind::Tdg:
                ++rep.t_count;
                ++td;
                break;
            case GateKind::CX: cx_halves += 2; break;
            case GateKind::CZ:
                if (g.conditioned()) cx_halves += 1;
                break;
            case GateKind::SWAP:
                if (!opt.swap_free) cx_halves += 6;
                break;
            case GateKind::Phase:
            case GateKind::CPhase: ++rep.rotation_count; break;
            case GateKind::Measure: ++rep.measurement_count; break;
            case GateKind::CCX:
            case GateKind::AND:
            case GateKind::CSWAP:
            case GateKind::MCX:
                throw Error(ErrorKind::UnsupportedGate, "resource_report expects a Clifford+T circuit");
            default: break;
        }
        ++d;
        for (auto q : qs) {
            tdepth[q] = td;
            depth[q] = d;
        }
        if (g.kind == GateKind::Measure) {
            c_tdepth[g.cbit] = td;
            c_depth[g.cbit] = d;
        }
        rep.t_depth = std::max(rep.t_depth, td);
        rep.depth = std::max(rep.depth, d);
    }
    rep.cx_count = HalfCount::from_halves(cx_halves);
    return rep;
}

/// Decomposes and counts in one step.
inline ResourceReport measure_resources(const Circuit& circ, ReportOptions opt = {}) {
    return resource_report(decompose_to_clifford_t(circ, DecomposeOptions{!opt.swap_free, opt.logical_and}), opt);
}

}  // namespace ecdlp
