#pragma once

// Gate-level circuit representation. Qubits are explicitly allocated and
// deallocated; a Dealloc asserts that the qubit is back in |0>.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <numbers>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "ecdlp/error.hpp"

namespace ecdlp {

using QubitId = std::uint32_t;

enum class GateKind : std::uint8_t {
    X,
    Z,
    H,
    S,
    Sdg,
    T,
    Tdg,
    CX,
    CZ,
    CCX,
    AND,  // Toffoli onto a target that is known to be |0>
    MCX,  // 1..3 controls with per-control trigger values, target last
    SWAP,
    CSWAP,
    Phase,
    CPhase,
    Measure,
    Alloc,
    Dealloc,
};

inline const char* gate_name(GateKind k) {
    switch (k) {
        case GateKind::X: return "X";
        case GateKind::Z: return "Z";
        case GateKind::H: return "H";
        case GateKind::S: return "S";
        case GateKind::Sdg: return "SDG";
        case GateKind::T: return "T";
        case GateKind::Tdg: return "TDG";
        case GateKind::CX: return "CX";
        case GateKind::CZ: return "CZ";
        case GateKind::CCX: return "CCX";
        case GateKind::AND: return "AND";
        case GateKind::MCX: return "MCX";
        case GateKind::SWAP: return "SWAP";
        case GateKind::CSWAP: return "CSWAP";
        case GateKind::Phase: return "PHASE";
        case GateKind::CPhase: return "CPHASE";
        case GateKind::Measure: return "MEASURE";
        case GateKind::Alloc: return "ALLOC";
        case GateKind::Dealloc: return "DEALLOC";
    }
    return "?";
}

/// Number of qubit operands for fixed-arity kinds; MCX returns 0 (variable).
inline int fixed_arity(GateKind k) {
    switch (k) {
        case GateKind::X:
        case GateKind::Z:
        case GateKind::H:
        case GateKind::S:
        case GateKind::Sdg:
        case GateKind::T:
        case GateKind::Tdg:
        case GateKind::Phase:
        case GateKind::Measure:
        case GateKind::Alloc:
        case GateKind::Dealloc: return 1;
        case GateKind::CX:
        case GateKind::CZ:
        case GateKind::SWAP:
        case GateKind::CPhase: return 2;
        case GateKind::CCX:
        case GateKind::AND:
        case GateKind::CSWAP: return 3;
        case GateKind::MCX: return 0;
    }
    return 0;
}

inline bool is_unitary(GateKind k) {
    return k != GateKind::Measure && k != GateKind::Alloc && k != GateKind::Dealloc;
}

struct Gate {
    GateKind kind = GateKind::X;
    std::uint8_t arity = 0;
    /// MCX only: bit i is the trigger value of control i.
    std::uint8_t ctrl_state = 0;
    std::array<QubitId, 4> q{};
    double angle = 0.0;
    /// Measure only: destination classical bit.
    std::int32_t cbit = -1;
    /// Classical control: gate fires only when cbits[cond_bit] == cond_value.
    std::int32_t cond_bit = -1;
    std::uint8_t cond_value = 1;

    std::span<const QubitId> qubits() const { return {q.data(), arity}; }
    bool conditioned() const { return cond_bit >= 0; }
    int num_controls() const { return kind == GateKind::MCX ? arity - 1 : 0; }
    bool control_active(int i) const { return (ctrl_state >> i) & 1u; }

    friend bool operator==(const Gate& l, const Gate& r) {
        if (l.kind != r.kind || l.arity != r.arity || l.cbit != r.cbit || l.cond_bit != r.cond_bit) return false;
        if (l.conditioned() && l.cond_value != r.cond_value) return false;
        if (l.kind == GateKind::MCX && l.ctrl_state != r.ctrl_state) return false;
        if ((l.kind == GateKind::Phase || l.kind == GateKind::CPhase) && l.angle != r.angle) return false;
        return std::equal(l.q.begin(), l.q.begin() + l.arity, r.q.begin());
    }
};

/// Little-endian quantum register: bits[0] is the least significant bit.
struct QReg {
    std::vector<QubitId> bits;

    std::size_t size() const { return bits.size(); }
    bool empty() const { return bits.empty(); }
    QubitId operator[](std::size_t i) const { return bits[i]; }
    auto begin() const { return bits.begin(); }
    auto end() const { return bits.end(); }

    QReg slice(std::size_t from, std::size_t count) const {
        return QReg{std::vector<QubitId>(bits.begin() + static_cast<std::ptrdiff_t>(from),
                                         bits.begin() + static_cast<std::ptrdiff_t>(from + count))};
    }
    QReg with_top(QubitId extra) const {
        QReg r = *this;
        r.bits.push_back(extra);
        return r;
    }
};

class Circuit {
public:
    Circuit() = default;

    const std::vector<Gate>& gates() const { return gates_; }
    std::size_t size() const { return gates_.size(); }
    std::size_t num_cbits() const { return num_cbits_; }
    /// Upper bound on qubit ids ever used (ids are reused after Dealloc).
    std::size_t qubit_capacity() const { return live_.size(); }
    std::size_t live_count() const { return live_count_; }
    bool is_live(QubitId q) const { return q < live_.size() && live_[q]; }
    const std::string& label(QubitId q) const { return labels_.at(q); }

    // --- allocation -------------------------------------------------------

    QubitId alloc_qubit(const std::string& label = "anc") {
        QubitId id;
        if (!free_.empty()) {
            id = *free_.begin();
        } else {
            id = static_cast<QubitId>(live_.size());
        }
        Gate g;
        g.kind = GateKind::Alloc;
        g.arity = 1;
        g.q[0] = id;
        append(g);
        labels_[id] = label;
        return id;
    }

    QReg alloc_register(std::size_t n, const std::string& label) {
        if (n == 0) throw Error(ErrorKind::InvalidArgument, "register width must be >= 1");
        QReg r;
        r.bits.reserve(n);
        for (std::size_t i = 0; i < n; ++i) r.bits.push_back(alloc_qubit(label + "[" + std::to_string(i) + "]"));
        return r;
    }

    void dealloc(QubitId q) { emit1(GateKind::Dealloc, q); }
    void dealloc(const QReg& r) {
        for (auto q : r) dealloc(q);
    }

    std::int32_t new_cbit() { return static_cast<std::int32_t>(num_cbits_++); }

    // --- gate emitters ----------------------------------------------------

    void x(QubitId q) { emit1(GateKind::X, q); }
    void z(QubitId q) { emit1(GateKind::Z, q); }
    void h(QubitId q) { emit1(GateKind::H, q); }
    void s(QubitId q) { emit1(GateKind::S, q); }
    void sdg(QubitId q) { emit1(GateKind::Sdg, q); }
    void t(QubitId q) { emit1(GateKind::T, q); }
    void tdg(QubitId q) { emit1(GateKind::Tdg, q); }
    void phase(QubitId q, double theta) {
        Gate g = make(GateKind::Phase, {q});
        g.angle = theta;
        append(g);
    }
    void cx(QubitId c, QubitId t) { append(make(GateKind::CX, {c, t})); }
    void cz(QubitId a, QubitId b) { append(make(GateKind::CZ, {a, b})); }
    void cphase(QubitId a, QubitId b, double theta) {
        Gate g = make(GateKind::CPhase, {a, b});
        g.angle = theta;
        append(g);
    }
    void ccx(QubitId c0, QubitId c1, QubitId t) { append(make(GateKind::CCX, {c0, c1, t})); }
    /// t ^= c0 AND c1 where the caller guarantees t is |0>.
    void and_gate(QubitId c0, QubitId c1, QubitId t) { append(make(GateKind::AND, {c0, c1, t})); }
    void swap(QubitId a, QubitId b) { append(make(GateKind::SWAP, {a, b})); }
    void cswap(QubitId c, QubitId a, QubitId b) { append(make(GateKind::CSWAP, {c, a, b})); }

    /// Multi-controlled X; `states[i]` is the value control i must hold to trigger.
    void mcx(std::span<const QubitId> controls, QubitId target, std::span<const bool> states = {}) {
        if (controls.empty() || controls.size() > 3) {
            throw Error(ErrorKind::UnsupportedGate, "MCX supports 1..3 controls, got " + std::to_string(controls.size()));
        }
        Gate g;
        g.kind = GateKind::MCX;
        g.arity = static_cast<std::uint8_t>(controls.size() + 1);
        for (std::size_t i = 0; i < controls.size(); ++i) {
            g.q[i] = controls[i];
            bool st = states.empty() ? true : states[i];
            if (st) g.ctrl_state |= static_cast<std::uint8_t>(1u << i);
        }
        g.q[controls.size()] = target;
        append(g);
    }
    void mcx(std::initializer_list<QubitId> controls, QubitId target, std::initializer_list<bool> states = {}) {
        std::vector<QubitId> c(controls);
        std::vector<bool> sv(states);
        bool st[4] = {true, true, true, true};
        for (std::size_t i = 0; i < sv.size(); ++i) st[i] = sv[i];
        mcx(std::span<const QubitId>(c), target, std::span<const bool>(st, c.size()));
    }

    std::int32_t measure(QubitId q) {
        Gate g = make(GateKind::Measure, {q});
        g.cbit = new_cbit();
        append(g);
        return g.cbit;
    }

    /// Emit `g` so that it fires only when cbits[bit] == value.
    void conditioned(Gate g, std::int32_t bit, bool value = true) {
        if (!is_unitary(g.kind)) throw Error(ErrorKind::InvalidCircuit, "only unitary gates may be classically controlled");
        g.cond_bit = bit;
        g.cond_value = value ? 1 : 0;
        append(g);
    }

    /// Validates operands against the live set and appends.
    void append(const Gate& g) {
        auto qs = g.qubits();
        if (g.arity == 0) throw Error(ErrorKind::InvalidCircuit, "gate without operands");
        int fa = fixed_arity(g.kind);
        if (fa != 0 && fa != g.arity) throw Error(ErrorKind::InvalidCircuit, std::string("wrong arity for ") + gate_name(g.kind));
        if (g.kind == GateKind::MCX && (g.arity < 2 || g.arity > 4)) throw Error(ErrorKind::UnsupportedGate, "MCX arity");
        for (std::size_t i = 0; i < qs.size(); ++i) {
            for (std::size_t j = i + 1; j < qs.size(); ++j) {
                if (qs[i] == qs[j]) throw Error(ErrorKind::InvalidCircuit, std::string("repeated operand in ") + gate_name(g.kind));
            }
        }
        if (g.conditioned() && (g.cond_bit >= static_cast<std::int32_t>(num_cbits_) || !is_unitary(g.kind))) {
            throw Error(ErrorKind::InvalidCircuit, "bad classical condition");
        }
        if (g.kind == GateKind::Measure) {
            if (g.cbit < 0) throw Error(ErrorKind::InvalidCircuit, "measure without classical target");
            num_cbits_ = std::max<std::size_t>(num_cbits_, static_cast<std::size_t>(g.cbit) + 1);
        }
        if (g.kind == GateKind::Alloc) {
            QubitId id = qs[0];
            if (id >= live_.size()) {
                for (auto k = static_cast<QubitId>(live_.size()); k < id; ++k) free_.insert(k);
                live_.resize(id + 1, false);
                labels_.resize(id + 1);
            } else if (live_[id]) {
                throw Error(ErrorKind::InvalidCircuit, "qubit " + std::to_string(id) + " allocated twice");
            } else {
                free_.erase(id);
            }
            live_[id] = true;
            ++live_count_;
            peak_ = std::max(peak_, live_count_);
        } else {
            for (auto q : qs) {
                if (!is_live(q)) {
                    throw Error(ErrorKind::InvalidCircuit,
                                std::string(gate_name(g.kind)) + " on non-live qubit " + std::to_string(q));
                }
            }
            if (g.kind == GateKind::Dealloc) {
                live_[qs[0]] = false;
                free_.insert(qs[0]);
                --live_count_;
            }
        }
        gates_.push_back(g);
    }

    /// Peak number of simultaneously live qubits seen while building.
    std::size_t peak_live() const { return peak_; }

    /// Removes and returns all gates from index `begin` on, rewinding allocation state.
    std::vector<Gate> take_from(std::size_t begin) {
        std::vector<Gate> tail(gates_.begin() + static_cast<std::ptrdiff_t>(begin), gates_.end());
        gates_.resize(begin);
        for (auto it = tail.rbegin(); it != tail.rend(); ++it) {
            if (it->kind == GateKind::Alloc) {
                live_[it->q[0]] = false;
                free_.insert(it->q[0]);
                --live_count_;
            } else if (it->kind == GateKind::Dealloc) {
                live_[it->q[0]] = true;
                free_.erase(it->q[0]);
                ++live_count_;
            }
        }
        return tail;
    }

    void append_all(std::span<const Gate> gs) {
        for (const auto& g : gs) append(g);
    }

    /// Appends the inverse of `seq`: reversed order, each gate inverted, Alloc and
    /// Dealloc exchanged. A measurement-based AND uncomputation (H, Measure, c?CZ,
    /// c?X, Dealloc) inverts to Alloc + AND. With `measurement_uncompute`, a Toffoli
    /// or AND right after its target's Alloc is undone in measurement-based form.
    /// Any other measurement or classically controlled gate makes the sequence
    /// non-invertible.
    void append_inverse(std::span<const Gate> seq, bool measurement_uncompute = true);

    static Gate inverse_gate(const Gate& g) {
        Gate r = g;
        switch (g.kind) {
            case GateKind::S: r.kind = GateKind::Sdg; break;
            case GateKind::Sdg: r.kind = GateKind::S; break;
            case GateKind::T: r.kind = GateKind::Tdg; break;
            case GateKind::Tdg: r.kind = GateKind::T; break;
            case GateKind::Phase:
            case GateKind::CPhase: r.angle = -g.angle; break;
            case GateKind::AND: r.kind = GateKind::CCX; break;
            case GateKind::Alloc: r.kind = GateKind::Dealloc; break;
            case GateKind::Dealloc: r.kind = GateKind::Alloc; break;
            case GateKind::Measure: throw Error(ErrorKind::NonInvertibleRegion, "measurement has no inverse");
            default: break;
        }
        return r;
    }

    /// Measurement-based uncomputation of target = c0 AND c1 (Gidney).
    void and_uncompute_mbu(QubitId c0, QubitId c1, QubitId target) {
        h(target);
        std::int32_t bit = measure(target);
        conditioned(make(GateKind::CZ, {c0, c1}), bit);
        conditioned(make(GateKind::X, {target}), bit);
        dealloc(target);
    }

    static Gate make(GateKind k, std::initializer_list<QubitId> qs) {
        Gate g;
        g.kind = k;
        g.arity = static_cast<std::uint8_t>(qs.size());
        std::copy(qs.begin(), qs.end(), g.q.begin());
        return g;
    }

private:
    void emit1(GateKind k, QubitId q) { append(make(k, {q})); }

    std::vector<Gate> gates_;
    std::vector<bool> live_;
    std::vector<std::string> labels_;
    std::set<QubitId> free_;
    std::size_t live_count_ = 0;
    std::size_t peak_ = 0;
    std::size_t num_cbits_ = 0;
};

namespace detail {

/// Matches H t, Measure t->k, k?CZ a b, k?X t, Dealloc t ending at index `end` (the Dealloc).
inline bool is_mbu_group(std::span<const Gate> seq, std::size_t end) {
    if (end < 4) return false;
    const Gate& d = seq[end];
    const Gate& x = seq[end - 1];
    const Gate& cz = seq[end - 2];
    const Gate& m = seq[end - 3];
    const Gate& h = seq[end - 4];
    QubitId t = d.q[0];
    return d.kind == GateKind::Dealloc && x.kind == GateKind::X && x.q[0] == t && x.conditioned() &&
           cz.kind == GateKind::CZ && cz.conditioned() && m.kind == GateKind::Measure && m.q[0] == t &&
           h.kind == GateKind::H && h.q[0] == t && !h.conditioned() && !m.conditioned() &&
           x.cond_bit == m.cbit && cz.cond_bit == m.cbit && x.cond_value == 1 && cz.cond_value == 1;
}

}  // namespace detail

inline void Circuit::append_inverse(std::span<const Gate> seq, bool measurement_uncompute) {
    // Ancilla ids re-allocated by the inverse may be taken by now; such ids are renamed.
    std::vector<std::pair<QubitId, QubitId>> rename;
    auto tr = [&](QubitId q) {
        for (const auto& [from, to] : rename) {
            if (from == q) return to;
        }
        return q;
    };
    auto emit = [&](Gate g) {
        if (g.kind == GateKind::Alloc) {
            QubitId want = g.q[0];
            if (is_live(want)) {
                std::string lab = labels_.at(want);
                QubitId got = alloc_qubit(lab);
                rename.emplace_back(want, got);
                return;
            }
        } else {
            for (int k = 0; k < g.arity; ++k) g.q[k] = tr(g.q[k]);
        }
        append(g);
        if (g.kind == GateKind::Dealloc) {
            std::erase_if(rename, [&](const auto& pr) { return pr.second == g.q[0]; });
        }
    };
    std::size_t i = seq.size();
    while (i > 0) {
        --i;
        const Gate& g = seq[i];
        if (g.kind == GateKind::Dealloc && detail::is_mbu_group(seq, i)) {
            const Gate& cz = seq[i - 2];
            emit(inverse_gate(g));  // Alloc t
            emit(make(GateKind::AND, {cz.q[0], cz.q[1], g.q[0]}));
            i -= 4;
            continue;
        }
        if (g.kind == GateKind::Measure || g.conditioned()) {
            throw Error(ErrorKind::NonInvertibleRegion, "measurement or classically controlled gate in inverted region");
        }
        // Forward "Alloc t; CCX(a,b,t)" inverts to "CCX(a,b,t); Dealloc t".
        if (measurement_uncompute && (g.kind == GateKind::CCX || g.kind == GateKind::AND) && i > 0 &&
            seq[i - 1].kind == GateKind::Alloc && seq[i - 1].q[0] == g.q[2]) {
            QubitId a = tr(g.q[0]), b = tr(g.q[1]), t = tr(g.q[2]);
            and_uncompute_mbu(a, b, t);
            std::erase_if(rename, [&](const auto& pr) { return pr.second == t; });
            --i;
            continue;
        }
        emit(inverse_gate(g));
    }
}

/// Records `body(circ)` and returns the recorded gates without emitting them.
template <class Body>
std::vector<Gate> record(Circuit& circ, Body&& body) {
    std::size_t mark = circ.size();
    body(circ);
    return circ.take_from(mark);
}

/// Emits the inverse of whatever `body` would emit.
template <class Body>
void emit_inverse(Circuit& circ, Body&& body, bool measurement_uncompute = true) {
    auto seq = record(circ, body);
    circ.append_inverse(seq, measurement_uncompute);
}

}  // namespace ecdlp
