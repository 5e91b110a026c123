#pragma once

// Sparse statevector simulation keyed by 128-bit basis strings (bit q = qubit id q),
// plus a dense reference engine and an exact branch-enumerating distribution solver.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <numbers>
#include <random>
#include <span>
#include <unordered_map>
#include <utility>
#include <vector>

#include "ecdlp/circuit.hpp"

namespace ecdlp {

using BasisKey = unsigned __int128;
using Amplitude = std::complex<double>;

inline constexpr std::size_t kMaxSparseQubits = 128;
inline constexpr std::size_t kMaxDenseQubits = 14;

struct SimOptions {
    double prune = 1e-12;
    double dealloc_tolerance = 1e-9;
    double norm_tolerance = 1e-6;
    /// When false a dirty Dealloc measures the qubit and discards it instead of throwing.
    bool strict_dealloc = true;
    std::size_t branch_cap = std::size_t{1} << 16;
};

namespace detail {

struct KeyHash {
    std::size_t operator()(BasisKey k) const noexcept {
        auto lo = static_cast<std::uint64_t>(k);
        auto hi = static_cast<std::uint64_t>(k >> 64);
        std::uint64_t h = lo * 0x9E3779B97F4A7C15ull ^ (hi + 0x632BE59BD9B4E019ull + (lo << 6) + (lo >> 2));
        h ^= h >> 31;
        return static_cast<std::size_t>(h * 0xBF58476D1CE4E5B9ull);
    }
};

constexpr BasisKey bit(QubitId q) { return BasisKey{1} << q; }

/// Uniform double in [0, 1) from the top 53 bits of a 64-bit draw.
inline double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

}  // namespace detail

class SparseState {
public:
    using Entry = std::pair<BasisKey, Amplitude>;

    SparseState() : amps_{{BasisKey{0}, Amplitude{1.0, 0.0}}} {}

    const std::vector<Entry>& entries() const { return amps_; }
    std::vector<Entry>& entries() { return amps_; }
    std::vector<std::int8_t>& cbits() { return cbits_; }
    const std::vector<std::int8_t>& cbits() const { return cbits_; }

    double norm2() const {
        double s = 0;
        for (const auto& [k, a] : amps_) s += std::norm(a);
        return s;
    }

    Amplitude amplitude(BasisKey key) const {
        for (const auto& [k, a] : amps_) {
            if (k == key) return a;
        }
        return {};
    }

    double probability_one(QubitId q) const {
        double p = 0;
        const BasisKey m = detail::bit(q);
        for (const auto& [k, a] : amps_) {
            if (k & m) p += std::norm(a);
        }
        return p;
    }

    /// Keeps the component with qubit q == outcome and renormalizes; returns its probability.
    double project(QubitId q, bool outcome) {
        const BasisKey m = detail::bit(q);
        double p = 0;
        std::size_t w = 0;
        for (std::size_t i = 0; i < amps_.size(); ++i) {
            if (((amps_[i].first & m) != 0) == outcome) {
                p += std::norm(amps_[i].second);
                amps_[w++] = amps_[i];
            }
        }
        amps_.resize(w);
        if (p > 0) {
            double s = 1.0 / std::sqrt(p);
            for (auto& e : amps_) e.second *= s;
        }
        return p;
    }

    void canonicalize() {
        std::sort(amps_.begin(), amps_.end(), [](const Entry& l, const Entry& r) { return l.first < r.first; });
    }

    static std::uint64_t register_value(BasisKey key, const QReg& reg) {
        std::uint64_t v = 0;
        for (std::size_t i = 0; i < reg.size(); ++i) {
            if (key & detail::bit(reg[i])) v |= std::uint64_t{1} << i;
        }
        return v;
    }

    /// Joint distribution of the given registers' values.
    std::map<std::vector<std::uint64_t>, double> marginal(std::span<const QReg> regs) const {
        std::map<std::vector<std::uint64_t>, double> out;
        for (const auto& [k, a] : amps_) {
            std::vector<std::uint64_t> vals;
            vals.reserve(regs.size());
            for (const auto& r : regs) vals.push_back(register_value(k, r));
            out[vals] += std::norm(a);
        }
        return out;
    }

    /// Value of `reg` when the state is a single basis vector on it (throws otherwise).
    std::uint64_t basis_value(const QReg& reg, double tol = 1e-9) const {
        QReg r = reg;
        auto m = marginal(std::span<const QReg>(&r, 1));
        for (const auto& [vals, p] : m) {
            if (p > 1 - tol) return vals[0];
        }
        throw Error(ErrorKind::InvalidArgument, "register is not in a basis state");
    }

    /// Applies a unitary (optionally classically conditioned) gate.
    void apply_unitary(const Gate& g, const SimOptions& opt) {
        if (g.conditioned() && cbit_value(g.cond_bit) != g.cond_value) return;
        const auto& q = g.q;
        switch (g.kind) {
            case GateKind::X: flip_if(0, 0, detail::bit(q[0])); break;
            case GateKind::CX: flip_if(detail::bit(q[0]), detail::bit(q[0]), detail::bit(q[1])); break;
            case GateKind::AND:
                for (const auto& e : amps_) {
                    if (e.first & detail::bit(q[2])) {
                        throw Error(ErrorKind::InvalidCircuit, "AND target " + std::to_string(q[2]) + " is not |0>");
                    }
                }
                [[fallthrough]];
            case GateKind::CCX: {
                BasisKey c = detail::bit(q[0]) | detail::bit(q[1]);
                flip_if(c, c, detail::bit(q[2]));
                break;
            }
            case GateKind::MCX: {
                BasisKey mask = 0, want = 0;
                for (int i = 0; i < g.num_controls(); ++i) {
                    mask |= detail::bit(q[i]);
                    if (g.control_active(i)) want |= detail::bit(q[i]);
                }
                flip_if(mask, want, detail::bit(q[g.num_controls()]));
                break;
            }
            case GateKind::SWAP: swap_if(0, q[0], q[1]); break;
            case GateKind::CSWAP: swap_if(detail::bit(q[0]), q[1], q[2]); break;
            case GateKind::Z: phase_if(detail::bit(q[0]), Amplitude{-1, 0}); break;
            case GateKind::S: phase_if(detail::bit(q[0]), Amplitude{0, 1}); break;
            case GateKind::Sdg: phase_if(detail::bit(q[0]), Amplitude{0, -1}); break;
            case GateKind::T: phase_if(detail::bit(q[0]), std::polar(1.0, std::numbers::pi / 4)); break;
            case GateKind::Tdg: phase_if(detail::bit(q[0]), std::polar(1.0, -std::numbers::pi / 4)); break;
            case GateKind::Phase: phase_if(detail::bit(q[0]), std::polar(1.0, g.angle)); break;
            case GateKind::CZ: phase_if(detail::bit(q[0]) | detail::bit(q[1]), Amplitude{-1, 0}); break;
            case GateKind::CPhase: phase_if(detail::bit(q[0]) | detail::bit(q[1]), std::polar(1.0, g.angle)); break;
            case GateKind::H: hadamard(q[0], opt); break;
            default: throw Error(ErrorKind::InvalidCircuit, std::string("not a unitary gate: ") + gate_name(g.kind));
        }
    }

    std::int8_t cbit_value(std::int32_t c) const {
        return static_cast<std::size_t>(c) < cbits_.size() ? cbits_[c] : 0;
    }
    void set_cbit(std::int32_t c, bool v) {
        if (static_cast<std::size_t>(c) >= cbits_.size()) cbits_.resize(c + 1, 0);
        cbits_[c] = v ? 1 : 0;
    }

    /// Clears qubit q (which must hold 1 in every entry).
    void flip(QubitId q) { flip_if(0, 0, detail::bit(q)); }

private:
    void flip_if(BasisKey mask, BasisKey want, BasisKey t) {
        for (auto& e : amps_) {
            if ((e.first & mask) == want) e.first ^= t;
        }
    }
    void swap_if(BasisKey ctrl, QubitId a, QubitId b) {
        const BasisKey ma = detail::bit(a), mb = detail::bit(b);
        for (auto& e : amps_) {
            if ((e.first & ctrl) != ctrl) continue;
            bool ba = (e.first & ma) != 0, bb = (e.first & mb) != 0;
            if (ba != bb) e.first ^= ma | mb;
        }
    }
    void phase_if(BasisKey mask, Amplitude f) {
        for (auto& e : amps_) {
            if ((e.first & mask) == mask) e.second *= f;
        }
    }
    void hadamard(QubitId q, const SimOptions& opt) {
        const BasisKey m = detail::bit(q);
        const double s = std::numbers::sqrt2 / 2;
        std::unordered_map<BasisKey, Amplitude, detail::KeyHash> acc;
        acc.reserve(amps_.size() * 2);
        for (const auto& [k, a] : amps_) {
            BasisKey k0 = k & ~m, k1 = k | m;
            acc[k0] += a * s;
            acc[k1] += (k & m) ? -a * s : a * s;
        }
        amps_.clear();
        for (const auto& [k, a] : acc) {
            if (std::abs(a) >= opt.prune) amps_.emplace_back(k, a);
        }
        canonicalize();
        double n = norm2();
        if (std::abs(n - 1.0) > opt.norm_tolerance) throw Error(ErrorKind::NormLoss, "norm drifted to " + std::to_string(n));
    }

    std::vector<Entry> amps_;
    std::vector<std::int8_t> cbits_;
};

struct RunResult {
    SparseState state;
    /// Dealloc events on qubits that were not |0> (only possible with strict_dealloc = false).
    std::size_t dirty_deallocs = 0;
};

namespace detail {

inline void check_capacity(const Circuit& circ, std::size_t cap) {
    if (circ.qubit_capacity() > cap) {
        throw Error(ErrorKind::TooLarge, "circuit uses qubit ids up to " + std::to_string(circ.qubit_capacity()) +
                                             ", limit " + std::to_string(cap));
    }
}

}  // namespace detail

/// Runs the circuit once; measurements sample from a generator seeded with `seed`.
inline RunResult run(const Circuit& circ, std::uint64_t seed, const SimOptions& opt = {}) {
    detail::check_capacity(circ, kMaxSparseQubits);
    RunResult res;
    SparseState& st = res.state;
    st.cbits().assign(circ.num_cbits(), 0);
    std::mt19937_64 rng(seed);
    for (const auto& g : circ.gates()) {
        switch (g.kind) {
            case GateKind::Alloc: break;
            case GateKind::Measure: {
                double p1 = st.probability_one(g.q[0]);
                bool outcome = detail::uniform01(rng) < p1;
                st.project(g.q[0], outcome);
                st.set_cbit(g.cbit, outcome);
                break;
            }
            case GateKind::Dealloc: {
                double p1 = st.probability_one(g.q[0]);
                if (p1 <= opt.dealloc_tolerance) {
                    st.project(g.q[0], false);
                    break;
                }
                if (opt.strict_dealloc) {
                    throw Error(ErrorKind::DeallocNonZero, "qubit " + std::to_string(g.q[0]) + " (" +
                                                               circ.label(g.q[0]) + ") has |1> mass " + std::to_string(p1));
                }
                ++res.dirty_deallocs;
                bool outcome = detail::uniform01(rng) < p1;
                st.project(g.q[0], outcome);
                if (outcome) st.flip(g.q[0]);
                break;
            }
            default: st.apply_unitary(g, opt); break;
        }
    }
    st.canonicalize();
    return res;
}

/// Histogram of register values over `shots` independent runs; shot i uses seed (seed, i).
/// Registers still in superposition at the end are read out by Born-rule sampling.
inline std::map<std::vector<std::uint64_t>, std::size_t> sample(const Circuit& circ, std::span<const QReg> regs,
                                                                std::size_t shots, std::uint64_t seed,
                                                                const SimOptions& opt = {}) {
    std::map<std::vector<std::uint64_t>, std::size_t> hist;
    for (std::size_t s = 0; s < shots; ++s) {
        std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                          static_cast<std::uint32_t>(s), static_cast<std::uint32_t>(s >> 32)};
        std::mt19937_64 shot_rng(seq);
        std::uint64_t run_seed = shot_rng();
        RunResult r = run(circ, run_seed, opt);
        auto m = r.state.marginal(regs);
        double u = detail::uniform01(shot_rng);
        const std::vector<std::uint64_t>* pick = nullptr;
        for (const auto& [vals, p] : m) {
            pick = &vals;
            if (u < p) break;
            u -= p;
        }
        if (pick) ++hist[*pick];
    }
    return hist;
}

namespace detail {

/// Independent per-basis-state gate semantics used by the dense engine.
inline void dense_basis_action(const Gate& g, std::size_t& i, Amplitude& a) {
    auto on = [&](int k) { return ((i >> g.q[k]) & 1u) != 0; };
    auto flip = [&](int k) { i ^= std::size_t{1} << g.q[k]; };
    switch (g.kind) {
        case GateKind::X: flip(0); break;
        case GateKind::CX: if (on(0)) flip(1); break;
        case GateKind::CCX:
        case GateKind::AND: if (on(0) && on(1)) flip(2); break;
        case GateKind::MCX: {
            bool fire = true;
            for (int c = 0; c < g.num_controls(); ++c) fire = fire && on(c) == g.control_active(c);
            if (fire) flip(g.num_controls());
            break;
        }
        case GateKind::SWAP: if (on(0) != on(1)) { flip(0); flip(1); } break;
        case GateKind::CSWAP: if (on(0) && on(1) != on(2)) { flip(1); flip(2); } break;
        case GateKind::Z: if (on(0)) a = -a; break;
        case GateKind::S: if (on(0)) a *= Amplitude(0, 1); break;
        case GateKind::Sdg: if (on(0)) a *= Amplitude(0, -1); break;
        case GateKind::T: if (on(0)) a *= std::exp(Amplitude(0, std::numbers::pi / 4)); break;
        case GateKind::Tdg: if (on(0)) a *= std::exp(Amplitude(0, -std::numbers::pi / 4)); break;
        case GateKind::Phase: if (on(0)) a *= std::exp(Amplitude(0, g.angle)); break;
        case GateKind::CZ: if (on(0) && on(1)) a = -a; break;
        case GateKind::CPhase: if (on(0) && on(1)) a *= std::exp(Amplitude(0, g.angle)); break;
        default: throw Error(ErrorKind::UnsupportedGate, gate_name(g.kind));
    }
}

}  // namespace detail

/// Dense reference simulation of a measurement-free circuit; index bit q is qubit id q.
inline std::vector<Amplitude> dense_oracle(const Circuit& circ) {
    detail::check_capacity(circ, kMaxDenseQubits);
    const std::size_t n = circ.qubit_capacity();
    std::vector<Amplitude> psi(std::size_t{1} << n);
    psi[0] = 1.0;
    auto bitq = [](QubitId q) { return std::size_t{1} << q; };
    for (const auto& g : circ.gates()) {
        if (g.kind == GateKind::Alloc || g.kind == GateKind::Dealloc) continue;
        if (!is_unitary(g.kind) || g.conditioned()) {
            throw Error(ErrorKind::UnsupportedGate, "dense oracle handles unitary circuits only");
        }
        const auto& q = g.q;
        if (g.kind == GateKind::H) {
            const std::size_t m = bitq(q[0]);
            const double s = std::numbers::sqrt2 / 2;
            for (std::size_t i = 0; i < psi.size(); ++i) {
                if (i & m) continue;
                Amplitude a0 = psi[i], a1 = psi[i | m];
                psi[i] = (a0 + a1) * s;
                psi[i | m] = (a0 - a1) * s;
            }
            continue;
        }
        // Every other supported gate maps basis states to basis states up to a phase.
        std::vector<Amplitude> next(psi.size());
        for (std::size_t i = 0; i < psi.size(); ++i) {
            if (psi[i] == Amplitude{}) continue;
            std::size_t j = i;
            Amplitude a = psi[i];
            detail::dense_basis_action(g, j, a);
            next[j] += a;
        }
        psi.swap(next);
    }
    return psi;
}

/// Amplitudes of a sparse state laid out densely over `n` qubit ids.
inline std::vector<Amplitude> to_dense(const SparseState& st, std::size_t n) {
    std::vector<Amplitude> out(std::size_t{1} << n);
    for (const auto& [k, a] : st.entries()) {
        if (k >> n) throw Error(ErrorKind::TooLarge, "state has support beyond requested width");
        out[static_cast<std::size_t>(k)] += a;
    }
    return out;
}

struct ExactDistribution {
    std::map<std::vector<std::uint64_t>, double> probs;
    /// Probability of a dirty Dealloc, summed over Dealloc events (lenient mode only).
    double dirty_mass = 0;
    std::size_t peak_branches = 0;
};

namespace detail {

struct Branch {
    SparseState st;
    double w = 1;
};

inline bool same_state(const SparseState& a, const SparseState& b, double tol) {
    const auto& ea = a.entries();
    const auto& eb = b.entries();
    if (ea.size() != eb.size()) return false;
    for (std::size_t i = 0; i < ea.size(); ++i) {
        if (ea[i].first != eb[i].first || std::abs(ea[i].second - eb[i].second) > tol) return false;
    }
    return true;
}

/// Merges branches whose quantum state and still-relevant classical bits coincide.
inline void merge_branches(std::vector<Branch>& bs, const std::vector<std::int64_t>& last_read, std::size_t now) {
    if (bs.size() < 2) return;
    std::unordered_map<std::size_t, std::vector<std::size_t>> buckets;
    std::vector<Branch> out;
    out.reserve(bs.size());
    auto live_bits_equal = [&](const SparseState& x, const SparseState& y) {
        for (std::size_t c = 0; c < last_read.size(); ++c) {
            if (last_read[c] > static_cast<std::int64_t>(now) && x.cbit_value(static_cast<std::int32_t>(c)) !=
                                                                     y.cbit_value(static_cast<std::int32_t>(c))) {
                return false;
            }
        }
        return true;
    };
    for (auto& b : bs) {
        b.st.canonicalize();
        std::size_t h = b.st.entries().size();
        for (const auto& e : b.st.entries()) h = h * 1099511628211ull ^ KeyHash{}(e.first);
        for (std::size_t c = 0; c < last_read.size(); ++c) {
            if (last_read[c] > static_cast<std::int64_t>(now)) h = h * 31 + static_cast<std::size_t>(b.st.cbit_value(static_cast<std::int32_t>(c)));
        }
        auto& cand = buckets[h];
        bool merged = false;
        for (auto idx : cand) {
            if (same_state(out[idx].st, b.st, 1e-12) && live_bits_equal(out[idx].st, b.st)) {
                out[idx].w += b.w;
                merged = true;
                break;
            }
        }
        if (!merged) {
            cand.push_back(out.size());
            out.push_back(std::move(b));
        }
    }
    bs.swap(out);
}

}  // namespace detail

/// Exact joint distribution of `regs` (live at the end of the circuit). Every measurement
/// (and, in lenient mode, every dirty Dealloc) forks the state with its Born weight;
/// forks that reconverge are merged.
inline ExactDistribution exact_distribution(const Circuit& circ, std::span<const QReg> regs,
                                            const SimOptions& opt = {}) {
    detail::check_capacity(circ, kMaxSparseQubits);
    const auto& gates = circ.gates();
    std::vector<std::int64_t> last_read(circ.num_cbits(), -1);
    for (std::size_t i = 0; i < gates.size(); ++i) {
        if (gates[i].conditioned()) last_read[gates[i].cond_bit] = static_cast<std::int64_t>(i);
    }
    ExactDistribution res;
    std::vector<detail::Branch> bs(1);
    bs[0].st.cbits().assign(circ.num_cbits(), 0);
    const double drop = 1e-14;
    for (std::size_t gi = 0; gi < gates.size(); ++gi) {
        const Gate& g = gates[gi];
        if (g.kind == GateKind::Alloc) continue;
        if (g.kind == GateKind::Measure || g.kind == GateKind::Dealloc) {
            std::vector<detail::Branch> next;
            next.reserve(bs.size() * 2);
            bool forked = false;
            for (auto& b : bs) {
                double p1 = b.st.probability_one(g.q[0]);
                if (g.kind == GateKind::Dealloc) {
                    if (p1 <= opt.dealloc_tolerance) {
                        b.st.project(g.q[0], false);
                        next.push_back(std::move(b));
                        continue;
                    }
                    if (opt.strict_dealloc) {
                        throw Error(ErrorKind::DeallocNonZero,
                                    "qubit " + std::to_string(g.q[0]) + " (" + circ.label(g.q[0]) + ") has |1> mass " +
                                        std::to_string(p1));
                    }
                    res.dirty_mass += b.w * p1;
                }
                for (int outcome = 0; outcome < 2; ++outcome) {
                    double p = outcome ? p1 : 1 - p1;
                    if (p <= drop) continue;
                    detail::Branch nb{b.st, b.w * p};
                    nb.st.project(g.q[0], outcome);
                    if (g.kind == GateKind::Measure) nb.st.set_cbit(g.cbit, outcome);
                    else if (outcome) nb.st.flip(g.q[0]);
                    next.push_back(std::move(nb));
                }
                forked = true;
            }
            bs.swap(next);
            if (forked) detail::merge_branches(bs, last_read, gi);
            if (bs.size() > opt.branch_cap) {
                throw Error(ErrorKind::BranchExplosion, std::to_string(bs.size()) + " measurement branches");
            }
            res.peak_branches = std::max(res.peak_branches, bs.size());
            continue;
        }
        for (auto& b : bs) b.st.apply_unitary(g, opt);
    }
    res.peak_branches = std::max(res.peak_branches, bs.size());
    for (const auto& r : regs) {
        for (auto q : r) {
            if (!circ.is_live(q)) throw Error(ErrorKind::InvalidArgument, "register qubit not live at circuit end");
        }
    }
    for (const auto& b : bs) {
        for (const auto& [vals, p] : b.st.marginal(regs)) res.probs[vals] += b.w * p;
    }
    return res;
}

}  // namespace ecdlp
