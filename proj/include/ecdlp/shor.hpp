#pragma once

// Shor's algorithm for the discrete logarithm P = lG on a toy curve.

#include <algorithm>
#include <complex>
#include <cstdint>
#include <map>
#include <numbers>
#include <optional>
#include <utility>
#include <vector>

#include "ecdlp/circuit.hpp"
#include "ecdlp/classical_ec.hpp"
#include "ecdlp/ec_circuit.hpp"
#include "ecdlp/modmath.hpp"
#include "ecdlp/simulator.hpp"

namespace ecdlp {

/// QFT on a little-endian register, |x> -> sum_y exp(2 pi i x y / 2^n) |y> / sqrt(2^n).
inline void build_qft(Circuit& circ, const QReg& reg, bool inverse = false) {
    auto forward = [&](Circuit& c) {
        const std::size_t n = reg.size();
        for (std::size_t i = n; i-- > 0;) {
            c.h(reg[i]);
            for (std::size_t j = i; j-- > 0;) {
                c.cphase(reg[j], reg[i], std::numbers::pi / static_cast<double>(std::uint64_t{1} << (i - j)));
            }
        }
        for (std::size_t i = 0; i < n / 2; ++i) c.swap(reg[i], reg[n - 1 - i]);
    };
    if (inverse) {
        emit_inverse(circ, forward);
    } else {
        forward(circ);
    }
}

struct ShorInstance {
    Curve curve;
    Point G;
    Point P;
    Point P0;
    int n = 0;
    std::int64_t r = 0;
    std::int64_t l_true = 0;
};

/// Fills in n, r and the brute-force logarithm (used for verification only).
inline ShorInstance make_instance(const Curve& c, const Point& G, const Point& P, const Point& P0) {
    for (const auto& pt : {G, P, P0}) {
        if (!is_on_curve(c, pt)) throw Error(ErrorKind::NotInSubgroup, "point " + pt.to_string() + " is not on the curve");
    }
    if (G.is_infinity()) throw Error(ErrorKind::InvalidArgument, "generator must not be the neutral element");
    if (P0.is_infinity()) throw Error(ErrorKind::InvalidArgument, "P0 needs an affine encoding");
    ShorInstance inst{c, G, P, P0};
    inst.n = bit_length(static_cast<std::uint64_t>(c.p));
    inst.r = point_order(c, G);
    inst.l_true = discrete_log_bruteforce(c, G, P);
    return inst;
}

struct ShorCircuit {
    Circuit circ;
    QReg x1, x2;
    EcPointRegs ecp;
};

/// P0 + x1 G - x2 P on the point register, then inverse QFTs and measurement of x1, x2.
/// With `measure_and_qft` off the circuit stops right after the two multiply-adds.
inline ShorCircuit build_shor_circuit(const ShorInstance& inst, const EcAddOptions& opt = {}, bool measure_and_qft = true) {
    ShorCircuit sc;
    Circuit& c = sc.circ;
    const auto w = static_cast<std::size_t>(inst.n);
    sc.ecp = alloc_point(c, inst.curve.p);
    load_point(c, sc.ecp, inst.P0);
    sc.x1 = c.alloc_register(w, "x1");
    sc.x2 = c.alloc_register(w, "x2");
    for (auto q : sc.x1) c.h(q);
    for (auto q : sc.x2) c.h(q);
    ctrl_ell_mult_add(c, inst.curve, inst.G, sc.ecp, sc.x1, opt);
    ctrl_ell_mult_add(c, inst.curve, ec_neg(inst.curve, inst.P), sc.ecp, sc.x2, opt);
    if (measure_and_qft) {
        build_qft(c, sc.x1, true);
        build_qft(c, sc.x2, true);
        for (auto q : sc.x1) c.measure(q);
        for (auto q : sc.x2) c.measure(q);
    }
    return sc;
}

/// Fraction of the 2^n x 2^n branches on which some controlled addition, with its control
/// on or off, sees an input the generic adder does not handle.
inline double exceptional_fraction(const ShorInstance& inst) {
    const std::int64_t side = std::int64_t{1} << inst.n;
    const Point negP = ec_neg(inst.curve, inst.P);
    std::int64_t bad = 0;
    for (std::int64_t a = 0; a < side; ++a) {
        for (std::int64_t b = 0; b < side; ++b) {
            Point acc = inst.P0;
            bool hit = false;
            for (auto [k, base] : {std::pair{a, inst.G}, std::pair{b, negP}}) {
                Point power = base;
                for (int i = 0; i < inst.n && !hit; ++i) {
                    if (!power.is_infinity()) {
                        const bool on = (k >> i) & 1;
                        if (!addition_supported(inst.curve, acc, power, on)) hit = true;
                        if (on) acc = ec_add(inst.curve, acc, power);
                    }
                    power = ec_add(inst.curve, power, power);
                }
            }
            bad += hit;
        }
    }
    return static_cast<double>(bad) / static_cast<double>(side * side);
}

/// l = -y2 / y1 (mod r), or nothing when y1 is not invertible modulo r.
inline std::optional<std::int64_t> postprocess(std::int64_t y1, std::int64_t y2, std::int64_t r) {
    if (r < 2) throw Error(ErrorKind::InvalidArgument, "order must be at least 2");
    auto inv = try_inverse_mod(mod(y1, r), r);
    if (!inv) return std::nullopt;
    return mod(-mod(y2, r) * *inv, r);
}

/// Variant that first maps each n-bit outcome to the nearest multiple of 1/r,
/// y -> round(y r / 2^n) mod r, before applying postprocess.
inline std::optional<std::int64_t> postprocess_rescaled(std::int64_t y1, std::int64_t y2, std::int64_t r, int n) {
    const double scale = static_cast<double>(r) / static_cast<double>(std::int64_t{1} << n);
    auto snap = [&](std::int64_t y) { return mod(static_cast<std::int64_t>(std::llround(static_cast<double>(y) * scale)), r); };
    return postprocess(snap(y1), snap(y2), r);
}

namespace detail {

/// sum_{x=0}^{r-1} exp(2 pi i x (y2 + l y1) / r)
inline std::complex<double> phase_sum(std::int64_t r, std::int64_t l, std::int64_t y1, std::int64_t y2) {
    std::complex<double> s = 0;
    const std::int64_t f = mod(y2 + l * y1, r);
    for (std::int64_t x = 0; x < r; ++x) {
        s += std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(x * f % r) / static_cast<double>(r));
    }
    return s;
}

}  // namespace detail

/// Outcome distribution with order-r phase registers: P(y1, y2) = |sum|^2 / r^3 summed over
/// the r point values. Entries below 1e-12 are dropped.
inline std::map<std::pair<std::int64_t, std::int64_t>, double> ideal_distribution(std::int64_t r, std::int64_t l) {
    if (r < 2 || l < 0 || l >= r) throw Error(ErrorKind::InvalidArgument, "need r >= 2 and 0 <= l < r");
    std::map<std::pair<std::int64_t, std::int64_t>, double> dist;
    const double r3 = static_cast<double>(r) * static_cast<double>(r) * static_cast<double>(r);
    for (std::int64_t y1 = 0; y1 < r; ++y1) {
        for (std::int64_t y2 = 0; y2 < r; ++y2) {
            double p = std::norm(detail::phase_sum(r, l, y1, y2)) / r3;
            if (p > 1e-12) dist[{y1, y2}] = p;
        }
    }
    return dist;
}

/// Probability that postprocess returns l under the given distribution.
inline double success_probability(const std::map<std::pair<std::int64_t, std::int64_t>, double>& dist, std::int64_t r,
                                  std::int64_t l) {
    double s = 0;
    for (const auto& [y, p] : dist) {
        if (postprocess(y.first, y.second, r) == l) s += p;
    }
    return s;
}

struct ShorOutcome {
    std::int64_t y1 = 0;
    std::int64_t y2 = 0;
    std::optional<std::int64_t> l_candidate;
    double probability = 0;
};

struct CandidateRanking {
    /// Candidate -> total probability, and the best candidate (none if nothing invertible).
    std::map<std::int64_t, double> mass;
    std::optional<std::int64_t> best;
    double recovery_mass = 0;
};

struct ShorResult {
    std::vector<ShorOutcome> outcomes;
    std::map<std::pair<std::int64_t, std::int64_t>, std::size_t> histogram;
    CandidateRanking ranking;
    CandidateRanking rescaled;
    double dirty_mass = 0;
    double exceptional_fraction = 0;
    std::size_t peak_branches = 0;
    std::size_t gate_count = 0;
    std::size_t peak_qubits = 0;
};

namespace detail {

template <class F>
CandidateRanking rank(const std::vector<ShorOutcome>& outs, std::int64_t l_true, F&& candidate) {
    CandidateRanking rk;
    for (const auto& o : outs) {
        if (auto c = candidate(o)) rk.mass[*c] += o.probability;
    }
    double top = -1;
    for (const auto& [c, m] : rk.mass) {
        if (m > top + 1e-12) {
            top = m;
            rk.best = c;
        }
    }
    if (auto it = rk.mass.find(l_true); it != rk.mass.end()) rk.recovery_mass = it->second;
    return rk;
}

}  // namespace detail

/// Builds and simulates the full circuit. Branches through exceptional additions leave
/// dirty scratch, which is traced out (lenient Dealloc) rather than rejected.
inline ShorResult run_shor(const ShorInstance& inst, std::size_t shots, std::uint64_t seed, const EcAddOptions& opt = {}) {
    ShorCircuit sc = build_shor_circuit(inst, opt);
    SimOptions so;
    so.strict_dealloc = false;
    const QReg regs[] = {sc.x1, sc.x2};
    ExactDistribution ed = exact_distribution(sc.circ, regs, so);

    ShorResult res;
    res.dirty_mass = ed.dirty_mass;
    res.peak_branches = ed.peak_branches;
    res.exceptional_fraction = exceptional_fraction(inst);
    res.gate_count = sc.circ.size();
    res.peak_qubits = sc.circ.peak_live();
    for (const auto& [vals, p] : ed.probs) {
        if (p <= 1e-15) continue;
        auto y1 = static_cast<std::int64_t>(vals[0]), y2 = static_cast<std::int64_t>(vals[1]);
        res.outcomes.push_back({y1, y2, postprocess(y1, y2, inst.r), p});
    }
    res.ranking = detail::rank(res.outcomes, inst.l_true, [](const ShorOutcome& o) { return o.l_candidate; });
    res.rescaled = detail::rank(res.outcomes, inst.l_true,
                                [&](const ShorOutcome& o) { return postprocess_rescaled(o.y1, o.y2, inst.r, inst.n); });
    if (shots > 0) {
        for (const auto& [vals, cnt] : sample(sc.circ, regs, shots, seed, so)) {
            res.histogram[{static_cast<std::int64_t>(vals[0]), static_cast<std::int64_t>(vals[1])}] += cnt;
        }
    }
    return res;
}

}  // namespace ecdlp
