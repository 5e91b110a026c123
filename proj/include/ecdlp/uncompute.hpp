#pragma once

// Compute / use / uncompute combinators.

#include <algorithm>
#include <set>
#include <span>
#include <vector>

#include "ecdlp/circuit.hpp"

namespace ecdlp {

/// Emits `body(circ)` and returns a copy of the gates it appended.
template <class Body>
std::vector<Gate> capture(Circuit& circ, Body&& body) {
    std::size_t mark = circ.size();
    body(circ);
    return {circ.gates().begin() + static_cast<std::ptrdiff_t>(mark), circ.gates().end()};
}

namespace detail {

/// True when every measurement in `seq` belongs to a measurement-based AND uncomputation.
inline bool only_mbu_measurements(std::span<const Gate> seq) {
    std::vector<bool> covered(seq.size(), false);
    for (std::size_t i = 0; i < seq.size(); ++i) {
        if (seq[i].kind == GateKind::Dealloc && is_mbu_group(seq, i)) {
            for (std::size_t k = i - 4; k <= i; ++k) covered[k] = true;
        }
    }
    for (std::size_t i = 0; i < seq.size(); ++i) {
        if ((seq[i].kind == GateKind::Measure || seq[i].conditioned()) && !covered[i]) return false;
    }
    return true;
}

}  // namespace detail

/// Emits compute, body, then the exact gate-reversed inverse of compute.
/// By default the compute region must be unitary apart from Alloc/Dealloc. With
/// `allow_mbu`, measurement-based AND uncomputations are accepted as well (each one
/// inverts exactly to a fresh logical AND), and the ANDs of compute are in turn undone
/// by measurement.
template <class Compute, class Body>
void conjugate(Circuit& circ, Compute&& compute, Body&& body, bool allow_mbu = false) {
    std::size_t mark = circ.size();
    compute(circ);
    std::vector<Gate> seq(circ.gates().begin() + static_cast<std::ptrdiff_t>(mark), circ.gates().end());
    bool ok = allow_mbu ? detail::only_mbu_measurements(seq)
                        : std::none_of(seq.begin(), seq.end(), [](const Gate& g) {
                              return g.kind == GateKind::Measure || g.conditioned();
                          });
    if (!ok) {
        circ.take_from(mark);
        throw Error(ErrorKind::NonInvertibleRegion, "compute region of a conjugation contains a measurement");
    }
    body(circ);
    circ.append_inverse(seq, allow_mbu);
}

/// Undoes `recorded` (gates previously emitted into `circ`) by appending its inverse.
/// Every qubit the recording touches must still be live.
inline void uncompute_by_replay(Circuit& circ, std::span<const QubitId> targets, std::span<const Gate> recorded) {
    std::set<QubitId> internal;
    for (const auto& g : recorded) {
        if (g.kind == GateKind::Alloc) internal.insert(g.q[0]);
    }
    for (const auto& g : recorded) {
        for (auto q : g.qubits()) {
            if (!internal.count(q) && !circ.is_live(q)) {
                throw Error(ErrorKind::InputsNoLongerLive, "qubit " + std::to_string(q) + " was released before replay");
            }
        }
    }
    for (auto t : targets) {
        if (!circ.is_live(t)) throw Error(ErrorKind::InputsNoLongerLive, "target qubit " + std::to_string(t) + " is not live");
    }
    circ.append_inverse(recorded);
}

}  // namespace ecdlp
