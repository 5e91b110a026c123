#pragma once

#include <cstdint>
#include <numeric>
#include <random>

#include "ecdlp/circuit.hpp"
#include "ecdlp/simulator.hpp"

namespace testutil {

using namespace ecdlp;

inline void set_reg(Circuit& c, const QReg& r, std::uint64_t v) {
    for (std::size_t i = 0; i < r.size(); ++i) {
        if ((v >> i) & 1) c.x(r[i]);
    }
}

// Independent inverse by exhaustive search, used as the oracle for every inverse.
inline std::int64_t inverse_by_search(std::int64_t v, std::int64_t p) {
    for (std::int64_t w = 1; w < p; ++w) {
        if (v * w % p == 1) return w;
    }
    return 0;
}

// Random unitary Clifford+T circuit over `nq` qubits (2 <= nq).
inline Circuit random_clifford_t(std::mt19937_64& rng, std::size_t nq, std::size_t gates) {
    Circuit c;
    QReg r = c.alloc_register(nq, "q");
    auto pick = [&] { return r[rng() % nq]; };
    for (std::size_t k = 0; k < gates; ++k) {
        QubitId a = pick(), b = pick();
        while (b == a) b = pick();
        switch (rng() % 9) {
            case 0: case 1: c.h(a); break;
            case 2: c.t(a); break;
            case 3: c.tdg(a); break;
            case 4: c.s(a); break;
            case 5: c.x(a); break;
            case 6: case 7: c.cx(a, b); break;
            default: c.cz(a, b); break;
        }
    }
    return c;
}

// Largest |a - b| between the sparse run and the dense oracle of a unitary circuit.
inline double sparse_dense_gap(const Circuit& c) {
    auto sparse = to_dense(run(c, 0).state, c.qubit_capacity());
    auto dense = dense_oracle(c);
    double gap = 0;
    for (std::size_t i = 0; i < dense.size(); ++i) gap = std::max(gap, std::abs(sparse[i] - dense[i]));
    return gap;
}

}  // namespace testutil
