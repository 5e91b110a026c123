#pragma once

// Resource rows for the four benchmark routines.

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ecdlp/ec_circuit.hpp"
#include "ecdlp/kaliski.hpp"
#include "ecdlp/resources.hpp"
#include "ecdlp/shor.hpp"

namespace ecdlp {

enum class Routine { kaliski, ecadd, ctrl_ecadd, shor };

inline constexpr std::array<Routine, 4> kAllRoutines = {Routine::kaliski, Routine::ecadd, Routine::ctrl_ecadd,
                                                        Routine::shor};

inline std::string_view to_string(Routine r) {
    switch (r) {
        case Routine::kaliski: return "kaliski";
        case Routine::ecadd: return "ecadd";
        case Routine::ctrl_ecadd: return "ctrl-ecadd";
        case Routine::shor: return "shor";
    }
    return "?";
}

inline std::optional<Routine> parse_routine(std::string_view s) {
    for (auto r : kAllRoutines) {
        if (to_string(r) == s) return r;
    }
    return std::nullopt;
}

struct BenchRow {
    std::string routine;
    std::size_t qubit_count = 0;
    std::uint64_t t_count = 0;
    HalfCount cx_count;
    std::uint64_t t_depth = 0;
    std::uint64_t depth = 0;
};

/// Published figures for p = 7, a = 5, b = 4 (cx counts in halves).
struct ReferenceRow {
    std::size_t qubit_count;
    std::uint64_t t_count;
    std::uint64_t cx_halves;
    std::uint64_t t_depth;
};

inline ReferenceRow reference_row(Routine r) {
    switch (r) {
        case Routine::kaliski: return {30, 2918, 11302, 855};
        case Routine::ecadd: return {64, 16388, 74663, 3829};
        case Routine::ctrl_ecadd: return {66, 46971, 225309, 11281};
        case Routine::shor: return {69, 93942, 450492, 22527};
    }
    return {};
}

struct BenchSetup {
    Curve curve;
    Point G;
    Point P;
    Point P0;
    EcAddOptions opt{Adder::gidney, Adder::gidney};
};

/// Builds the routine's circuit on the setup's curve (unsimulated).
inline Circuit build_routine(Routine r, const BenchSetup& s) {
    const std::int64_t p = s.curve.p;
    const auto n = static_cast<std::size_t>(bit_length(static_cast<std::uint64_t>(p)));
    Circuit c;
    switch (r) {
        case Routine::kaliski: {
            ModReg v = alloc_modreg(c, p, "v");
            QReg m = c.alloc_register(static_cast<std::size_t>(kaliski_rounds(p)), "m");
            kaliski_quantum(c, s.opt.inversion, v, m);
            break;
        }
        case Routine::ecadd: {
            auto pt = alloc_point(c, p);
            load_point(c, pt, s.P0);
            ell_add_inpl(c, pt, s.G, {}, s.opt);
            break;
        }
        case Routine::ctrl_ecadd: {
            auto pt = alloc_point(c, p);
            load_point(c, pt, s.P0);
            QReg k = c.alloc_register(n, "k");
            ctrl_ell_mult_add(c, s.curve, s.G, pt, k, s.opt);
            break;
        }
        case Routine::shor: {
            auto inst = make_instance(s.curve, s.G, s.P, s.P0);
            c = build_shor_circuit(inst, s.opt).circ;
            break;
        }
    }
    return c;
}

inline BenchRow bench_routine(Routine r, const BenchSetup& s) {
    ResourceReport rep = measure_resources(build_routine(r, s));
    return {std::string(to_string(r)), rep.qubit_count, rep.t_count, rep.cx_count, rep.t_depth, rep.depth};
}

/// Signed relative deviation in percent.
inline double percent_dev(double ours, double ref) { return ref == 0 ? 0 : 100.0 * (ours - ref) / ref; }

}  // namespace ecdlp
