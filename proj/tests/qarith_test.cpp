#include <gtest/gtest.h>

#include "ecdlp/qarith.hpp"
#include "ecdlp/simulator.hpp"
#include "test_util.hpp"

using namespace ecdlp;
using testutil::set_reg;

namespace {

std::uint64_t value(const RunResult& r, const QReg& reg) { return r.state.basis_value(reg); }

struct Backends : ::testing::TestWithParam<Adder> {};

}  // namespace

TEST_P(Backends, AdderAllInputsAllControls) {
    const Adder be = GetParam();
    for (std::uint64_t a = 0; a < 16; ++a) {
        for (std::uint64_t b = 0; b < 16; ++b) {
            for (int ct = 0; ct < 3; ++ct) {
                Circuit c;
                QReg A = c.alloc_register(4, "a"), B = c.alloc_register(4, "b");
                QubitId q = c.alloc_qubit("ctl");
                set_reg(c, A, a);
                set_reg(c, B, b);
                if (ct == 2) c.x(q);
                build_adder(c, be, A, B, ct ? Ctrl{q} : Ctrl{});
                auto r = run(c, a * 16 + b);
                ASSERT_EQ(value(r, B), ct == 1 ? b : (a + b) % 16) << a << "+" << b << " ct=" << ct;
                ASSERT_EQ(value(r, A), a);
            }
        }
    }
}

TEST_P(Backends, NarrowAddendIsZeroExtended) {
    for (std::uint64_t a = 0; a < 4; ++a) {
        for (std::uint64_t b = 0; b < 32; ++b) {
            Circuit c;
            QReg A = c.alloc_register(2, "a"), B = c.alloc_register(5, "b");
            set_reg(c, A, a);
            set_reg(c, B, b);
            build_adder(c, GetParam(), A, B);
            ASSERT_EQ(value(run(c, 1), B), (a + b) % 32);
        }
    }
}

TEST_P(Backends, SubtractorAndConstants) {
    const Adder be = GetParam();
    for (std::int64_t a = 0; a < 16; ++a) {
        for (std::uint64_t b = 0; b < 16; ++b) {
            Circuit c;
            QReg A = c.alloc_register(4, "a"), B = c.alloc_register(4, "b"), D = c.alloc_register(4, "d");
            set_reg(c, A, static_cast<std::uint64_t>(a));
            set_reg(c, B, b);
            set_reg(c, D, b);
            build_subtractor(c, be, A, B);
            build_adder(c, be, a, D);
            auto r = run(c, 3);
            ASSERT_EQ(value(r, B), (b - a + 16) % 16);
            ASSERT_EQ(value(r, D), (b + a) % 16);
        }
    }
}

TEST_P(Backends, Comparators) {
    const Adder be = GetParam();
    for (std::int64_t u = 0; u < 16; ++u) {
        for (std::int64_t v = 0; v < 16; ++v) {
            Circuit c;
            QReg U = c.alloc_register(4, "u"), V = c.alloc_register(4, "v");
            QubitId o1 = c.alloc_qubit("o1"), o2 = c.alloc_qubit("o2");
            set_reg(c, U, static_cast<std::uint64_t>(u));
            set_reg(c, V, static_cast<std::uint64_t>(v));
            build_comparator_gt(c, be, U, V, o1);
            build_comparator_gt(c, be, U, v, o2);
            auto r = run(c, 5);
            ASSERT_EQ(value(r, QReg{{o1}}), static_cast<std::uint64_t>(u > v));
            ASSERT_EQ(value(r, QReg{{o2}}), static_cast<std::uint64_t>(u > v));
            ASSERT_EQ(value(r, U), static_cast<std::uint64_t>(u));
            ASSERT_EQ(value(r, V), static_cast<std::uint64_t>(v));
        }
    }
}

TEST_P(Backends, ModAdderExhaustive) {
    const Adder be = GetParam();
    for (std::int64_t N : {5, 7, 11}) {
        const std::size_t w = residue_width(N);
        for (std::int64_t a = 0; a < N; ++a) {
            for (std::int64_t b = 0; b < N; ++b) {
                for (int ct = 0; ct < 3; ++ct) {
                    Circuit c;
                    QReg A = c.alloc_register(w, "a"), B = c.alloc_register(w, "b"), K = c.alloc_register(w, "k");
                    QubitId q = c.alloc_qubit("ctl");
                    set_reg(c, A, static_cast<std::uint64_t>(a));
                    set_reg(c, B, static_cast<std::uint64_t>(b));
                    set_reg(c, K, static_cast<std::uint64_t>(b));
                    if (ct == 2) c.x(q);
                    Ctrl ctrl = ct ? Ctrl{q} : Ctrl{};
                    mod_adder(c, be, A, B, N, ctrl);
                    mod_adder(c, be, a, K, N, ctrl);
                    auto r = run(c, static_cast<std::uint64_t>(a * N + b));
                    auto want = static_cast<std::uint64_t>(ct == 1 ? b : (a + b) % N);
                    ASSERT_EQ(value(r, B), want) << "N=" << N << " a=" << a << " b=" << b << " ct=" << ct;
                    ASSERT_EQ(value(r, K), want);
                    ASSERT_EQ(value(r, A), static_cast<std::uint64_t>(a));
                    ASSERT_EQ(c.live_count(), 3 * w + 1);
                }
            }
        }
    }
}

TEST_P(Backends, ModSubtractor) {
    for (std::int64_t a = 0; a < 7; ++a) {
        for (std::int64_t b = 0; b < 7; ++b) {
            Circuit c;
            QReg A = c.alloc_register(3, "a"), B = c.alloc_register(3, "b");
            set_reg(c, A, static_cast<std::uint64_t>(a));
            set_reg(c, B, static_cast<std::uint64_t>(b));
            mod_subtractor(c, GetParam(), A, B, 7);
            ASSERT_EQ(value(run(c, 2), B), static_cast<std::uint64_t>(mod(b - a, 7)));
        }
    }
}

TEST_P(Backends, ModDoubleAndReverseSubtract) {
    const Adder be = GetParam();
    for (std::int64_t p : {5, 7, 11}) {
        for (std::int64_t x = 0; x < p; ++x) {
            Circuit c;
            QReg R = c.alloc_register(residue_width(p), "r");
            set_reg(c, R, static_cast<std::uint64_t>(x));
            mod_double(c, be, R, p);
            ASSERT_EQ(value(run(c, 1), R), static_cast<std::uint64_t>(2 * x % p));
        }
    }
    for (std::int64_t x = 0; x < 7; ++x) {
        for (int ct = 0; ct < 3; ++ct) {
            Circuit c;
            QReg R = c.alloc_register(3, "r");
            QubitId q = c.alloc_qubit("ctl");
            set_reg(c, R, static_cast<std::uint64_t>(x));
            if (ct == 2) c.x(q);
            inpl_rsub(c, be, R, 7, 7, ct ? Ctrl{q} : Ctrl{});
            ASSERT_EQ(value(run(c, 1), R), static_cast<std::uint64_t>(ct == 1 ? x : mod(-x, 7)));
        }
    }
}

INSTANTIATE_TEST_SUITE_P(Adders, Backends, ::testing::Values(Adder::gidney, Adder::cuccaro),
                         [](const auto& info) { return std::string(to_string(info.param)); });

TEST(ModAdder, RejectsBadOperands) {
    Circuit c;
    QReg B = c.alloc_register(3, "b"), wide = c.alloc_register(4, "w");
    EXPECT_THROW(mod_adder(c, Adder::gidney, 9, B, 7), Error);
    EXPECT_THROW(mod_adder(c, Adder::gidney, wide, B, 7), Error);
}

TEST(CyclicShift, RotatesBothWays) {
    for (std::uint64_t v = 0; v < 16; ++v) {
        for (auto dir : {Direction::left, Direction::right}) {
            Circuit c;
            QReg R = c.alloc_register(4, "r");
            set_reg(c, R, v);
            build_cyclic_shift(c, R, dir);
            std::uint64_t want = dir == Direction::left ? ((v << 1) | (v >> 3)) & 15 : ((v >> 1) | (v << 3)) & 15;
            ASSERT_EQ(value(run(c, 1), R), want);
        }
    }
}

// Measurement-based uncomputation must leave the data registers in the same state
// whatever the X-basis outcomes were.
TEST(Gidney, DataMarginalsIndependentOfOutcomes) {
    Circuit c;
    QReg A = c.alloc_register(3, "a"), B = c.alloc_register(3, "b");
    for (auto q : A) c.h(q);
    c.h(B[1]);
    c.x(B[0]);
    build_adder(c, Adder::gidney, A, B);
    const QReg regs[] = {A, B};
    std::map<std::vector<std::uint64_t>, double> want;
    for (std::uint64_t a = 0; a < 8; ++a) {
        for (std::uint64_t b : {1u, 3u}) want[{a, (a + b) % 8}] = 1.0 / 16;
    }
    std::set<std::vector<std::int8_t>> outcomes_seen;
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        auto r = run(c, seed);
        outcomes_seen.insert(r.state.cbits());
        auto m = r.state.marginal(regs);
        ASSERT_EQ(m.size(), want.size());
        for (const auto& [k, p] : want) ASSERT_NEAR(m.at(k), p, 1e-12);
        // amplitudes, not just probabilities, agree across outcomes
        auto ref = run(c, 0);
        ASSERT_EQ(r.state.entries().size(), ref.state.entries().size());
        for (std::size_t i = 0; i < ref.state.entries().size(); ++i) {
            ASSERT_EQ(r.state.entries()[i].first, ref.state.entries()[i].first);
            ASSERT_LT(std::abs(r.state.entries()[i].second - ref.state.entries()[i].second), 1e-12);
        }
    }
    EXPECT_GT(outcomes_seen.size(), 1u);
}
