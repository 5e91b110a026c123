#include <gtest/gtest.h>

#include "ecdlp/montgomery.hpp"
#include "ecdlp/simulator.hpp"
#include "test_util.hpp"

using namespace ecdlp;
using testutil::set_reg;

namespace {

struct Backends : ::testing::TestWithParam<Adder> {};

}  // namespace

TEST(Classical, RoundTrip) {
    for (std::int64_t p : {5, 7, 11, 13}) {
        for (int k = -6; k <= 6; ++k) {
            for (std::int64_t a = 0; a < p; ++a) {
                std::int64_t enc = to_montgomery_classical(a, k, p);
                // enc * 2^-k == a, checked with integer powers only
                if (k >= 0) {
                    EXPECT_EQ(enc, a * (std::int64_t{1} << k) % p);
                } else {
                    EXPECT_EQ(enc * (std::int64_t{1} << -k) % p, a);
                }
                EXPECT_EQ(from_montgomery_classical(enc, k, p), a);
            }
        }
    }
}

TEST_P(Backends, InplaceConstantMultiply) {
    for (std::int64_t c = 1; c < 7; ++c) {
        for (std::int64_t x = 0; x < 7; ++x) {
            Circuit circ;
            ModReg X = alloc_modreg(circ, 7, "x");
            set_reg(circ, X.reg, static_cast<std::uint64_t>(x));
            inplace_mul_const(circ, GetParam(), X, c);
            ASSERT_EQ(run(circ, 1).state.basis_value(X.reg), static_cast<std::uint64_t>(c * x % 7));
        }
    }
}

TEST_P(Backends, ConversionsTrackShift) {
    for (std::int64_t x = 0; x < 11; ++x) {
        Circuit circ;
        ModReg X = alloc_modreg(circ, 11, "x");
        set_reg(circ, X.reg, static_cast<std::uint64_t>(x));
        to_montgomery_qm(circ, GetParam(), X, 4);
        EXPECT_EQ(X.shift, 4);
        auto raw = static_cast<std::int64_t>(run(circ, 1).state.basis_value(X.reg));
        ASSERT_EQ(raw, x * 16 % 11);
        ASSERT_EQ(decode(X, raw), x);
        EXPECT_THROW(to_montgomery_qm(circ, GetParam(), X, 1), Error);
        to_standard_qm(circ, GetParam(), X);
        EXPECT_EQ(X.shift, 0);
        ASSERT_EQ(run(circ, 1).state.basis_value(X.reg), static_cast<std::uint64_t>(x));
    }
}

TEST_P(Backends, HalveUndoesDouble) {
    for (std::int64_t z = 0; z < 13; ++z) {
        Circuit circ;
        QReg Z = circ.alloc_register(4, "z");
        set_reg(circ, Z, static_cast<std::uint64_t>(z));
        mod_halve(circ, GetParam(), Z, 13);
        auto h = static_cast<std::int64_t>(run(circ, 1).state.basis_value(Z));
        ASSERT_EQ(2 * h % 13, z);
    }
}

TEST_P(Backends, ProductDecodesToProduct) {
    const Adder be = GetParam();
    for (std::int64_t p : {5, 7}) {
        for (std::int64_t x = 0; x < p; ++x) {
            for (std::int64_t y = 0; y < p; ++y) {
                for (int ct = 0; ct < 2; ++ct) {
                    Circuit circ;
                    ModReg X = alloc_modreg(circ, p, "x"), Y = alloc_modreg(circ, p, "y");
                    QubitId q = circ.alloc_qubit("ctl");
                    set_reg(circ, X.reg, static_cast<std::uint64_t>(x));
                    set_reg(circ, Y.reg, static_cast<std::uint64_t>(y));
                    if (ct) circ.x(q);
                    ModReg Z = montgomery_mul(circ, be, X, Y, ct ? Ctrl{q} : Ctrl{});
                    ASSERT_EQ(Z.shift, -static_cast<int>(X.size()));
                    auto raw = static_cast<std::int64_t>(run(circ, 1).state.basis_value(Z.reg));
                    ASSERT_EQ(decode(Z, raw), x * y % p) << p << ": " << x << "*" << y;
                }
            }
        }
    }
}

TEST_P(Backends, ControlOffLeavesProductZero) {
    Circuit circ;
    ModReg X = alloc_modreg(circ, 7, "x"), Y = alloc_modreg(circ, 7, "y");
    QubitId q = circ.alloc_qubit("ctl");
    set_reg(circ, X.reg, 3);
    set_reg(circ, Y.reg, 5);
    ModReg Z = montgomery_mul(circ, GetParam(), X, Y, q);
    EXPECT_EQ(run(circ, 1).state.basis_value(Z.reg), 0u);
}

TEST_P(Backends, AdditionAcrossShifts) {
    const Adder be = GetParam();
    for (std::int64_t a = 0; a < 7; ++a) {
        for (std::int64_t b = 0; b < 7; ++b) {
            Circuit circ;
            ModReg A{circ.alloc_register(3, "a"), 7, 2}, B{circ.alloc_register(3, "b"), 7, -1};
            set_reg(circ, A.reg, static_cast<std::uint64_t>(to_montgomery_classical(a, 2, 7)));
            set_reg(circ, B.reg, static_cast<std::uint64_t>(to_montgomery_classical(b, -1, 7)));
            montgomery_addition(circ, be, A, B);
            auto raw = static_cast<std::int64_t>(run(circ, 1).state.basis_value(B.reg));
            ASSERT_EQ(decode(B, raw), (a + b) % 7);
        }
    }
}

INSTANTIATE_TEST_SUITE_P(Adders, Backends, ::testing::Values(Adder::gidney, Adder::cuccaro),
                         [](const auto& info) { return std::string(to_string(info.param)); });

TEST(Errors, ModulusMismatch) {
    Circuit circ;
    ModReg X = alloc_modreg(circ, 7, "x"), Y = alloc_modreg(circ, 5, "y");
    try {
        montgomery_mul(circ, Adder::gidney, X, Y);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::ModulusMismatch);
    }
}
