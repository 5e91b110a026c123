#include <gtest/gtest.h>

#include "ecdlp/bench.hpp"
#include "ecdlp/resources.hpp"

using namespace ecdlp;

namespace {

ResourceReport one_gate(void (*emit)(Circuit&, const QReg&), ReportOptions opt = {}) {
    Circuit c;
    QReg r = c.alloc_register(3, "r");
    emit(c, r);
    return measure_resources(c, opt);
}

}  // namespace

TEST(Counts, SingleToffoli) {
    auto rep = one_gate([](Circuit& c, const QReg& r) { c.ccx(r[0], r[1], r[2]); });
    EXPECT_EQ(rep.t_count, 7u);
    EXPECT_EQ(rep.cx_count, HalfCount::from_halves(12));
    EXPECT_EQ(rep.qubit_count, 3u);
    EXPECT_EQ(rep.t_depth, 4u);  // textbook network, layered by hand
}

TEST(Counts, LogicalAnd) {
    auto rep = one_gate([](Circuit& c, const QReg& r) { c.and_gate(r[0], r[1], r[2]); });
    EXPECT_EQ(rep.t_count, 4u);
    EXPECT_EQ(rep.cx_count.value(), 6.0);
    ReportOptions full;
    full.logical_and = false;
    EXPECT_EQ(one_gate([](Circuit& c, const QReg& r) { c.and_gate(r[0], r[1], r[2]); }, full).t_count, 7u);
}

TEST(Counts, RotationsAndCliffordPhases) {
    auto rep = one_gate([](Circuit& c, const QReg& r) {
        c.phase(r[0], std::numbers::pi / 3);
        c.phase(r[1], std::numbers::pi / 4);
        c.phase(r[2], std::numbers::pi / 2);
        c.cphase(r[0], r[1], std::numbers::pi);
    });
    EXPECT_EQ(rep.rotation_count, 1u);
    EXPECT_EQ(rep.t_count, 1u);
    EXPECT_EQ(rep.cx_count.value(), 0.0);
}

TEST(Counts, ConditionedCzIsHalfCx) {
    Circuit c;
    QReg r = c.alloc_register(3, "r");
    auto b = c.measure(r[2]);
    c.conditioned(Circuit::make(GateKind::CZ, {r[0], r[1]}), b);
    c.cz(r[0], r[1]);
    auto rep = measure_resources(c);
    EXPECT_EQ(rep.cx_count.to_string(), "0.5");
    EXPECT_FALSE(rep.cx_count.is_integer());
    EXPECT_EQ(rep.measurement_count, 1u);
}

TEST(Counts, SwapPolicy) {
    Circuit c;
    QReg r = c.alloc_register(2, "r");
    c.swap(r[0], r[1]);
    EXPECT_EQ(measure_resources(c).cx_count.value(), 3.0);
    ReportOptions free;
    free.swap_free = true;
    EXPECT_EQ(measure_resources(c, free).cx_count.value(), 0.0);
}

TEST(Counts, TDepthLayers) {
    Circuit c;
    QReg r = c.alloc_register(3, "r");
    c.t(r[0]);
    c.t(r[1]);  // parallel with the first
    c.cx(r[0], r[1]);
    c.t(r[1]);
    c.t(r[2]);  // still layer one
    auto rep = measure_resources(c);
    EXPECT_EQ(rep.t_count, 4u);
    EXPECT_EQ(rep.t_depth, 2u);
    EXPECT_EQ(rep.depth, 3u);
}

TEST(Counts, PeakQubitsFollowAllocations) {
    Circuit c;
    QReg a = c.alloc_register(2, "a");
    QubitId t = c.alloc_qubit("t");
    c.dealloc(t);
    QubitId u = c.alloc_qubit("u");
    c.cx(a[0], u);
    c.cx(a[0], u);
    c.dealloc(u);
    EXPECT_EQ(measure_resources(c).qubit_count, 3u);
}

TEST(Report, RejectsUndecomposedGates) {
    Circuit c;
    QReg r = c.alloc_register(3, "r");
    c.ccx(r[0], r[1], r[2]);
    try {
        resource_report(c);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::UnsupportedGate);
    }
}

TEST(Decompose, OutputIsCliffordT) {
    Circuit c;
    QReg r = c.alloc_register(5, "r");
    c.ccx(r[0], r[1], r[2]);
    c.cswap(r[0], r[1], r[2]);
    c.mcx({r[0], r[1], r[2]}, r[3], {true, true, false});
    c.and_gate(r[0], r[1], r[4]);
    for (const auto& g : decompose_to_clifford_t(c).gates()) {
        EXPECT_TRUE(g.kind != GateKind::CCX && g.kind != GateKind::AND && g.kind != GateKind::CSWAP &&
                    g.kind != GateKind::MCX && g.kind != GateKind::SWAP)
            << gate_name(g.kind);
    }
}

TEST(HalfCount, Arithmetic) {
    HalfCount h;
    h += HalfCount::from_halves(3);
    h += HalfCount::from_halves(4);
    EXPECT_EQ(h.to_string(), "3.5");
    EXPECT_DOUBLE_EQ(h.value(), 3.5);
}

TEST(Bench, RoutineNamesRoundTrip) {
    for (auto r : kAllRoutines) EXPECT_EQ(parse_routine(to_string(r)), r);
    EXPECT_FALSE(parse_routine("nope").has_value());
}

TEST(Bench, ShorTCountIsTwiceControlledAdd) {
    BenchSetup s{curve_new(7, 5, 4), Point(3, 2), Point(0, 2), Point(2, 6)};
    auto ctrl = bench_routine(Routine::ctrl_ecadd, s);
    auto shor = bench_routine(Routine::shor, s);
    EXPECT_EQ(shor.t_count, 2 * ctrl.t_count);
}
