#include <gtest/gtest.h>

#include <set>

#include "ecdlp/classical_ec.hpp"
#include "ecdlp/kaliski.hpp"
#include "test_util.hpp"

using namespace ecdlp;

namespace {

const Curve kCurve{7, 5, 4};
const Point kG(3, 2);

std::int64_t div_by_search(std::int64_t num, std::int64_t den, std::int64_t p) {
    for (std::int64_t q = 0; q < p; ++q) {
        if (mod(q * den - num, p) == 0) return q;
    }
    return -1;
}

// Chord-and-tangent by root finding: the line through P and Q meets the curve in a
// third point R', found among the roots of x^3 + ax + b - line(x)^2; P + Q = -R'.
Point oracle_add(const Curve& c, const Point& P, const Point& Q) {
    const std::int64_t p = c.p;
    if (P.is_infinity()) return Q;
    if (Q.is_infinity()) return P;
    if (P.x() == Q.x() && mod(P.y() + Q.y(), p) == 0) return Point::infinity();
    const bool tangent = P == Q;
    const std::int64_t lam = tangent ? div_by_search(3 * P.x() * P.x() + c.a, 2 * P.y(), p)
                                     : div_by_search(Q.y() - P.y(), Q.x() - P.x(), p);
    auto line = [&](std::int64_t x) { return mod(lam * (x - P.x()) + P.y(), p); };
    auto f = [&](std::int64_t x) { return mod(x * x * x + c.a * x + c.b - line(x) * line(x), p); };
    auto df = [&](std::int64_t x) { return mod(3 * x * x + c.a - 2 * lam * line(x), p); };
    std::int64_t third = -1;
    for (std::int64_t x = 0; x < p; ++x) {
        if (f(x) != 0) continue;
        if (x != P.x() && x != Q.x()) third = x;
    }
    if (third < 0) {
        // Repeated root: the tangent point absorbs the third intersection.
        if (tangent) {
            third = P.x();
        } else {
            third = df(P.x()) == 0 ? P.x() : Q.x();
        }
    }
    return Point(third, mod(-line(third), p));
}

}  // namespace

TEST(Curve, Construction) {
    EXPECT_EQ(curve_new(7, 5, 4), kCurve);
    EXPECT_EQ(curve_new(7, 12, -3), kCurve);
    try {
        curve_new(9, 1, 1);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::NotPrime);
    }
    try {
        curve_new(7, 0, 0);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::Singular);
    }
}

TEST(Curve, OnCurve) {
    EXPECT_TRUE(is_on_curve(kCurve, kG));
    EXPECT_TRUE(is_on_curve(kCurve, Point::infinity()));
    EXPECT_FALSE(is_on_curve(kCurve, Point(1, 1)));
    EXPECT_FALSE(is_on_curve(kCurve, Point(10, 2)));
}

// Independent count: y^2 = rhs has 1 + legendre(rhs) solutions.
TEST(Curve, PointCountMatchesLegendreSum) {
    for (std::int64_t p : {5, 7, 11, 13}) {
        Curve c = curve_new(p, 1, 1);
        std::int64_t count = 1;
        for (std::int64_t x = 0; x < p; ++x) {
            std::int64_t rhs = mod(x * x * x + x + 1, p);
            if (rhs == 0) {
                count += 1;
            } else if (pow_mod(rhs, (p - 1) / 2, p) == 1) {
                count += 2;
            }
        }
        EXPECT_EQ(static_cast<std::int64_t>(curve_points(c).size()), count) << "p=" << p;
    }
}

TEST(GroupLaw, AgreesWithRootFindingOracle) {
    for (std::int64_t p : {7, 11, 13}) {
        Curve c = curve_new(p, 5, 4);
        auto pts = curve_points(c);
        for (const auto& P : pts) {
            for (const auto& Q : pts) {
                Point want = oracle_add(c, P, Q);
                ASSERT_TRUE(is_on_curve(c, want));
                EXPECT_EQ(ec_add(c, P, Q), want) << P << " + " << Q << " mod " << p;
            }
        }
    }
}

TEST(GroupLaw, MultiplesOfGenerator) {
    Point acc = Point::infinity();
    std::set<std::pair<std::int64_t, std::int64_t>> seen;
    for (std::int64_t k = 0; k < 10; ++k) {
        EXPECT_EQ(ec_scalar_mul(kCurve, k, kG), acc) << k;
        if (!acc.is_infinity()) {
            EXPECT_TRUE(seen.insert({acc.x(), acc.y()}).second);
        }
        acc = oracle_add(kCurve, acc, kG);
    }
    EXPECT_TRUE(acc.is_infinity());
    EXPECT_EQ(point_order(kCurve, kG), 10);
}

TEST(GroupLaw, ChordSlopeByHand) {
    // (3,2) + (2,6): lambda = 4 / -1 = 3, x = 9 - 5 = 4, y = -(2 + 3 * (4 - 3)) = 2.
    EXPECT_EQ(ec_add(kCurve, Point(3, 2), Point(2, 6)), Point(4, 2));
}

TEST(GroupLaw, Axioms) {
    auto pts = curve_points(kCurve);
    for (const auto& P : pts) {
        EXPECT_EQ(ec_add(kCurve, P, Point::infinity()), P);
        EXPECT_TRUE(ec_add(kCurve, P, ec_neg(kCurve, P)).is_infinity());
        for (const auto& Q : pts) {
            Point PQ = ec_add(kCurve, P, Q);
            EXPECT_TRUE(is_on_curve(kCurve, PQ));
            EXPECT_EQ(PQ, ec_add(kCurve, Q, P));
            for (const auto& R : pts) {
                ASSERT_EQ(ec_add(kCurve, PQ, R), ec_add(kCurve, P, ec_add(kCurve, Q, R)));
            }
        }
    }
}

TEST(GroupLaw, OrdersDivideGroupOrder) {
    auto pts = curve_points(kCurve);
    const auto n = static_cast<std::int64_t>(pts.size());
    for (const auto& P : pts) {
        std::int64_t r = point_order(kCurve, P);
        EXPECT_EQ(n % r, 0);
        EXPECT_TRUE(ec_scalar_mul(kCurve, r, P).is_infinity());
    }
}

TEST(GroupLaw, Doubling) {
    for (const auto& P : curve_points(kCurve)) {
        if (P.is_infinity() || P.y() == 0) continue;
        EXPECT_EQ(ec_double(kCurve, P), ec_add(kCurve, P, P));
    }
    try {
        ec_double(kCurve, Point(5, 0));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::DegenerateDoubling);
    }
}

TEST(GroupLaw, ScalarMulNegativeAndReduction) {
    EXPECT_EQ(ec_scalar_mul(kCurve, -1, kG), ec_neg(kCurve, kG));
    EXPECT_EQ(ec_scalar_mul(kCurve, 13, kG), ec_scalar_mul(kCurve, 3, kG));
}

TEST(DiscreteLog, BruteForce) {
    EXPECT_EQ(discrete_log_bruteforce(kCurve, kG, Point(0, 2)), 6);
    EXPECT_EQ(discrete_log_bruteforce(kCurve, kG, kG), 1);
    for (std::int64_t l = 1; l <= 10; ++l) {
        EXPECT_EQ(discrete_log_bruteforce(kCurve, kG, ec_scalar_mul(kCurve, l, kG)), l);
    }
    // (5,0) has order 2 and generates a subgroup that misses (3,2).
    try {
        discrete_log_bruteforce(kCurve, Point(5, 0), kG);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::NotInSubgroup);
    }
}

TEST(Exceptional, Classification) {
    EXPECT_TRUE(is_exceptional_addition(kCurve, kG, kG));
    EXPECT_TRUE(is_exceptional_addition(kCurve, Point(3, 5), kG));
    EXPECT_TRUE(is_exceptional_addition(kCurve, Point::infinity(), kG));
    EXPECT_FALSE(is_exceptional_addition(kCurve, Point(2, 6), kG));
    // (2,1) + (3,2) = (3,5) lands on -G.
    EXPECT_EQ(ec_add(kCurve, Point(2, 1), kG), Point(3, 5));
    EXPECT_TRUE(is_exceptional_addition(kCurve, Point(2, 1), kG));
}

TEST(ParsePoint, Formats) {
    EXPECT_EQ(parse_point("3,2"), Point(3, 2));
    EXPECT_EQ(parse_point("(3, 2)"), Point(3, 2));
    EXPECT_TRUE(parse_point("inf").is_infinity());
    for (const char* bad : {"", "3", "3,", "a,b", "3,2,1"}) {
        EXPECT_THROW(parse_point(bad), Error) << bad;
    }
}

TEST(ModMath, InverseAgreesWithSearch) {
    for (std::int64_t p : {5, 7, 11, 13, 101}) {
        for (std::int64_t v = 1; v < p; ++v) EXPECT_EQ(inverse_mod(v, p), testutil::inverse_by_search(v, p));
    }
    EXPECT_FALSE(try_inverse_mod(4, 10).has_value());
}

TEST(KaliskiClassical, MatchesExtendedEuclid) {
    for (std::int64_t p : {5, 7, 11, 13}) {
        for (std::int64_t v = 1; v < p; ++v) EXPECT_EQ(kaliski_classical(v, p), inverse_mod(v, p)) << p << " " << v;
    }
    EXPECT_THROW(kaliski_classical(0, 7), Error);
}

TEST(KaliskiClassical, TraceTerminates) {
    // After the loop u = 1 and v = 0, with f cleared exactly once.
    for (std::int64_t p : {5, 7, 11, 13}) {
        for (std::int64_t v = 1; v < p; ++v) {
            auto tr = kaliski_trace(v, p);
            ASSERT_EQ(static_cast<int>(tr.size()), kaliski_rounds(p) + 1);
            EXPECT_EQ(tr.back().u, 1);
            EXPECT_EQ(tr.back().v, 0);
            EXPECT_FALSE(tr.back().f);
            int stops = 0;
            for (std::size_t i = 1; i < tr.size(); ++i) stops += tr[i - 1].f && !tr[i].f;
            EXPECT_EQ(stops, 1);
        }
    }
}
