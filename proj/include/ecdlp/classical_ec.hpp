#pragma once

// Short Weierstrass curves y^2 = x^3 + ax + b over F_p, used as the ground truth
// for every quantum circuit in the library.

#include <cstdint>
#include <optional>
#include <ostream>
#include <charconv>
#include <string>
#include <string_view>
#include <vector>

#include "ecdlp/error.hpp"
#include "ecdlp/modmath.hpp"

namespace ecdlp {

struct Curve {
    std::int64_t p = 0;
    std::int64_t a = 0;
    std::int64_t b = 0;

    friend bool operator==(const Curve&, const Curve&) = default;
};

/// Affine point or the neutral element. Default-constructed value is the point at infinity.
class Point {
public:
    constexpr Point() = default;
    constexpr Point(std::int64_t x, std::int64_t y) : x_(x), y_(y), infinity_(false) {}

    static constexpr Point infinity() { return Point(); }

    constexpr bool is_infinity() const { return infinity_; }
    constexpr std::int64_t x() const { return x_; }
    constexpr std::int64_t y() const { return y_; }

    friend constexpr bool operator==(const Point& l, const Point& r) {
        if (l.infinity_ || r.infinity_) return l.infinity_ == r.infinity_;
        return l.x_ == r.x_ && l.y_ == r.y_;
    }

    std::string to_string() const {
        if (infinity_) return "inf";
        return "(" + std::to_string(x_) + "," + std::to_string(y_) + ")";
    }

    friend std::ostream& operator<<(std::ostream& os, const Point& pt) { return os << pt.to_string(); }

private:
    std::int64_t x_ = 0;
    std::int64_t y_ = 0;
    bool infinity_ = true;
};

inline Curve curve_new(std::int64_t p, std::int64_t a, std::int64_t b) {
    if (p <= 3 || !is_prime(p)) {
        throw Error(ErrorKind::NotPrime, "curve modulus " + std::to_string(p) + " is not a prime > 3");
    }
    Curve c{p, mod(a, p), mod(b, p)};
    std::int64_t disc = mod(4 * c.a * c.a % p * c.a + 27 * c.b * c.b, p);
    if (disc == 0) {
        throw Error(ErrorKind::Singular, "4a^3 + 27b^2 = 0 mod " + std::to_string(p));
    }
    return c;
}

inline bool is_on_curve(const Curve& c, const Point& pt) {
    if (pt.is_infinity()) return true;
    const std::int64_t p = c.p;
    if (pt.x() < 0 || pt.x() >= p || pt.y() < 0 || pt.y() >= p) return false;
    std::int64_t x = pt.x();
    std::int64_t rhs = mod((x * x % p) * x + c.a * x + c.b, p);
    return mod(pt.y() * pt.y(), p) == rhs;
}

inline Point ec_neg(const Curve& c, const Point& pt) {
    if (pt.is_infinity()) return pt;
    return Point(pt.x(), mod(c.p - pt.y(), c.p));
}

inline Point ec_add(const Curve& c, const Point& P, const Point& Q) {
    if (P.is_infinity()) return Q;
    if (Q.is_infinity()) return P;
    const std::int64_t p = c.p;
    std::int64_t lambda;
    if (P.x() == Q.x()) {
        if (mod(P.y() + Q.y(), p) == 0) return Point::infinity();  // vertical line, includes y = 0 doubling
        std::int64_t num = mod(3 * P.x() % p * P.x() + c.a, p);
        lambda = num * inverse_mod(2 * P.y(), p) % p;
    } else {
        lambda = mod(Q.y() - P.y(), p) * inverse_mod(mod(Q.x() - P.x(), p), p) % p;
    }
    // Third intersection R' of the line with the curve, then reflect.
    std::int64_t xr = mod(lambda * lambda - P.x() - Q.x(), p);
    std::int64_t yr_prime = mod(P.y() + lambda * mod(xr - P.x(), p), p);
    return Point(xr, mod(-yr_prime, p));
}

inline Point ec_double(const Curve& c, const Point& P) {
    if (P.is_infinity() || P.y() == 0) {
        throw Error(ErrorKind::DegenerateDoubling, "cannot double " + P.to_string() + " in affine form");
    }
    const std::int64_t p = c.p;
    std::int64_t s = mod(3 * P.x() % p * P.x() + c.a, p) * inverse_mod(2 * P.y(), p) % p;
    std::int64_t xr = mod(s * s - 2 * P.x(), p);
    std::int64_t yr = mod(P.y() - s * mod(P.x() - xr, p), p);
    return Point(xr, mod(-yr, p));
}

inline std::int64_t point_order(const Curve& c, const Point& P) {
    std::int64_t r = 1;
    Point acc = P;
    while (!acc.is_infinity()) {
        acc = ec_add(c, acc, P);
        ++r;
    }
    return r;
}

/// kP by repeated addition. Negative k uses (-k)(-P); k is reduced modulo ord(P).
inline Point ec_scalar_mul(const Curve& c, std::int64_t k, const Point& P) {
    Point base = P;
    if (k < 0) {
        base = ec_neg(c, P);
        k = -k;
    }
    if (base.is_infinity()) return base;
    k %= point_order(c, base);
    Point acc = Point::infinity();
    for (std::int64_t i = 0; i < k; ++i) acc = ec_add(c, acc, base);
    return acc;
}

inline std::int64_t discrete_log_bruteforce(const Curve& c, const Point& G, const Point& P) {
    const std::int64_t r = point_order(c, G);
    Point acc = Point::infinity();
    for (std::int64_t l = 1; l <= r; ++l) {
        acc = ec_add(c, acc, G);
        if (acc == P) return l;
    }
    throw Error(ErrorKind::NotInSubgroup, P.to_string() + " is not in <" + G.to_string() + ">");
}

/// All points of E(F_p), neutral element first.
inline std::vector<Point> curve_points(const Curve& c) {
    std::vector<Point> pts{Point::infinity()};
    for (std::int64_t x = 0; x < c.p; ++x) {
        for (std::int64_t y = 0; y < c.p; ++y) {
            Point pt(x, y);
            if (is_on_curve(c, pt)) pts.push_back(pt);
        }
    }
    return pts;
}

/// True when adding the classical point `A` to `Q` leaves the generic-case chord formula:
/// either operand neutral, Q = +-A, or the sum lands on +-A (which breaks the second
/// inversion inside the in-place adder).
inline bool is_exceptional_addition(const Curve& c, const Point& Q, const Point& A) {
    if (Q.is_infinity() || A.is_infinity()) return true;
    if (Q.x() == A.x()) return true;
    Point R = ec_add(c, Q, A);
    return R.is_infinity() || R.x() == A.x();
}

/// Parses "x,y" or "inf" (surrounding parentheses and spaces allowed).
inline Point parse_point(std::string_view text) {
    std::string t;
    for (char ch : text) {
        if (ch != ' ' && ch != '(' && ch != ')') t += ch;
    }
    if (t == "inf") return Point::infinity();
    auto comma = t.find(',');
    std::int64_t x = 0, y = 0;
    auto num = [](std::string_view s, std::int64_t& out) {
        auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
        return ec == std::errc{} && ptr == s.data() + s.size() && !s.empty();
    };
    if (comma == std::string::npos || !num(std::string_view(t).substr(0, comma), x) ||
        !num(std::string_view(t).substr(comma + 1), y)) {
        throw Error(ErrorKind::ParseError, "expected \"x,y\" or \"inf\", got \"" + std::string(text) + "\"");
    }
    return Point(x, y);
}

}  // namespace ecdlp
