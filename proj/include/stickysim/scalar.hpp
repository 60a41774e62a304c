#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <charconv>
#include <cstdint>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>

namespace stickysim {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

enum class Backend { Rational, Float };

inline const char* backend_name(Backend b) {
    return b == Backend::Rational ? "rational" : "float";
}

// Float-mode defaults: absolute position-coincidence tolerance and the
// tolerance under which two event times count as the same instant.
inline constexpr double kDefaultPositionTol = 1e-9;
inline constexpr double kEventTimeDedup = 1e-12;

/// A real number under one of two backends: exact arbitrary-precision
/// rational, or IEEE double. All values flowing through one scenario share a
/// backend; mixing backends in arithmetic is a logic error and throws.
class Scalar {
public:
    Scalar() : v_(Rational(0)) {}

    static Scalar rational(long long num, long long den = 1) {
        if (den == 0) throw std::domain_error("rational with zero denominator");
        return Scalar(Rational(BigInt(num), BigInt(den)));
    }
    static Scalar rational(Rational r) { return Scalar(std::move(r)); }
    static Scalar real(double x) { return Scalar(x); }
    static Scalar of(long long value, Backend b) {
        return b == Backend::Rational ? rational(value) : real(static_cast<double>(value));
    }
    static Scalar zero(Backend b) { return of(0, b); }
    static Scalar one(Backend b) { return of(1, b); }
    static Scalar parse(const std::string& text, Backend b);

    Backend backend() const {
        return std::holds_alternative<Rational>(v_) ? Backend::Rational : Backend::Float;
    }
    bool is_rational_backend() const { return backend() == Backend::Rational; }

    const Rational& rat() const {
        if (!is_rational_backend()) throw std::logic_error("scalar is not rational-backed");
        return std::get<Rational>(v_);
    }
    double dbl() const {
        if (is_rational_backend()) throw std::logic_error("scalar is not float-backed");
        return std::get<double>(v_);
    }
    /// Numeric value as double regardless of backend (rationals are rounded).
    double to_double() const {
        return is_rational_backend() ? rat().convert_to<double>() : dbl();
    }

    /// Same integer value, carried in this scalar's backend.
    Scalar same(long long value) const { return of(value, backend()); }

    bool is_zero() const {
        return is_rational_backend() ? rat().is_zero() : dbl() == 0.0;
    }
    int sign() const {
        if (is_rational_backend()) return rat().sign();
        double d = dbl();
        return d > 0 ? 1 : (d < 0 ? -1 : 0);
    }
    Scalar abs() const { return sign() < 0 ? -*this : *this; }

    Scalar operator-() const {
        return is_rational_backend() ? Scalar(Rational(-rat())) : Scalar(-dbl());
    }

    Scalar& operator+=(const Scalar& o) {
        check_same(*this, o);
        if (is_rational_backend()) std::get<Rational>(v_) += o.rat();
        else std::get<double>(v_) += o.dbl();
        return *this;
    }
    Scalar& operator-=(const Scalar& o) {
        check_same(*this, o);
        if (is_rational_backend()) std::get<Rational>(v_) -= o.rat();
        else std::get<double>(v_) -= o.dbl();
        return *this;
    }
    Scalar& operator*=(const Scalar& o) {
        check_same(*this, o);
        if (is_rational_backend()) std::get<Rational>(v_) *= o.rat();
        else std::get<double>(v_) *= o.dbl();
        return *this;
    }
    Scalar& operator/=(const Scalar& o) {
        check_same(*this, o);
        if (o.is_zero()) throw std::domain_error("scalar division by zero");
        if (is_rational_backend()) std::get<Rational>(v_) /= o.rat();
        else std::get<double>(v_) /= o.dbl();
        return *this;
    }

    Scalar& operator+=(long long o) { return *this += same(o); }
    Scalar& operator-=(long long o) { return *this -= same(o); }
    Scalar& operator*=(long long o) { return *this *= same(o); }
    Scalar& operator/=(long long o) { return *this /= same(o); }

    friend Scalar operator+(Scalar a, const Scalar& b) { return a += b; }
    friend Scalar operator-(Scalar a, const Scalar& b) { return a -= b; }
    friend Scalar operator*(Scalar a, const Scalar& b) { return a *= b; }
    friend Scalar operator/(Scalar a, const Scalar& b) { return a /= b; }

    friend Scalar operator+(long long a, const Scalar& b) { return b.same(a) + b; }
    friend Scalar operator-(long long a, const Scalar& b) { return b.same(a) - b; }
    friend Scalar operator*(long long a, const Scalar& b) { return b.same(a) * b; }
    friend Scalar operator/(long long a, const Scalar& b) { return b.same(a) / b; }
    friend Scalar operator+(const Scalar& a, long long b) { return a + a.same(b); }
    friend Scalar operator-(const Scalar& a, long long b) { return a - a.same(b); }
    friend Scalar operator*(const Scalar& a, long long b) { return a * a.same(b); }
    friend Scalar operator/(const Scalar& a, long long b) { return a / a.same(b); }

    friend bool operator==(const Scalar& a, const Scalar& b) {
        check_same(a, b);
        return a.is_rational_backend() ? a.rat() == b.rat() : a.dbl() == b.dbl();
    }
    friend bool operator!=(const Scalar& a, const Scalar& b) { return !(a == b); }
    friend bool operator<(const Scalar& a, const Scalar& b) {
        check_same(a, b);
        return a.is_rational_backend() ? a.rat() < b.rat() : a.dbl() < b.dbl();
    }
    friend bool operator>(const Scalar& a, const Scalar& b) { return b < a; }
    friend bool operator<=(const Scalar& a, const Scalar& b) { return !(b < a); }
    friend bool operator>=(const Scalar& a, const Scalar& b) { return !(a < b); }

    friend bool operator==(const Scalar& a, long long b) { return a == a.same(b); }
    friend bool operator!=(const Scalar& a, long long b) { return a != a.same(b); }
    friend bool operator<(const Scalar& a, long long b) { return a < a.same(b); }
    friend bool operator>(const Scalar& a, long long b) { return a > a.same(b); }
    friend bool operator<=(const Scalar& a, long long b) { return a <= a.same(b); }
    friend bool operator>=(const Scalar& a, long long b) { return a >= a.same(b); }

    /// Canonical text form: "p/q" (q > 0, gcd(p,q)=1) for rationals,
    /// shortest round-trip decimal for floats.
    std::string str() const;

private:
    explicit Scalar(Rational r) : v_(std::move(r)) {}
    explicit Scalar(double d) : v_(d) {}

    static void check_same(const Scalar& a, const Scalar& b) {
        if (a.backend() != b.backend())
            throw std::logic_error("scalar backend mismatch in arithmetic");
    }

    std::variant<Rational, double> v_;
};

inline std::string Scalar::str() const {
    if (is_rational_backend()) {
        const Rational& r = rat();
        return numerator(r).str() + "/" + denominator(r).str();
    }
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), dbl());
    if (ec != std::errc()) throw std::runtime_error("float formatting failed");
    return std::string(buf, ptr);
}

namespace detail {

inline Rational parse_decimal_rational(const std::string& text) {
    // [sign] digits [. digits] [e[sign]digits], converted exactly.
    std::size_t pos = 0;
    bool neg = false;
    if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) {
        neg = text[pos] == '-';
        ++pos;
    }
    std::string digits;
    long long frac_len = 0, exponent = 0;
    bool any = false;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
        digits += text[pos++];
        any = true;
    }
    if (pos < text.size() && text[pos] == '.') {
        ++pos;
        while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
            digits += text[pos++];
            ++frac_len;
            any = true;
        }
    }
    if (pos < text.size() && (text[pos] == 'e' || text[pos] == 'E')) {
        ++pos;
        bool eneg = false;
        if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) {
            eneg = text[pos] == '-';
            ++pos;
        }
        if (pos >= text.size()) throw std::invalid_argument("bad numeric literal: " + text);
        long long e = 0;
        while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos])))
            e = e * 10 + (text[pos++] - '0');
        exponent = eneg ? -e : e;
    }
    if (!any || pos != text.size())
        throw std::invalid_argument("bad numeric literal: " + text);
    // Strip leading zeros: cpp_int treats a leading 0 as an octal prefix.
    std::size_t first = digits.find_first_not_of('0');
    digits = first == std::string::npos ? "0" : digits.substr(first);
    BigInt mantissa(digits);
    if (neg) mantissa = -mantissa;
    long long p10 = exponent - frac_len;
    BigInt pow10 = 1;
    for (long long i = 0; i < (p10 < 0 ? -p10 : p10); ++i) pow10 *= 10;
    return p10 >= 0 ? Rational(mantissa * pow10) : Rational(mantissa, pow10);
}

} // namespace detail

inline Scalar Scalar::parse(const std::string& text, Backend b) {
    if (text.empty()) throw std::invalid_argument("empty numeric literal");
    if (b == Backend::Float) {
        char* end = nullptr;
        double d = std::strtod(text.c_str(), &end);
        if (end != text.c_str() + text.size()) {
            // Allow "p/q" in float mode too, evaluated as a quotient.
            auto slash = text.find('/');
            if (slash == std::string::npos)
                throw std::invalid_argument("bad numeric literal: " + text);
            Rational r(BigInt(text.substr(0, slash)), BigInt(text.substr(slash + 1)));
            return Scalar::real(r.convert_to<double>());
        }
        return Scalar::real(d);
    }
    auto slash = text.find('/');
    if (slash != std::string::npos) {
        BigInt num(text.substr(0, slash));
        BigInt den(text.substr(slash + 1));
        if (den == 0) throw std::domain_error("rational with zero denominator");
        return Scalar::rational(Rational(num, den));
    }
    return Scalar::rational(detail::parse_decimal_rational(text));
}

/// base^exp with integer exponent (negative exponents via reciprocal).
inline Scalar pow_int(const Scalar& base, long long exp) {
    if (exp < 0) return base.same(1) / pow_int(base, -exp);
    Scalar result = base.same(1);
    Scalar acc = base;
    for (long long e = exp; e > 0; e >>= 1) {
        if (e & 1) result *= acc;
        if (e > 1) acc *= acc;
    }
    return result;
}

inline const Scalar& min(const Scalar& a, const Scalar& b) { return b < a ? b : a; }
inline const Scalar& max(const Scalar& a, const Scalar& b) { return a < b ? b : a; }

} // namespace stickysim
