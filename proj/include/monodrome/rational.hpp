#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace monodrome {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

inline double to_double(const Rational& q) { return q.convert_to<double>(); }

// Exact embedding: every finite IEEE double is a dyadic rational.
inline Rational rational_from_double(double x) {
    if (!std::isfinite(x)) throw std::invalid_argument("non-finite number cannot be made exact");
    return Rational(x);
}

// Accepts "p/q", "p", or a decimal literal such as "0.25".
Rational rational_from_string(const std::string& s);

inline BigInt floor_div(const BigInt& a, const BigInt& b) {
    BigInt q = a / b, r = a % b;
    if (r != 0 && ((r < 0) != (b < 0))) --q;
    return q;
}

inline BigInt rational_floor(const Rational& q) {
    return floor_div(numerator(q), denominator(q));
}

// Nearest integer, ties away from zero.
inline BigInt rational_round(const Rational& q) {
    return rational_floor(q + Rational(1, 2));
}

inline Rational frac_part(const Rational& q) {  // in [0,1)
    return q - Rational(rational_floor(q));
}

/// Gaussian rational: exact complex number with rational real/imaginary parts.
struct RatComplex {
    Rational re, im;

    RatComplex() = default;
    RatComplex(Rational r, Rational i) : re(std::move(r)), im(std::move(i)) {}
    explicit RatComplex(const Rational& r) : re(r), im(0) {}

    static RatComplex from_double(double r, double i) {
        return {rational_from_double(r), rational_from_double(i)};
    }
    static RatComplex from_std(std::complex<double> z) { return from_double(z.real(), z.imag()); }

    bool is_zero() const { return re == 0 && im == 0; }
    RatComplex conj() const { return {re, -im}; }
    Rational norm2() const { return re * re + im * im; }
    std::complex<double> to_std() const { return {to_double(re), to_double(im)}; }

    RatComplex operator-() const { return {-re, -im}; }
    RatComplex& operator+=(const RatComplex& o) { re += o.re; im += o.im; return *this; }
    RatComplex& operator-=(const RatComplex& o) { re -= o.re; im -= o.im; return *this; }

    friend RatComplex operator+(RatComplex a, const RatComplex& b) { return a += b; }
    friend RatComplex operator-(RatComplex a, const RatComplex& b) { return a -= b; }
    friend RatComplex operator*(const RatComplex& a, const RatComplex& b) {
        return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
    }
    friend RatComplex operator*(const Rational& s, const RatComplex& a) { return {s * a.re, s * a.im}; }
    friend RatComplex operator/(const RatComplex& a, const RatComplex& b) {
        Rational n = b.norm2();
        if (n == 0) throw std::domain_error("division by zero complex rational");
        RatComplex num = a * b.conj();
        return {num.re / n, num.im / n};
    }
    friend bool operator==(const RatComplex& a, const RatComplex& b) {
        return a.re == b.re && a.im == b.im;
    }
    friend bool operator!=(const RatComplex& a, const RatComplex& b) { return !(a == b); }
};

inline Rational re_of_product(const RatComplex& a, const RatComplex& b) {
    // Re(a*b), avoiding the imaginary-part work.
    return a.re * b.re - a.im * b.im;
}

std::string rational_to_string(const Rational& q);

}  // namespace monodrome
