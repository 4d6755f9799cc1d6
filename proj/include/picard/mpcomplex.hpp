// Minimal complex arithmetic over MPFR reals.
#pragma once

#include <boost/multiprecision/mpfr.hpp>

namespace picard {

using Real = boost::multiprecision::mpfr_float;

struct Complex {
    Real re, im;

    Complex() : re(0), im(0) {}
    Complex(Real r) : re(std::move(r)), im(0) {}
    Complex(Real r, Real i) : re(std::move(r)), im(std::move(i)) {}
    Complex(int r) : re(r), im(0) {}

    Complex& operator+=(const Complex& o) { re += o.re; im += o.im; return *this; }
    Complex& operator-=(const Complex& o) { re -= o.re; im -= o.im; return *this; }
    Complex& operator*=(const Complex& o) {
        Real r = re * o.re - im * o.im;
        im = re * o.im + im * o.re;
        re = std::move(r);
        return *this;
    }
    Complex& operator*=(const Real& s) { re *= s; im *= s; return *this; }
    Complex& operator/=(const Complex& o) {
        Real d = o.re * o.re + o.im * o.im;
        Real r = (re * o.re + im * o.im) / d;
        im = (im * o.re - re * o.im) / d;
        re = std::move(r);
        return *this;
    }
    Complex operator-() const { return {-re, -im}; }
    Complex conj() const { return {re, -im}; }
    Real norm2() const { return re * re + im * im; }
    Real abs() const { return sqrt(norm2()); }

    friend Complex operator+(Complex x, const Complex& y) { return x += y; }
    friend Complex operator-(Complex x, const Complex& y) { return x -= y; }
    friend Complex operator*(Complex x, const Complex& y) { return x *= y; }
    friend Complex operator*(Complex x, const Real& s) { return x *= s; }
    friend Complex operator*(const Real& s, Complex x) { return x *= s; }
    friend Complex operator/(Complex x, const Complex& y) { return x /= y; }
};

inline Complex cexp(const Complex& z) {
    Real m = exp(z.re);
    return {m * cos(z.im), m * sin(z.im)};
}

inline Complex csqrt(const Complex& z) {
    Real r = z.abs();
    Real a = sqrt((r + z.re) / 2);
    Real b = sqrt((r - z.re) / 2);
    if (z.im < 0) b = -b;
    return {a, b};
}

// principal cube root via polar form
inline Complex ccbrt(const Complex& z) {
    Real r = cbrt(z.abs());
    Real t = atan2(z.im, z.re) / 3;
    return {r * cos(t), r * sin(t)};
}

}  // namespace picard
