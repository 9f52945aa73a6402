#pragma once

#include <complex>
#include <string>

#include <gmpxx.h>

namespace psido {

using Rational = mpq_class;
using Integer = mpz_class;

// Gaussian rational re + i*im. The coefficient field of all symbol algebra.
struct GaussRat {
    Rational re;
    Rational im;

    GaussRat() = default;
    GaussRat(long v) : re(v), im(0) {}
    GaussRat(Rational r) : re(std::move(r)), im(0) {}
    GaussRat(Rational r, Rational i) : re(std::move(r)), im(std::move(i)) {}

    static GaussRat I() { return GaussRat(Rational(0), Rational(1)); }

    bool is_zero() const { return sgn(re) == 0 && sgn(im) == 0; }
    GaussRat conj() const { return GaussRat(re, -im); }
    std::complex<double> to_complex() const { return {re.get_d(), im.get_d()}; }
    // |re| + |im|, an upper bound for the modulus that stays exact.
    Rational l1() const { return abs(re) + abs(im); }

    GaussRat& operator+=(const GaussRat& o) {
        re += o.re;
        im += o.im;
        return *this;
    }
    GaussRat& operator-=(const GaussRat& o) {
        re -= o.re;
        im -= o.im;
        return *this;
    }
    GaussRat& operator*=(const GaussRat& o) {
        Rational r = re * o.re - im * o.im;
        Rational i = re * o.im + im * o.re;
        re = std::move(r);
        im = std::move(i);
        return *this;
    }
    GaussRat& operator/=(const GaussRat& o);
};

inline GaussRat operator+(GaussRat a, const GaussRat& b) { return a += b; }
inline GaussRat operator-(GaussRat a, const GaussRat& b) { return a -= b; }
inline GaussRat operator*(GaussRat a, const GaussRat& b) { return a *= b; }
inline GaussRat operator/(GaussRat a, const GaussRat& b) { return a /= b; }
inline GaussRat operator-(const GaussRat& a) { return GaussRat(-a.re, -a.im); }
inline bool operator==(const GaussRat& a, const GaussRat& b) { return a.re == b.re && a.im == b.im; }
inline bool operator!=(const GaussRat& a, const GaussRat& b) { return !(a == b); }

// n/d in canonical form.
inline Rational frac(long n, long d) {
    Rational q(n, d);
    q.canonicalize();
    return q;
}

// i^n for any integer n.
GaussRat i_power(int n);

// Generalized binomial coefficient C(s, k) for rational s and k >= 0.
Rational binomial(const Rational& s, int k);

Rational factorial(int k);

// "1", "-i", "1/2+3i", "2i"
std::string to_string(const GaussRat& z);

}  // namespace psido
