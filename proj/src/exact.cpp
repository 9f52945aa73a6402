#include "psido/exact.hpp"

#include <stdexcept>

namespace psido {

GaussRat& GaussRat::operator/=(const GaussRat& o) {
    Rational den = o.re * o.re + o.im * o.im;
    if (sgn(den) == 0) throw std::domain_error("division by zero Gaussian rational");
    Rational r = (re * o.re + im * o.im) / den;
    Rational i = (im * o.re - re * o.im) / den;
    re = std::move(r);
    im = std::move(i);
    return *this;
}

GaussRat i_power(int n) {
    switch (((n % 4) + 4) % 4) {
        case 0: return GaussRat(1);
        case 1: return GaussRat::I();
        case 2: return GaussRat(-1);
        default: return -GaussRat::I();
    }
}

Rational binomial(const Rational& s, int k) {
    Rational out(1);
    for (int j = 0; j < k; ++j) out *= (s - j) / Rational(j + 1);
    return out;
}

Rational factorial(int k) {
    Rational out(1);
    for (int j = 2; j <= k; ++j) out *= j;
    return out;
}

std::string to_string(const GaussRat& z) {
    if (z.is_zero()) return "0";
    std::string out;
    if (sgn(z.re) != 0) out = z.re.get_str();
    if (sgn(z.im) != 0) {
        Rational mag = abs(z.im);
        if (sgn(z.im) < 0)
            out += "-";
        else if (!out.empty())
            out += "+";
        if (mag != 1) out += mag.get_str();
        out += "i";
    }
    return out;
}

}  // namespace psido
