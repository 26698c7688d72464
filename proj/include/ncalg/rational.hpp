#pragma once

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>

namespace ncalg {

// Exact rational with 64-bit numerator/denominator; overflow throws.
class Rational {
public:
    Rational() = default;
    Rational(std::int64_t n) : num_(n), den_(1) {}
    Rational(std::int64_t n, std::int64_t d) { assign(n, d); }

    std::int64_t num() const { return num_; }
    std::int64_t den() const { return den_; }
    bool is_zero() const { return num_ == 0; }
    double to_double() const { return double(num_) / double(den_); }

    Rational operator-() const { return Rational(-num_, den_); }
    Rational& operator+=(const Rational& o) { return *this = *this + o; }
    Rational& operator-=(const Rational& o) { return *this = *this - o; }
    Rational& operator*=(const Rational& o) { return *this = *this * o; }

    friend Rational operator+(const Rational& a, const Rational& b) {
        __int128 n = (__int128)a.num_ * b.den_ + (__int128)b.num_ * a.den_;
        __int128 d = (__int128)a.den_ * b.den_;
        return from_wide(n, d);
    }
    friend Rational operator-(const Rational& a, const Rational& b) { return a + (-b); }
    friend Rational operator*(const Rational& a, const Rational& b) {
        return from_wide((__int128)a.num_ * b.num_, (__int128)a.den_ * b.den_);
    }
    friend Rational operator/(const Rational& a, const Rational& b) {
        if (b.num_ == 0) throw std::domain_error("rational division by zero");
        return from_wide((__int128)a.num_ * b.den_, (__int128)a.den_ * b.num_);
    }
    friend bool operator==(const Rational& a, const Rational& b) { return a.num_ == b.num_ && a.den_ == b.den_; }
    friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }
    friend bool operator<(const Rational& a, const Rational& b) {
        return (__int128)a.num_ * b.den_ < (__int128)b.num_ * a.den_;
    }

    std::string str() const {
        return den_ == 1 ? std::to_string(num_) : std::to_string(num_) + "/" + std::to_string(den_);
    }

private:
    std::int64_t num_ = 0;
    std::int64_t den_ = 1;

    void assign(std::int64_t n, std::int64_t d) { *this = from_wide(n, d); }

    static __int128 gcd128(__int128 a, __int128 b) {
        if (a < 0) a = -a;
        if (b < 0) b = -b;
        while (b != 0) { __int128 t = a % b; a = b; b = t; }
        return a;
    }
    static Rational from_wide(__int128 n, __int128 d) {
        if (d == 0) throw std::domain_error("rational with zero denominator");
        if (d < 0) { n = -n; d = -d; }
        __int128 g = gcd128(n, d);
        if (g > 1) { n /= g; d /= g; }
        if (n == 0) d = 1;
        const __int128 lim = INT64_MAX;
        if (n > lim || n < -lim || d > lim) throw std::overflow_error("rational overflow");
        Rational r;
        r.num_ = (std::int64_t)n;
        r.den_ = (std::int64_t)d;
        return r;
    }
};

// Gaussian rational re + i·im.
struct Gauss {
    Rational re, im;

    Gauss() = default;
    Gauss(Rational r) : re(r) {}
    Gauss(Rational r, Rational i) : re(r), im(i) {}

    bool is_zero() const { return re.is_zero() && im.is_zero(); }
    Gauss operator-() const { return {-re, -im}; }
    friend Gauss operator+(const Gauss& a, const Gauss& b) { return {a.re + b.re, a.im + b.im}; }
    friend Gauss operator-(const Gauss& a, const Gauss& b) { return {a.re - b.re, a.im - b.im}; }
    friend Gauss operator*(const Gauss& a, const Gauss& b) {
        return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
    }
    Gauss& operator+=(const Gauss& o) { return *this = *this + o; }
    friend bool operator==(const Gauss& a, const Gauss& b) { return a.re == b.re && a.im == b.im; }
    friend bool operator!=(const Gauss& a, const Gauss& b) { return !(a == b); }
    friend bool operator<(const Gauss& a, const Gauss& b) {
        if (a.re != b.re) return a.re < b.re;
        return a.im < b.im;
    }
};

// Scalar prefactor: Gaussian rational times pi^pi_pow. pi is never expanded here.
struct Coefficient {
    Gauss val;
    int pi_pow = 0;

    Coefficient() = default;
    Coefficient(Gauss g, int p = 0) : val(g), pi_pow(p) {}
    Coefficient(Rational r) : val(r) {}
    Coefficient(std::int64_t n) : val(Rational(n)) {}

    static Coefficient imag_unit() { return Coefficient(Gauss(Rational(0), Rational(1))); }
    static Coefficient pi(int p = 1) { return Coefficient(Gauss(Rational(1)), p); }

    bool is_zero() const { return val.is_zero(); }
    Coefficient operator-() const { return {-val, pi_pow}; }
    friend Coefficient operator*(const Coefficient& a, const Coefficient& b) {
        return {a.val * b.val, a.pi_pow + b.pi_pow};
    }
    friend bool operator==(const Coefficient& a, const Coefficient& b) {
        return a.val == b.val && a.pi_pow == b.pi_pow;
    }
};

}  // namespace ncalg
