#pragma once

#include <gmpxx.h>

#include "uqf/errors.hpp"

namespace uqf {

// Closed interval [lo, hi] with exact rational endpoints.  Arithmetic keeps
// the true value of the modelled real number inside the interval; square
// roots round outward at a caller-chosen dyadic precision.  Used wherever a
// verdict depends on comparing irrational quantities: widen the precision
// until the comparison is decided.
class QInterval {
public:
    QInterval() : lo_(0), hi_(0) {}
    QInterval(const mpq_class& v) : lo_(v), hi_(v) {}
    QInterval(mpq_class lo, mpq_class hi);

    QInterval(long v) : lo_(v), hi_(v) {}

    // Enclosure of sqrt(v) with width at most 2^-bits * (denominator effect);
    // endpoints are (floor/ceil of) s/2^bits for an integer s.
    static QInterval sqrt_of(const mpq_class& v, unsigned bits);

    const mpq_class& lo() const { return lo_; }
    const mpq_class& hi() const { return hi_; }
    mpq_class width() const { return hi_ - lo_; }
    mpq_class mid() const { return (lo_ + hi_) / 2; }

    bool contains_zero() const { return lo_ <= 0 && hi_ >= 0; }
    bool contains(const mpq_class& v) const { return lo_ <= v && v <= hi_; }

    QInterval operator-() const { return QInterval(-hi_, -lo_); }
    QInterval operator+(const QInterval& o) const;
    QInterval operator-(const QInterval& o) const;
    QInterval operator*(const QInterval& o) const;
    // Throws DegenerateInput when the divisor straddles zero.
    QInterval operator/(const QInterval& o) const;

    QInterval abs() const;
    QInterval pow_ui(unsigned long e) const;

    // Outward rounding to dyadic endpoints with the given number of
    // fractional bits; bounds denominator growth in long products.
    QInterval rounded_out(unsigned bits) const;

private:
    mpq_class lo_, hi_;
};

QInterval operator+(const mpq_class& a, const QInterval& b);
QInterval operator*(const mpq_class& a, const QInterval& b);

enum class Verdict { holds, fails, undecided };

// Tri-state strict comparison a < b: holds when the intervals certify it,
// fails when they certify a >= b, undecided when they overlap.
Verdict certify_less(const QInterval& a, const QInterval& b);

// Precision-doubling driver: eval(bits) must return undecided only when more
// precision could help.  Doubles bits until decided or the cap is reached.
template <class F>
Verdict decide_with_precision(F&& eval, unsigned start_bits = 64, unsigned max_bits = 1u << 16) {
    for (unsigned bits = start_bits; bits <= max_bits; bits *= 2) {
        Verdict v = eval(bits);
        if (v != Verdict::undecided) return v;
    }
    return Verdict::undecided;
}

}  // namespace uqf
