#include "uqf/interval.hpp"

#include <algorithm>

namespace uqf {

QInterval::QInterval(mpq_class lo, mpq_class hi) : lo_(std::move(lo)), hi_(std::move(hi)) {
    if (lo_ > hi_) throw LogicError("interval endpoints out of order");
}

QInterval QInterval::sqrt_of(const mpq_class& v, unsigned bits) {
    if (v < 0) throw DegenerateInput("sqrt of a negative rational");
    if (v == 0) return QInterval(0);
    // sqrt(n/d) = sqrt(n*d)/d; scale by 4^bits so the integer root carries
    // the fractional precision.
    mpz_class nd = v.get_num() * v.get_den();
    mpz_class scaled = nd << (2 * bits);
    mpz_class s;
    mpz_sqrt(s.get_mpz_t(), scaled.get_mpz_t());
    mpz_class den = v.get_den() << bits;
    mpq_class lo(s, den), hi(s + 1, den);
    lo.canonicalize();
    hi.canonicalize();
    return QInterval(lo, hi);
}

QInterval QInterval::operator+(const QInterval& o) const {
    return QInterval(lo_ + o.lo_, hi_ + o.hi_);
}

QInterval QInterval::operator-(const QInterval& o) const {
    return QInterval(lo_ - o.hi_, hi_ - o.lo_);
}

QInterval QInterval::operator*(const QInterval& o) const {
    mpq_class a = lo_ * o.lo_, b = lo_ * o.hi_, c = hi_ * o.lo_, d = hi_ * o.hi_;
    return QInterval(std::min(std::min(a, b), std::min(c, d)),
                     std::max(std::max(a, b), std::max(c, d)));
}

QInterval QInterval::operator/(const QInterval& o) const {
    if (o.contains_zero()) throw DegenerateInput("interval division by a range containing zero");
    mpq_class a = lo_ / o.lo_, b = lo_ / o.hi_, c = hi_ / o.lo_, d = hi_ / o.hi_;
    return QInterval(std::min(std::min(a, b), std::min(c, d)),
                     std::max(std::max(a, b), std::max(c, d)));
}

QInterval QInterval::abs() const {
    if (lo_ >= 0) return *this;
    if (hi_ <= 0) return -*this;
    return QInterval(mpq_class(0), std::max(mpq_class(-lo_), hi_));
}

QInterval QInterval::pow_ui(unsigned long e) const {
    QInterval acc(mpq_class(1));
    QInterval base = *this;
    while (e > 0) {
        if (e & 1) acc = acc * base;
        base = base * base;
        e >>= 1;
    }
    return acc;
}

QInterval QInterval::rounded_out(unsigned bits) const {
    mpz_class scale = mpz_class(1) << bits;
    mpq_class ls = lo_ * scale, hs = hi_ * scale;
    mpz_class lf, hc;
    mpz_fdiv_q(lf.get_mpz_t(), ls.get_num().get_mpz_t(), ls.get_den().get_mpz_t());
    mpz_cdiv_q(hc.get_mpz_t(), hs.get_num().get_mpz_t(), hs.get_den().get_mpz_t());
    mpq_class lo(lf, scale), hi(hc, scale);
    lo.canonicalize();
    hi.canonicalize();
    return QInterval(lo, hi);
}

QInterval operator+(const mpq_class& a, const QInterval& b) { return QInterval(a) + b; }
QInterval operator*(const mpq_class& a, const QInterval& b) { return QInterval(a) * b; }

Verdict certify_less(const QInterval& a, const QInterval& b) {
    if (a.hi() < b.lo()) return Verdict::holds;
    if (a.lo() >= b.hi()) return Verdict::fails;
    return Verdict::undecided;
}

}  // namespace uqf
