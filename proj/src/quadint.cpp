#include "uqf/quadint.hpp"

#include <sstream>

namespace uqf {

std::string FieldContext::describe() const {
    std::ostringstream os;
    os << "Q(sqrt(" << d_ << ")), w = " << (one_mod_four_ ? "(1+sqrt(D))/2" : "sqrt(D)");
    return os.str();
}

Field make_field_trusted(const mpz_class& d) {
    if (d < 2) throw OutOfRange("make_field: D must be >= 2");
    if (mpz_divisible_ui_p(d.get_mpz_t(), 4))
        throw NotSquarefree("make_field: D divisible by 4");
    if (mpz_perfect_square_p(d.get_mpz_t()))
        throw NotSquarefree("make_field: D is a perfect square");
    bool one = mpz_fdiv_ui(d.get_mpz_t(), 4) == 1;
    mpz_class delta_sq = one ? d : 4 * d;
    mpz_class omega_c = one ? mpz_class((d - 1) / 4) : d;
    return Field(new FieldContext(d, one, delta_sq, omega_c));
}

Field make_field(const mpz_class& d, const FactorEffort& effort) {
    if (d < 2) throw OutOfRange("make_field: D must be >= 2");
    switch (is_squarefree(d, effort)) {
        case Tri::yes:
            break;
        case Tri::no:
            throw NotSquarefree("make_field: D = " + d.get_str() + " is not squarefree");
        case Tri::unknown:
            throw UnresolvedFactorization("make_field: cannot decide squarefreeness of D = " +
                                          d.get_str() + " within effort");
    }
    return make_field_trusted(d);
}

Field make_field(const mpz_class& d) { return make_field(d, FactorEffort{}); }

bool same_field(const Field& a, const Field& b) {
    if (a.get() == b.get()) return true;
    if (!a || !b) return false;
    return a->d() == b->d();
}

void require_same_field(const Field& a, const Field& b, const char* where) {
    if (!same_field(a, b))
        throw MixedFields(std::string(where) + ": operands belong to different fields");
}

// ---------------------------------------------------------------------------
// QuadInt

QuadInt::QuadInt(Field f, mpz_class x, mpz_class y)
    : field_(std::move(f)), x_(std::move(x)), y_(std::move(y)) {
    if (!field_) throw LogicError("QuadInt: null field");
}

void QuadInt::require_valid() const {
    if (!field_) throw LogicError("QuadInt: use of default-constructed element");
}

QuadInt QuadInt::integer(const Field& f, const mpz_class& n) { return QuadInt(f, n, 0); }

QuadInt QuadInt::omega(const Field& f) { return QuadInt(f, 0, 1); }

QuadInt QuadInt::from_sqrt_basis(const Field& f, const mpz_class& a, const mpz_class& b) {
    // a + b*sqrt(D) = (a - b) + 2b*w for D = 1 (mod 4), else a + b*w
    if (f->one_mod_four()) return QuadInt(f, a - b, 2 * b);
    return QuadInt(f, a, b);
}

std::optional<QuadInt> QuadInt::from_half_sqrt_basis(const Field& f, const mpz_class& s,
                                                     const mpz_class& t) {
    if (f->one_mod_four()) {
        // (s + t*sqrt(D))/2 = (s - t)/2 + t*w; integral iff s = t (mod 2)
        if (mpz_odd_p(mpz_class(s - t).get_mpz_t())) return std::nullopt;
        return QuadInt(f, (s - t) / 2, t);
    }
    if (mpz_odd_p(s.get_mpz_t()) || mpz_odd_p(t.get_mpz_t())) return std::nullopt;
    return QuadInt(f, s / 2, t / 2);
}

mpz_class QuadInt::s_half() const {
    require_valid();
    return field_->one_mod_four() ? mpz_class(2 * x_ + y_) : mpz_class(2 * x_);
}

mpz_class QuadInt::t_half() const {
    require_valid();
    return field_->one_mod_four() ? y_ : mpz_class(2 * y_);
}

mpz_class QuadInt::norm() const {
    require_valid();
    if (field_->one_mod_four()) return x_ * x_ + x_ * y_ - field_->omega_c() * y_ * y_;
    return x_ * x_ - field_->d() * y_ * y_;
}

mpz_class QuadInt::trace() const {
    require_valid();
    return field_->one_mod_four() ? mpz_class(2 * x_ + y_) : mpz_class(2 * x_);
}

QuadInt QuadInt::conj() const {
    require_valid();
    if (field_->one_mod_four()) return QuadInt(field_, x_ + y_, -y_);
    return QuadInt(field_, x_, -y_);
}

mpz_class QuadInt::content() const {
    require_valid();
    if (is_zero()) throw ZeroElement("content: zero element");
    mpz_class g;
    mpz_gcd(g.get_mpz_t(), x_.get_mpz_t(), y_.get_mpz_t());
    return g;
}

bool QuadInt::is_totally_positive() const {
    require_valid();
    // (s + t*sqrt(D))/2 with both embeddings > 0 iff s > 0 and s^2 > t^2 D
    mpz_class s = s_half(), t = t_half();
    if (s <= 0) return false;
    return s * s > t * t * field_->d();
}

bool QuadInt::is_unit() const {
    mpz_class n = norm();
    return n == 1 || n == -1;
}

QuadInt QuadInt::operator+(const QuadInt& o) const {
    require_valid();
    require_same_field(field_, o.field_, "QuadInt::add");
    return QuadInt(field_, x_ + o.x_, y_ + o.y_);
}

QuadInt QuadInt::operator-(const QuadInt& o) const {
    require_valid();
    require_same_field(field_, o.field_, "QuadInt::sub");
    return QuadInt(field_, x_ - o.x_, y_ - o.y_);
}

QuadInt QuadInt::operator*(const QuadInt& o) const {
    require_valid();
    require_same_field(field_, o.field_, "QuadInt::mul");
    if (field_->one_mod_four()) {
        // w^2 = c + w with c = (D-1)/4
        const mpz_class& c = field_->omega_c();
        mpz_class yy = y_ * o.y_;
        return QuadInt(field_, x_ * o.x_ + c * yy, x_ * o.y_ + y_ * o.x_ + yy);
    }
    return QuadInt(field_, x_ * o.x_ + field_->d() * y_ * o.y_, x_ * o.y_ + y_ * o.x_);
}

QuadInt QuadInt::operator-() const {
    require_valid();
    return QuadInt(field_, -x_, -y_);
}

QuadInt QuadInt::operator*(const mpz_class& k) const {
    require_valid();
    return QuadInt(field_, x_ * k, y_ * k);
}

QuadInt QuadInt::pow_ui(unsigned long e) const {
    require_valid();
    QuadInt r = integer(field_, 1), b = *this;
    while (e) {
        if (e & 1) r = r * b;
        b = b * b;
        e >>= 1;
    }
    return r;
}

bool QuadInt::operator==(const QuadInt& o) const {
    require_valid();
    require_same_field(field_, o.field_, "QuadInt::eq");
    return x_ == o.x_ && y_ == o.y_;
}

std::optional<QuadInt> QuadInt::div_exact(const QuadInt& divisor) const {
    require_valid();
    require_same_field(field_, divisor.field_, "QuadInt::div_exact");
    if (divisor.is_zero()) throw ZeroElement("div_exact: division by zero");
    mpz_class n = divisor.norm();
    QuadInt m = *this * divisor.conj();
    if (!mpz_divisible_p(m.x_.get_mpz_t(), n.get_mpz_t())) return std::nullopt;
    if (!mpz_divisible_p(m.y_.get_mpz_t(), n.get_mpz_t())) return std::nullopt;
    return QuadInt(field_, m.x_ / n, m.y_ / n);
}

bool QuadInt::canonical_less(const QuadInt& o) const {
    if (y_ != o.y_) return y_ < o.y_;
    return x_ < o.x_;
}

QuadRat QuadInt::emb(int which) const {
    require_valid();
    mpq_class u(s_half()), v(t_half());
    u /= 2;
    v /= 2;
    if (which == 1) v = -v;
    return QuadRat(field_, u, v);
}

std::string QuadInt::str() const {
    require_valid();
    std::ostringstream os;
    os << x_;
    if (y_ != 0) os << (y_ > 0 ? "+" : "") << y_ << "*w";
    return os.str();
}

// ---------------------------------------------------------------------------
// QuadRat

QuadRat::QuadRat(Field f, mpq_class u, mpq_class v)
    : field_(std::move(f)), u_(std::move(u)), v_(std::move(v)) {
    if (!field_) throw LogicError("QuadRat: null field");
    u_.canonicalize();
    v_.canonicalize();
}

QuadRat QuadRat::from_int(const Field& f, const mpz_class& n) {
    return QuadRat(f, mpq_class(n), mpq_class(0));
}

QuadRat QuadRat::of(const QuadInt& a) { return a.emb(0); }

int QuadRat::sign() const {
    int su = sgn(u_), sv = sgn(v_);
    if (sv == 0) return su;
    if (su == 0) return sv;
    if (su == sv) return su;
    // opposite signs: compare u^2 with D v^2; equality would force sqrt(D)
    // rational, impossible for squarefree D >= 2
    mpq_class uu = u_ * u_, dvv = v_ * v_ * field_->d();
    int c = cmp(uu, dvv);
    if (c == 0) throw LogicError("QuadRat::sign: sqrt(D) rational?");
    // |u| dominates -> sign of u, else sign of v
    return c > 0 ? su : sv;
}

QuadRat QuadRat::conj() const { return QuadRat(field_, u_, -v_); }

mpq_class QuadRat::norm_q() const { return u_ * u_ - mpq_class(field_->d()) * v_ * v_; }

QuadRat QuadRat::operator+(const QuadRat& o) const {
    require_same_field(field_, o.field_, "QuadRat::add");
    return QuadRat(field_, u_ + o.u_, v_ + o.v_);
}

QuadRat QuadRat::operator-(const QuadRat& o) const {
    require_same_field(field_, o.field_, "QuadRat::sub");
    return QuadRat(field_, u_ - o.u_, v_ - o.v_);
}

QuadRat QuadRat::operator*(const QuadRat& o) const {
    require_same_field(field_, o.field_, "QuadRat::mul");
    return QuadRat(field_, u_ * o.u_ + mpq_class(field_->d()) * v_ * o.v_,
                   u_ * o.v_ + v_ * o.u_);
}

QuadRat QuadRat::operator/(const QuadRat& o) const {
    require_same_field(field_, o.field_, "QuadRat::div");
    if (o.is_zero()) throw ZeroElement("QuadRat: division by zero");
    mpq_class n = o.norm_q();
    QuadRat num = *this * o.conj();
    return QuadRat(field_, num.u_ / n, num.v_ / n);
}

QuadRat QuadRat::operator-() const { return QuadRat(field_, -u_, -v_); }
QuadRat QuadRat::operator+(const mpq_class& q) const { return QuadRat(field_, u_ + q, v_); }
QuadRat QuadRat::operator-(const mpq_class& q) const { return QuadRat(field_, u_ - q, v_); }
QuadRat QuadRat::operator*(const mpq_class& q) const { return QuadRat(field_, u_ * q, v_ * q); }

bool QuadRat::operator==(const QuadRat& o) const {
    require_same_field(field_, o.field_, "QuadRat::eq");
    return u_ == o.u_ && v_ == o.v_;
}

mpz_class isqrt(const mpz_class& n) {
    if (n < 0) throw OutOfRange("isqrt: negative input");
    mpz_class r;
    mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
    return r;
}

namespace {

// enclosure of sqrt(D): [s, s+1]/2^bits with s = isqrt(D * 4^bits)
void sqrt_enclosure(const mpz_class& d, unsigned bits, mpq_class& lo, mpq_class& hi) {
    mpz_class scaled = d;
    mpz_mul_2exp(scaled.get_mpz_t(), scaled.get_mpz_t(), 2 * bits);
    mpz_class s = isqrt(scaled);
    mpz_class den = 1;
    mpz_mul_2exp(den.get_mpz_t(), den.get_mpz_t(), bits);
    lo = mpq_class(s, den);
    hi = mpq_class(s + 1, den);
    lo.canonicalize();
    hi.canonicalize();
}

}  // namespace

mpq_class QuadRat::upper(unsigned bits) const {
    mpq_class lo, hi;
    sqrt_enclosure(field_->d(), bits, lo, hi);
    return u_ + v_ * (sgn(v_) >= 0 ? hi : lo);
}

mpq_class QuadRat::lower(unsigned bits) const {
    mpq_class lo, hi;
    sqrt_enclosure(field_->d(), bits, lo, hi);
    return u_ + v_ * (sgn(v_) >= 0 ? lo : hi);
}

namespace {

// bits so that |v| * 2^-bits <= tol
unsigned bits_for_width(const mpq_class& v, const mpq_class& tol) {
    mpq_class ratio = abs(v) / tol;
    mpz_class need;
    mpz_cdiv_q(need.get_mpz_t(), ratio.get_num().get_mpz_t(), ratio.get_den().get_mpz_t());
    if (need <= 1) return 16;
    unsigned b = mpz_sizeinbase(need.get_mpz_t(), 2);
    return b < 16 ? 16 : b + 1;
}

}  // namespace

mpq_class QuadRat::upper_within(const mpq_class& tol) const {
    if (v_ == 0) return u_;
    return upper(bits_for_width(v_, tol));
}

mpq_class QuadRat::lower_within(const mpq_class& tol) const {
    if (v_ == 0) return u_;
    return lower(bits_for_width(v_, tol));
}

mpz_class QuadRat::floor() const {
    if (v_ == 0) {
        mpz_class q;
        mpz_fdiv_q(q.get_mpz_t(), u_.get_num().get_mpz_t(), u_.get_den().get_mpz_t());
        return q;
    }
    mpq_class approx = lower_within(mpq_class(1, 4));
    mpz_class n;
    mpz_fdiv_q(n.get_mpz_t(), approx.get_num().get_mpz_t(), approx.get_den().get_mpz_t());
    // fix up with exact sign tests (at most a couple of steps)
    while ((*this - mpq_class(n)).sign() < 0) n -= 1;
    while ((*this - mpq_class(n + 1)).sign() >= 0) n += 1;
    return n;
}

mpz_class QuadRat::ceil() const { return -((-*this).floor()); }

mpz_class QuadRat::round_nearest() const { return (*this + mpq_class(1, 2)).floor(); }

std::optional<QuadInt> QuadRat::to_integral() const {
    // u + v*sqrt(D) = (2u + 2v sqrt(D))/2
    mpq_class s2 = 2 * u_, t2 = 2 * v_;
    if (s2.get_den() != 1 || t2.get_den() != 1) return std::nullopt;
    return QuadInt::from_half_sqrt_basis(field_, s2.get_num(), t2.get_num());
}

std::string QuadRat::str() const {
    std::ostringstream os;
    os << u_;
    if (v_ != 0) os << (sgn(v_) > 0 ? "+" : "") << v_ << "*sqrt(D)";
    return os.str();
}

bool mpq_is_square(const mpq_class& q, mpq_class* root) {
    if (sgn(q) < 0) return false;
    if (q == 0) {
        if (root) *root = 0;
        return true;
    }
    const mpz_class &num = q.get_num(), &den = q.get_den();
    if (!mpz_perfect_square_p(num.get_mpz_t())) return false;
    if (!mpz_perfect_square_p(den.get_mpz_t())) return false;
    if (root) {
        *root = mpq_class(isqrt(num), isqrt(den));
        root->canonicalize();
    }
    return true;
}

mpq_class ub_sqrt(const mpq_class& x) {
    if (sgn(x) <= 0) return mpq_class(0);
    // sqrt(n/d) = sqrt(n d)/d <= (isqrt(n d) + 1)/d
    mpz_class nd = x.get_num() * x.get_den();
    mpq_class r(isqrt(nd) + 1, x.get_den());
    r.canonicalize();
    return r;
}

mpq_class lb_sqrt(const mpq_class& x) {
    if (sgn(x) <= 0) return mpq_class(0);
    mpz_class nd = x.get_num() * x.get_den();
    mpq_class r(isqrt(nd), x.get_den());
    r.canonicalize();
    return r;
}

}  // namespace uqf
