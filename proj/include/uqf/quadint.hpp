#pragma once

#include <gmpxx.h>

#include <memory>
#include <optional>
#include <string>
#include <utility>

#include "uqf/errors.hpp"
#include "uqf/factor.hpp"

namespace uqf {

class FieldContext;
using Field = std::shared_ptr<const FieldContext>;

// Immutable description of the ring of integers O_K of K = Q(sqrt(D)) for a
// squarefree D >= 2.  Elements live on the integral basis {1, w} with
// w = sqrt(D) when D = 2,3 (mod 4) and w = (1+sqrt(D))/2 when D = 1 (mod 4).
// delta denotes sqrt(disc(K)): 2*sqrt(D) resp. sqrt(D); only delta^2 is stored
// so that every comparison against delta stays in exact integer arithmetic.
class FieldContext {
public:
    const mpz_class& d() const { return d_; }
    bool one_mod_four() const { return one_mod_four_; }
    const mpz_class& delta_sq() const { return delta_sq_; }
    // For D = 1 (mod 4): w^2 = omega_c + w with omega_c = (D-1)/4.
    const mpz_class& omega_c() const { return omega_c_; }
    std::string describe() const;

private:
    friend Field make_field_trusted(const mpz_class&);
    FieldContext(mpz_class d, bool one_mod_four, mpz_class delta_sq, mpz_class omega_c)
        : d_(std::move(d)), one_mod_four_(one_mod_four),
          delta_sq_(std::move(delta_sq)), omega_c_(std::move(omega_c)) {}

    mpz_class d_;
    bool one_mod_four_;
    mpz_class delta_sq_;
    mpz_class omega_c_;
};

// Squarefreeness is verified with the given factorization effort; throws
// NotSquarefree / OutOfRange / UnresolvedFactorization.
Field make_field(const mpz_class& d, const FactorEffort& effort);
Field make_field(const mpz_class& d);

// Skips the squarefree check (cheap congruence and perfect-square rejects
// only); for callers that carry their own factorization evidence.
Field make_field_trusted(const mpz_class& d);

bool same_field(const Field& a, const Field& b);
void require_same_field(const Field& a, const Field& b, const char* where);

class QuadRat;

// Element x + y*w of O_K (coordinates on the integral basis).
class QuadInt {
public:
    QuadInt() = default;  // "null" element; only assignment is valid on it
    QuadInt(Field f, mpz_class x, mpz_class y);

    static QuadInt integer(const Field& f, const mpz_class& n);
    static QuadInt omega(const Field& f);
    // a + b*sqrt(D); always integral.
    static QuadInt from_sqrt_basis(const Field& f, const mpz_class& a, const mpz_class& b);
    // (s + t*sqrt(D))/2 when that lies in O_K.
    static std::optional<QuadInt> from_half_sqrt_basis(const Field& f, const mpz_class& s,
                                                       const mpz_class& t);

    const Field& field() const { return field_; }
    const mpz_class& x() const { return x_; }
    const mpz_class& y() const { return y_; }

    // (s, t) with the element equal to (s + t*sqrt(D))/2.
    mpz_class s_half() const;
    mpz_class t_half() const;

    bool is_zero() const { return x_ == 0 && y_ == 0; }
    bool is_one() const { return x_ == 1 && y_ == 0; }
    bool is_rational() const { return y_ == 0; }

    mpz_class norm() const;
    mpz_class trace() const;
    QuadInt conj() const;
    // gcd of the coordinates; throws ZeroElement on 0.
    mpz_class content() const;
    // Both real embeddings strictly positive; exact.
    bool is_totally_positive() const;
    bool is_unit() const;

    QuadInt operator+(const QuadInt& o) const;
    QuadInt operator-(const QuadInt& o) const;
    QuadInt operator*(const QuadInt& o) const;
    QuadInt operator-() const;
    QuadInt operator*(const mpz_class& k) const;
    QuadInt pow_ui(unsigned long e) const;
    bool operator==(const QuadInt& o) const;
    bool operator!=(const QuadInt& o) const { return !(*this == o); }

    // Exact division in O_K; nullopt when the quotient is not integral.
    std::optional<QuadInt> div_exact(const QuadInt& divisor) const;

    // Deterministic order used for sorted output: by sqrt(D)-coefficient,
    // then by rational part.
    bool canonical_less(const QuadInt& o) const;

    // Embedding as an exact element of Q(sqrt(D)); which = 0 maps w to the
    // positive root, which = 1 to the negative one.
    QuadRat emb(int which) const;

    std::string str() const;

private:
    void require_valid() const;
    Field field_;
    mpz_class x_, y_;
};

inline QuadInt operator*(const mpz_class& k, const QuadInt& a) { return a * k; }

// Exact element u + v*sqrt(D) of K with rational u, v.  Workhorse for sign
// tests on embeddings and for the enumeration/representation machinery.
class QuadRat {
public:
    QuadRat() = default;
    QuadRat(Field f, mpq_class u, mpq_class v);

    static QuadRat from_int(const Field& f, const mpz_class& n);
    static QuadRat of(const QuadInt& a);  // a as an element of K

    const Field& field() const { return field_; }
    const mpq_class& u() const { return u_; }
    const mpq_class& v() const { return v_; }

    bool is_zero() const { return u_ == 0 && v_ == 0; }
    bool is_rational() const { return v_ == 0; }

    int sign() const;  // exact sign of u + v*sqrt(D)
    QuadRat conj() const;
    mpq_class norm_q() const;  // u^2 - D v^2

    QuadRat operator+(const QuadRat& o) const;
    QuadRat operator-(const QuadRat& o) const;
    QuadRat operator*(const QuadRat& o) const;
    QuadRat operator/(const QuadRat& o) const;  // throws ZeroElement
    QuadRat operator-() const;
    QuadRat operator+(const mpq_class& q) const;
    QuadRat operator-(const mpq_class& q) const;
    QuadRat operator*(const mpq_class& q) const;
    bool operator==(const QuadRat& o) const;
    bool operator!=(const QuadRat& o) const { return !(*this == o); }
    bool operator<(const QuadRat& o) const { return (*this - o).sign() < 0; }
    bool operator<=(const QuadRat& o) const { return (*this - o).sign() <= 0; }
    bool operator>(const QuadRat& o) const { return (*this - o).sign() > 0; }
    bool operator>=(const QuadRat& o) const { return (*this - o).sign() >= 0; }

    mpz_class floor() const;
    mpz_class ceil() const;
    mpz_class round_nearest() const;  // ties toward +infinity

    // Rational outer bounds computed from a dyadic enclosure of sqrt(D)
    // with 2^-bits resolution.
    mpq_class upper(unsigned bits = 48) const;
    mpq_class lower(unsigned bits = 48) const;

    // Rational outer bounds whose distance from the true value is at most
    // tol, regardless of coefficient size.
    mpq_class upper_within(const mpq_class& tol) const;
    mpq_class lower_within(const mpq_class& tol) const;

    // The element of O_K with these coordinates, if integral.
    std::optional<QuadInt> to_integral() const;

    std::string str() const;

private:
    Field field_;
    mpq_class u_, v_;
};

// Dyadic enclosure helpers.
// floor(sqrt(n)) for n >= 0.
mpz_class isqrt(const mpz_class& n);
// true iff q is the square of a rational; root receives the nonnegative root.
bool mpq_is_square(const mpq_class& q, mpq_class* root);
// x <= ub_sqrt(x)^2 for x >= 0 (cheap rational overestimate of sqrt).
mpq_class ub_sqrt(const mpq_class& x);
mpq_class lb_sqrt(const mpq_class& x);

}  // namespace uqf
