#pragma once

#include <gmpxx.h>

#include <string>
#include <utility>
#include <vector>

#include "uqf/factor.hpp"
#include "uqf/interval.hpp"
#include "uqf/quadint.hpp"

namespace uqf {

// Periodic continued fraction of sqrt(d): [a0; a1, ..., ar] with a_r = 2*a0
// and the inner part a palindrome.  Non-squarefree d is allowed (the
// expansion is still correct); `squarefree` carries a cheap verdict so such
// inputs stay visibly diagnostic.
struct CFExpansion {
    mpz_class d;
    mpz_class a0;
    std::vector<mpz_class> period;
    Tri squarefree = Tri::unknown;
};

// Exact P,Q recurrence; stops at the first return to the initial surd state.
// Throws PerfectSquare when d is a square, OutOfRange when d < 2.
CFExpansion expand_sqrt(const mpz_class& d);

// Coefficient a_{i+1} of the expansion (periodic continuation), i >= 0.
mpz_class coefficient_after(const CFExpansion& exp, long i);

struct Convergent {
    long i = 0;
    mpz_class p, q;
    QuadInt alpha;  // p + q*sqrt(d)
    mpz_class n;    // p^2 - d q^2
};

// First `count` convergents p_i/q_i (i from 0, p_0/q_0 = a0/1).
std::vector<Convergent> convergents(const CFExpansion& exp, std::size_t count);

// |N_i| < 2*sqrt(d)/a_{i+1} + 1/(a_{i+1} q_i^2), decided by certified
// intervals with precision doubling (strict, hence always decidable).
bool check_size_bound(const Convergent& conv, const mpz_class& a_next);

// Fundamental unit > 1 of O_K with its sign of norm readable off .norm().
// Built from the convergent closing the first period; for d = 1 (mod 4) a
// bounded check finds the cube root in Z[w] when the period-end unit is not
// fundamental.
QuadInt fundamental_unit(const Field& f);

// Smallest solution of U^2 - d V^2 = 1 in positive integers.
std::pair<mpz_class, mpz_class> pell_unit(const mpz_class& d);

// q_{-1} = 0, q_0 = 1, q_{i+1} = u q_i + q_{i-1}; returns [q_0, ..., q_l].
std::vector<mpz_class> q_sequence(const mpz_class& u, long l);

struct QIdentityReport {
    bool pass = true;
    long bad_i = -1;
    long bad_j = -1;        // only for the cross identity
    std::string which;      // "cross", "consecutive" or "parity"
};

// Verifies, for the q-sequence of u up to index l:
//   cross:        q_i q_{j-1} - q_{i-1} q_j = (-1)^{j+1} q_{i-j-1}  (0 <= j < i <= l)
//   consecutive:  q_i q_{i-2} - q_{i-1}^2 = (-1)^i                  (1 <= i <= l)
//   parity:       q_i even for odd i, when u is even
QIdentityReport check_q_identities(const mpz_class& u, long l);

// The growth data of the recurrence: rho_pm = (u +- sqrt(u^2+4))/2, and the
// coefficients expressing alpha_i = c_plus rho_plus^i + c_minus rho_minus^i
// (and the conjugate alpha'_i via the primed pair).  Stored as exact
// defining integers; enclosures are recomputed on demand.
struct BinetQuantities {
    mpz_class u, k, d;
    unsigned bits = 0;  // precision of the stored enclosures
    QInterval rho_plus, rho_minus;
    QInterval c_plus, c_minus;
    QInterval cprime_plus, cprime_minus;

    // Re-evaluates every enclosure at the given precision.
    BinetQuantities enclose(unsigned bits) const;
    // rho_plus * rho_minus = -1, checked symbolically (exact).
    bool product_is_minus_one() const;
};

BinetQuantities binet_quantities(const mpz_class& u, const mpz_class& k, const mpz_class& d,
                                 unsigned bits = 96);

enum class TechStatus { holds, fails, hypothesis_not_met, undecided };

// The four growth inequalities behind the candidate-set analysis, each
// reported with its own hypothesis gate:
//   c_minus_positive:     k >= u            =>  c_minus > 0
//   cprime_minus_bounds:  u >= 2            =>  rho_minus^2 < |c'_minus| < 1
//   cprime_plus_small:    u >= 2            =>  |c'_plus| < 2 rho_plus^{-l}
//   plus_term_dominated:  u >= 2, l >= 4    =>  |c'_plus rho_plus^n| <
//                         |c'_minus rho_minus^n| / 2 for all 0 <= n <= (l-4)/2
struct TechnicalReport {
    TechStatus c_minus_positive = TechStatus::undecided;
    TechStatus cprime_minus_bounds = TechStatus::undecided;
    TechStatus cprime_plus_small = TechStatus::undecided;
    TechStatus plus_term_dominated = TechStatus::undecided;
    long first_bad_n = -1;  // witness for a failing plus_term_dominated

    // Every item whose hypothesis is met holds.
    bool all_applicable_hold() const;
};

TechnicalReport check_technical(const mpz_class& u, const mpz_class& k, long l,
                                const mpz_class& d);

}  // namespace uqf
