#pragma once

#include <gmpxx.h>

#include <string>
#include <utility>
#include <vector>

#include "uqf/factor.hpp"
#include "uqf/interval.hpp"

namespace uqf {

// A quadratic f(x) = a x^2 + b x + c with linear side conditions
// g_j(x) = k_j x + r_j, counted for simultaneous squarefree values.
struct SieveSpec {
    mpz_class a, b, c;
    std::vector<std::pair<mpz_class, mpz_class>> gs;  // (k_j, r_j)
    mpz_class delta;                                  // b^2 - 4ac
    // every polynomial produced at least one squarefree value on a scanned
    // initial segment; a miss means a fixed square divisor is likely
    bool squarefree_values_seen = true;
    std::vector<std::string> notes;

    std::size_t m() const { return gs.size(); }
    mpz_class f_at(const mpz_class& n) const { return (a * n + b) * n + c; }
    mpz_class g_at(std::size_t j, const mpz_class& n) const {
        return gs[j].first * n + gs[j].second;
    }
};

// Throws DegenerateInput when a = 0, the discriminant vanishes or some
// k_j = 0; a polynomial with no squarefree value in the scanned segment is
// flagged in the spec, not an error.
SieveSpec make_sieve_spec(const mpz_class& a, const mpz_class& b, const mpz_class& c,
                          const std::vector<std::pair<mpz_class, mpz_class>>& gs = {});

// Subset of Z/p^2 as pairwise disjoint progressions (modulus, residue) with
// modulus 1, p or p^2.
struct ResidueClasses {
    std::vector<std::pair<mpz_class, mpz_class>> progs;
    mpz_class count(const mpz_class& p) const;  // number of elements in Z/p^2
};

// Solutions of a x^2 + b x + c = 0 (mod p^2), resp. k x + r = 0 (mod p^2).
// Small p by direct scan, large p by factoring out the content, Hensel
// lifting the simple roots and column analysis at the double roots.
ResidueClasses quadratic_roots_mod_psq(const mpz_class& a, const mpz_class& b,
                                       const mpz_class& c, const mpz_class& p);
ResidueClasses linear_roots_mod_psq(const mpz_class& k, const mpz_class& r,
                                    const mpz_class& p);

// Square root of a (mod odd prime p); a must be a quadratic residue.
mpz_class sqrt_mod_prime(const mpz_class& a, const mpz_class& p);

// #{ 1 <= n <= X : f(n) and every g_j(n) squarefree }, value 0 counting as
// not squarefree.  Exact.  When every value bound is small enough the count
// marks the p^2-divisible n per prime; otherwise it factors each value and
// an exhausted effort raises UnresolvedFactorization naming the offending n.
mpz_class count_simultaneous(const SieveSpec& spec, long X, const FactorEffort& effort = {});

// The same count by factoring every value; the cross-check path.
mpz_class count_naive(const SieveSpec& spec, long X, const FactorEffort& effort = {});

// The same count for a g-free spec through the square-divisor identity
// sum_d mu(d) #{ n <= X : d^2 | f(n) }; PreconditionNotMet when gs is
// nonempty.
mpz_class count_by_moebius(const SieveSpec& spec, long X);

// rho(d) = #{ n mod lcm(d_0^2 ... d_m^2) : d_0^2 | f(n), d_j^2 | g_j(n) },
// exact and multiplicative across primes.  d needs one entry per polynomial;
// NonSquarefreeModulus on a non-squarefree d_i.
mpz_class local_density(const SieveSpec& spec, const std::vector<mpz_class>& d);

// Certified enclosure of the density constant C = prod_p (1 - |B_p|/p^2),
// B_p the residues mod p^2 where some polynomial value is divisible by p^2.
// Exact factors for p up to max(P, every prime of 2 a delta prod k_j), then
// an outward tail [1 - (m+2)/cutoff, 1].  Requires P >= 100; an enclosure
// containing zero signals a degenerate spec.
QInterval euler_constant(const SieveSpec& spec, unsigned long P);

// The spec with x -> 4x substituted; every value of the new f is c (mod 4).
SieveSpec shift_mod4(const SieveSpec& spec);

}  // namespace uqf
