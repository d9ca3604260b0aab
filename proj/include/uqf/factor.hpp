#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <vector>

#include "uqf/errors.hpp"

namespace uqf {

// Budget knobs for the factorization routines.  trial_bound is the largest
// prime used for trial division; rho_iterations caps each Pollard-Brent run.
struct FactorEffort {
    uint64_t trial_bound = 100000;
    uint64_t rho_iterations = 1u << 22;

    FactorEffort scaled(double s) const;
};

struct FactorTerm {
    mpz_class base;
    unsigned exp = 1;
    // true when base passed the primality test; false marks a composite
    // cofactor that the effort budget could not split.
    bool certified_prime = false;
};

struct Factorization {
    mpz_class n;                    // the (nonzero) input
    std::vector<FactorTerm> terms;  // bases pairwise coprime, product == |n|
    bool complete = false;          // every term certified prime

    // Multiplies the terms back together and compares with |n|.
    bool product_matches() const;
};

enum class Tri { yes, no, unknown };

bool probably_prime(const mpz_class& n);

// Primes up to at least `limit`, cached across calls.
const std::vector<uint32_t>& small_primes(uint32_t limit);

// Throws ZeroInput on n == 0.  Sign is ignored.
Factorization factorize(const mpz_class& n, const FactorEffort& effort = {});

Tri squarefree_status(const Factorization& f);

// "2 * 17 * 19", exponents as ^e, uncertified cofactors marked.
std::string describe(const Factorization& f);

// Convenience: factorize then classify.  |n| in {1} yields yes.
Tri is_squarefree(const mpz_class& n, const FactorEffort& effort = {});

}  // namespace uqf
