#pragma once

#include <gmpxx.h>

#include <map>
#include <string>
#include <vector>

#include "uqf/cfrac.hpp"
#include "uqf/quadfield.hpp"
#include "uqf/quadint.hpp"

namespace uqf {

// One member of the parametric family sqrt(D) = [k; u, ..., u, 2k] with l
// copies of u in the period.  The defining data is (u, l, t); everything
// else is derived:
//   2k = q_l t + u
//   D  = k^2 + t q_{l-1} + 1
//      = t^2 q_l^2/4 + t (u q_l + 2 q_{l-1})/2 + u^2/4 + 1   (same value)
//   N_i = (-1)^{i+1} (t q_i q_{l-i-1} + 1)   (the norm of alpha_i)
//   k_i = q_i q_{l-i-1}
// where q_i is the two-term recurrence sequence of u.
struct FamilyInstance {
    long u = 0;
    long l = 0;
    mpz_class t;
    mpz_class k;
    mpz_class d;
    std::vector<mpz_class> q_seq;      // q_0 .. q_l
    std::map<long, mpz_class> n_of;    // odd i -> N_i
    std::map<long, mpz_class> k_i_of;  // odd i -> q_i q_{l-i-1}
    // false when built through the odd-u / odd-t parity case, which is
    // outside the search path
    bool admissible_path = true;

    // q_i with the q_{-1} = 0 convention; OutOfRange outside [-1, l]
    const mpz_class& q(long i) const;
    // N_i for any 0 <= i <= l (the map only keeps the odd ones)
    mpz_class n_at(long i) const;
    // p_i = k q_i + q_{i-1}, the numerator of the i-th convergent
    mpz_class p_at(long i) const;
    // alpha_i = p_i + q_i sqrt(D) as an element of O_K
    QuadInt alpha(const Field& f, long i) const;
};

struct Admissibility {
    bool ok = false;
    std::vector<std::string> reasons;  // failures; empty iff ok
};

// u = 2 (mod 4), u^2/4 + 1 squarefree, l odd, and q_l even (implied by the
// first three but re-verified).
Admissibility admissible(long u, long l);

// Builds the instance for (u, l, t); throws Inadmissible unless admissible
// or the off-path case (u odd, t odd) applies, ParityViolation when
// q_l t + u is odd, OutOfRange when t < 1.  Both closed forms of D are
// recomputed and compared.
FamilyInstance instantiate(long u, long l, const mpz_class& t);

// Three independent cross-checks against the continued fraction of sqrt(D):
// (i) expansion is [k; u x l, 2k]; (ii) the N_i formula matches p_i^2 - D q_i^2
// for every odd i <= l; (iii) q_l divides k p_l + p_{l-1}.  Returns false on
// the first failure.
bool verify_instance(const FamilyInstance& inst);

struct SearchFilters {
    bool require_two_mod_four = false;  // keep only D = 2 (mod 4)
    FactorEffort effort{};
};

struct SearchHit {
    FamilyInstance inst;
    std::vector<std::string> evidence;  // one line per passed filter
};

// Scans t ascending in [t_min, t_max] and keeps instances with: D squarefree
// (unresolved factorizations are excluded), optionally D = 2 (mod 4), N_i
// squarefree and |N_i| != 1 for every odd i <= (l-1)/2, and those k_i
// pairwise distinct.  Throws Inadmissible when (u, l) is not admissible.
std::vector<SearchHit> search_t(long u, long l, const mpz_class& t_min,
                                const mpz_class& t_max, const SearchFilters& filters = {});

// narrow: indices where the pair condition is guaranteed by the growth
// analysis (odd i <= (l-4)/2); direct: the full symmetric half
// (odd i <= (l-1)/2), pair condition to be brute-verified.
enum class WindowMode { narrow, direct };

// {1} followed by the alpha_i of the window, ascending i.  Throws
// EmptyWindow when the narrow window is empty (l < 6).
std::vector<QuadInt> build_candidate_set(const FamilyInstance& inst, WindowMode mode);

// Runs certify_element_set (exhaustive pair checks) on the candidate set and
// prepends one "norm_squarefree" condition per alpha_i recording that its
// norm is squarefree and not a unit norm; valid requires those too.  A valid
// certificate rules out universal classical forms in M = |set| - 1 variables
// over Q(sqrt(D)).
Certificate certify_non_universality(const FamilyInstance& inst, WindowMode mode);

struct WindowPairCheck {
    bool only_zero = false;       // alpha_i alpha_j dominates no nonzero square
    bool in_window = false;       // i < j <= (l-4)/2, both odd
    bool hypotheses_met = false;  // k > u >= 5
    std::string note;             // window / hypothesis violations, if any
};

// Exhaustively checks that alpha_i alpha_j dominates only 0^2.  Inside the
// window with the hypotheses met the result must be true; a false there
// would falsify the growth analysis, so callers should treat it as an alarm.
WindowPairCheck check_window_pair(const FamilyInstance& inst, long i, long j);

}  // namespace uqf
