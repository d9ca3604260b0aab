#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "uqf/enumerate.hpp"
#include "uqf/quadint.hpp"

namespace uqf {

// All c in O_K with g - c^2 totally positive, canonically sorted.  Always
// contains 0; contains c iff it contains -c.  Throws NotTotallyPositive.
std::vector<QuadInt> dominated_squares(const QuadInt& g);

// Some split g = b + c into two totally positive parts (the canonically
// smallest b), or nullopt when g is indecomposable.
std::optional<std::pair<QuadInt, QuadInt>> decompose_oracle(const QuadInt& g);

// Every split g = b + c with both parts totally positive and b canonically
// at most c, sorted by b.
std::vector<std::pair<QuadInt, QuadInt>> decompose_all(const QuadInt& g);

enum class IndecMode { sufficient, oracle };

// sufficient: norm below the discriminant root and primitive, which forces
// indecomposability; throws PreconditionNotMet outside that range (caller
// falls back to oracle).  oracle: exhaustive split search.
bool is_indecomposable(const QuadInt& a, IndecMode mode);

// Whether a = b x^2 or b = a x^2 for some x in O_K.  Deterministic: reduces
// to rational-square tests and one integrality check, no search.
bool same_square_class(const QuadInt& a, const QuadInt& b);

// Canonical representatives, one per orbit under the totally positive unit
// group, of the totally positive elements of norm n; sorted, possibly empty.
// The representative is the orbit member whose first embedding is smallest
// while still at least sqrt(n).
std::vector<QuadInt> norm_representatives(const Field& f, const mpz_class& n);

// {1} together with, for each squarefree 2 <= n <= nmax admitting an ideal
// of norm n, a canonical primitive totally positive element of norm n.
// Assumes (does not verify) narrow class number one; a missing generator for
// an admissible n throws NoGeneratorFound.
std::vector<QuadInt> small_norm_generators(const Field& f, const mpz_class& nmax);

// How the pairwise product condition of a certificate is checked:
// exhaustive enumerates dominated squares of every pairwise product;
// product_norm uses the stronger per-element norm bound plus primitivity of
// the products, which implies the exhaustive condition.
enum class PairCheckMode { exhaustive, product_norm };

struct CertCondition {
    std::string kind;
    int index = -1;  // element index, or first of a pair
    int other = -1;  // second element of a pair, when applicable
    bool verdict = false;
    std::string evidence;
};

struct Certificate {
    Field field;
    std::vector<QuadInt> elements;
    PairCheckMode mode = PairCheckMode::exhaustive;
    std::vector<CertCondition> conditions;
    int m = 0;  // |elements|; conclusion concerns (m-1)-variable forms
    bool valid = false;
};

// Checks the element-set conditions that rule out a universal classical
// totally positive quadratic form in |elems|-1 variables:
//   - the first element is 1 (gate; throws FirstElementNotOne)
//   - every element has norm below the discriminant root ("norm_le_delta")
//   - every element is primitive ("primitive")
//   - elements lie in pairwise distinct square classes ("distinct_square_class")
//   - no pairwise product dominates a nonzero square ("no_dominated_square"),
//     or in product_norm mode the sufficient condition
//     ("product_primitive_small_norm")
// All verdicts are recorded; valid iff all hold.
Certificate certify_element_set(const Field& f, const std::vector<QuadInt>& elems,
                                PairCheckMode mode);

}  // namespace uqf
