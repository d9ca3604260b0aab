#pragma once

#include <vector>

#include "uqf/quadint.hpp"

namespace uqf {

// Axis-aligned rectangle in the embedding plane (first embedding on axis 1).
struct EmbRect {
    mpq_class lo1, hi1, lo2, hi2;
};

// Bound for |emb_i(.)| in box enumeration: either an exact rational, or the
// square root of a nonnegative real given exactly as an element of K (used
// for bounds of the form sqrt(emb_i(g))).
class Bound {
public:
    static Bound rational(mpq_class b);
    static Bound sqrt_of(QuadRat r);

    // exact test |val| <= bound
    bool abs_le(const QuadRat& val) const;
    // rational overestimate of the bound
    mpq_class upper_rat() const;

private:
    bool is_sqrt_ = false;
    mpq_class rat_;
    QuadRat sq_;  // bound = sqrt(sq_) when is_sqrt_
};

// Superset of the lattice points of O_K whose embeddings land in rect;
// callers apply their own exact filters.  The geometry pass reduces the
// embedding lattice against the box shape, so heavily skewed rectangles cost
// O(points + perimeter) rather than a coordinate sweep.
std::vector<QuadInt> candidates_in_rect(const Field& f, const EmbRect& rect);

// Exact: elements with lo_i <= emb_i <= hi_i, canonically sorted.
std::vector<QuadInt> elements_in_rect(const Field& f, const EmbRect& rect);

// Exact: elements with |emb_1| <= B1 and |emb_2| <= B2, canonically sorted.
std::vector<QuadInt> enumerate_box(const Field& f, const Bound& b1, const Bound& b2);

}  // namespace uqf
