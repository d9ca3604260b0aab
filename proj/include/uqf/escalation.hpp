#pragma once

#include <optional>
#include <vector>

#include "uqf/quadfield.hpp"

namespace uqf {

// Gram matrix of a classical form x^T A x over O_K.  Symmetric and totally
// positive definite: every leading principal minor is totally positive, in
// both embeddings, decided exactly.
struct GramLattice {
    Field field;
    std::size_t n = 0;
    std::vector<std::vector<QuadInt>> a;  // n x n, symmetric

    const QuadInt& at(std::size_t i, std::size_t j) const { return a[i][j]; }
};

// Determinant by fraction-free elimination; exact over O_K.
QuadInt gram_det(const Field& f, const std::vector<std::vector<QuadInt>>& a);

// Validates shape, symmetry and definiteness.  Throws NotSymmetric, or
// NotTotallyPositiveDefinite naming the first offending leading minor.
GramLattice make_lattice(const std::vector<std::vector<QuadInt>>& entries);

// <d_1, ..., d_m> as a Gram matrix.
GramLattice diagonal_lattice(const Field& f, const std::vector<QuadInt>& diag);

// Some x in O_K^n with x^T A x = target, or nullopt with an exhaustiveness
// guarantee.  In each embedding the equation confines x to an ellipsoid; the
// search walks an exact L D L^T split of A from the last coordinate down,
// pruning as soon as the remaining budget goes negative in either embedding.
// Coordinate ranges are rational outer enclosures, so no solution can slip
// through; the returned vector is sign-normalized (first nonzero coordinate
// positive) and verified against the form before being handed back.
std::optional<std::vector<QuadInt>> represents(const GramLattice& lat, const QuadInt& target);

// First queue element lat fails to represent; nullopt when all are covered.
std::optional<QuadInt> truant(const GramLattice& lat, const std::vector<QuadInt>& queue);

// All extensions [[A, c], [c^T, target]] that are totally positive definite.
// Cross entries c_i range over dominated_squares(a_ii * target) (the 2x2
// minor condition); the full matrix is kept when target*det(A) - c^T adj(A) c
// is totally positive.  Vectors are deduplicated under the sign symmetries of
// A (and the global flip of the new basis vector) and returned in a
// deterministic order.  Throws AlreadyRepresented.
std::vector<GramLattice> escalate(const GramLattice& lat, const QuadInt& target);

struct EscalationNode {
    GramLattice lattice;
    int parent = -1;        // index into the previous level; -1 for the root
    QuadInt added_target;   // null element for the root
    std::vector<QuadInt> cross_vector;
};

struct RankBound {
    Field field;
    std::vector<QuadInt> queue;
    int bound = 0;
    std::vector<long> tree_summary;              // branch count per rank
    bool exhaustive = false;
    std::vector<std::vector<EscalationNode>> levels;  // full tree, by rank
};

// Breadth-first escalation from the empty lattice: each branch escalates by
// its truant; bound is the greatest d <= max_depth such that every surviving
// rank d-1 branch still misses some queue element.  A branch that covers the
// whole queue stops the climb.  Throws QueueInvalid unless the queue starts
// with 1 and consists of pairwise distinct totally positive elements.
RankBound lower_bound_search(const Field& f, const std::vector<QuadInt>& queue,
                             int max_depth = 8);

// Variable count forced on any universal diagonal form: one per square class
// holding a listed indecomposable, plus one per remaining class of listed
// elements that cannot be split into parts lying in pairwise distinct counted
// classes.
int diagonal_lower_bound(const Field& f, const std::vector<QuadInt>& elems);

}  // namespace uqf
