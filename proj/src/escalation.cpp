#include "uqf/escalation.hpp"

#include <algorithm>
#include <functional>

#include "uqf/errors.hpp"

namespace uqf {

QuadInt gram_det(const Field& f, const std::vector<std::vector<QuadInt>>& a) {
    std::size_t n = a.size();
    if (n == 0) return QuadInt::integer(f, 1);
    auto w = a;
    QuadInt prev = QuadInt::integer(f, 1);
    int sign = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (w[k][k].is_zero()) {
            std::size_t r = k + 1;
            while (r < n && w[r][k].is_zero()) ++r;
            if (r == n) return QuadInt::integer(f, 0);
            std::swap(w[k], w[r]);
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            for (std::size_t j = k + 1; j < n; ++j) {
                QuadInt num = w[i][j] * w[k][k] - w[i][k] * w[k][j];
                auto q = num.div_exact(prev);
                if (!q) throw LogicError("gram_det: inexact fraction-free step");
                w[i][j] = *q;
            }
        }
        prev = w[k][k];
    }
    return sign < 0 ? -w[n - 1][n - 1] : w[n - 1][n - 1];
}

namespace {

std::vector<std::vector<QuadInt>> leading_block(const std::vector<std::vector<QuadInt>>& a,
                                                std::size_t k) {
    std::vector<std::vector<QuadInt>> out(k);
    for (std::size_t i = 0; i < k; ++i)
        out[i].assign(a[i].begin(), a[i].begin() + k);
    return out;
}

// adj(A) with adj_ij = (-1)^(i+j) det(A without row j, column i)
std::vector<std::vector<QuadInt>> adjugate(const Field& f,
                                           const std::vector<std::vector<QuadInt>>& a) {
    std::size_t n = a.size();
    std::vector<std::vector<QuadInt>> adj(n, std::vector<QuadInt>(n));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            std::vector<std::vector<QuadInt>> sub;
            for (std::size_t r = 0; r < n; ++r) {
                if (r == j) continue;
                std::vector<QuadInt> row;
                for (std::size_t c = 0; c < n; ++c)
                    if (c != i) row.push_back(a[r][c]);
                sub.push_back(std::move(row));
            }
            QuadInt det = gram_det(f, sub);
            adj[i][j] = ((i + j) % 2 == 0) ? det : -det;
        }
    }
    return adj;
}

}  // namespace

GramLattice make_lattice(const std::vector<std::vector<QuadInt>>& entries) {
    std::size_t n = entries.size();
    if (n == 0) throw OutOfRange("make_lattice: empty matrix");
    for (const auto& row : entries)
        if (row.size() != n) throw NotSymmetric("make_lattice: matrix is not square");
    const Field& f = entries[0][0].field();
    for (const auto& row : entries)
        for (const auto& e : row) require_same_field(e.field(), f, "make_lattice");
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (entries[i][j] != entries[j][i])
                throw NotSymmetric("make_lattice: entry (" + std::to_string(i) + "," +
                                   std::to_string(j) + ") breaks symmetry");
    for (std::size_t k = 1; k <= n; ++k) {
        QuadInt minor = gram_det(f, leading_block(entries, k));
        if (!minor.is_totally_positive())
            throw NotTotallyPositiveDefinite("make_lattice: leading minor of order " +
                                             std::to_string(k) + " is " + minor.str() +
                                             ", not totally positive");
    }
    return GramLattice{f, n, entries};
}

GramLattice diagonal_lattice(const Field& f, const std::vector<QuadInt>& diag) {
    std::size_t n = diag.size();
    std::vector<std::vector<QuadInt>> a(n, std::vector<QuadInt>(n, QuadInt::integer(f, 0)));
    for (std::size_t i = 0; i < n; ++i) a[i][i] = diag[i];
    return make_lattice(a);
}

namespace {

// coordinate "negative" in the canonical order (used to normalize signs)
bool canonically_negative(const QuadInt& e) {
    return e.y() < 0 || (e.y() == 0 && e.x() < 0);
}

QuadRat embedding(const QuadRat& v, int which) { return which == 0 ? v : v.conj(); }

}  // namespace

std::optional<std::vector<QuadInt>> represents(const GramLattice& lat, const QuadInt& target) {
    const Field& f = target.field();
    if (lat.n > 0) require_same_field(lat.field, f, "represents");
    if (!target.is_zero() && !target.is_totally_positive())
        throw NotTotallyPositive("represents: target must be totally positive or zero");
    if (target.is_zero())  // positive definite: only the zero vector
        return std::vector<QuadInt>(lat.n, QuadInt::integer(f, 0));
    if (lat.n == 0) return std::nullopt;

    // exact A = L D L^T over Q(sqrt D): d[j] totally positive, l[i][j] for i > j
    std::size_t n = lat.n;
    QuadRat zero(f, 0, 0);
    std::vector<QuadRat> d(n, zero);
    std::vector<std::vector<QuadRat>> l(n, std::vector<QuadRat>(n, zero));
    for (std::size_t j = 0; j < n; ++j) {
        QuadRat s = QuadRat::of(lat.a[j][j]);
        for (std::size_t k = 0; k < j; ++k) s = s - l[j][k] * l[j][k] * d[k];
        d[j] = s;
        for (std::size_t i = j + 1; i < n; ++i) {
            QuadRat t = QuadRat::of(lat.a[i][j]);
            for (std::size_t k = 0; k < j; ++k) t = t - l[i][k] * l[j][k] * d[k];
            l[i][j] = t / d[j];
        }
    }

    // x^T A x = sum_j d_j (x_j + o_j)^2 with o_j = sum_{i>j} l_ij x_i; walk
    // the coordinates from the back, keeping the unconsumed budget exact
    const mpq_class quarter(1, 4);
    std::vector<QuadInt> x(n, QuadInt::integer(f, 0));
    std::vector<QuadRat> off(n, zero);
    std::function<bool(long, const QuadRat&)> walk = [&](long level,
                                                         const QuadRat& remaining) -> bool {
        if (level < 0) return remaining.is_zero();
        std::size_t j = static_cast<std::size_t>(level);
        mpq_class lo[2], hi[2];
        for (int e = 0; e < 2; ++e) {
            QuadRat ratio = embedding(remaining / d[j], e);
            if (ratio.sign() < 0) return false;
            mpq_class q_ub = ratio.upper_within(quarter);
            if (q_ub < 0) q_ub = 0;
            mpq_class s_ub = ub_sqrt(q_ub);
            QuadRat center = embedding(-off[j], e);
            lo[e] = center.lower_within(quarter) - s_ub;
            hi[e] = center.upper_within(quarter) + s_ub;
        }
        EmbRect rect{lo[0], hi[0], lo[1], hi[1]};
        for (const QuadInt& cand : elements_in_rect(f, rect)) {
            QuadRat y = QuadRat::of(cand) + off[j];
            QuadRat rem = remaining - d[j] * y * y;
            if (rem.sign() < 0 || rem.conj().sign() < 0) continue;
            x[j] = cand;
            auto saved = off;
            QuadRat cq = QuadRat::of(cand);
            for (std::size_t jj = 0; jj < j; ++jj) off[jj] = off[jj] + l[j][jj] * cq;
            if (walk(level - 1, rem)) return true;
            off = std::move(saved);
        }
        return false;
    };
    if (!walk(static_cast<long>(n) - 1, QuadRat::of(target))) return std::nullopt;

    for (std::size_t i = 0; i < n; ++i) {
        if (x[i].is_zero()) continue;
        if (canonically_negative(x[i]))
            for (auto& c : x) c = -c;
        break;
    }
    QuadInt check = QuadInt::integer(f, 0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) check = check + lat.a[i][j] * x[i] * x[j];
    if (check != target) throw LogicError("represents: solution failed verification");
    return x;
}

std::optional<QuadInt> truant(const GramLattice& lat, const std::vector<QuadInt>& queue) {
    for (const QuadInt& e : queue)
        if (!represents(lat, e)) return e;
    return std::nullopt;
}

namespace {

struct SignedPerm {
    std::vector<std::size_t> p;  // new index -> old index
    unsigned signs;              // bit i set: negate coordinate i
};

// signed permutations of the basis fixing the Gram matrix; permutations are
// restricted to indices with equal diagonal (capped to keep this cheap)
std::vector<SignedPerm> gram_stabilizer(const GramLattice& lat) {
    std::size_t n = lat.n;
    std::vector<std::vector<std::size_t>> perms;
    std::vector<std::size_t> idx(n);
    for (std::size_t i = 0; i < n; ++i) idx[i] = i;
    long perm_budget = 720;
    std::function<void(std::size_t)> gen = [&](std::size_t pos) {
        if (perm_budget <= 0) return;
        if (pos == n) {
            perms.push_back(idx);
            --perm_budget;
            return;
        }
        for (std::size_t i = pos; i < n; ++i) {
            if (lat.a[idx[i]][idx[i]] != lat.a[pos][pos]) continue;
            std::swap(idx[pos], idx[i]);
            gen(pos + 1);
            std::swap(idx[pos], idx[i]);
        }
    };
    gen(0);
    if (perm_budget <= 0) {  // too symmetric; fall back to signs only
        perms.clear();
        std::vector<std::size_t> id(n);
        for (std::size_t i = 0; i < n; ++i) id[i] = i;
        perms.push_back(id);
    }

    std::vector<SignedPerm> out;
    for (const auto& p : perms) {
        for (unsigned mask = 0; mask < (1u << n); ++mask) {
            bool ok = true;
            for (std::size_t i = 0; i < n && ok; ++i) {
                for (std::size_t j = i; j < n && ok; ++j) {
                    int s = ((mask >> i) & 1) == ((mask >> j) & 1) ? 1 : -1;
                    const QuadInt& moved = lat.a[p[i]][p[j]];
                    ok = (s > 0) ? moved == lat.a[i][j] : -moved == lat.a[i][j];
                }
            }
            if (ok) out.push_back({p, mask});
        }
    }
    return out;
}

bool vec_less(const std::vector<QuadInt>& a, const std::vector<QuadInt>& b) {
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] != b[i]) return a[i].canonical_less(b[i]);
    return false;
}

}  // namespace

std::vector<GramLattice> escalate(const GramLattice& lat, const QuadInt& target) {
    const Field& f = target.field();
    if (lat.n > 0) require_same_field(lat.field, f, "escalate");
    if (represents(lat, target))
        throw AlreadyRepresented("escalate: " + target.str() + " is already represented");
    if (lat.n == 0) return {make_lattice({{target}})};

    std::size_t n = lat.n;
    std::vector<std::vector<QuadInt>> cands(n);
    for (std::size_t i = 0; i < n; ++i) cands[i] = dominated_squares(lat.a[i][i] * target);

    QuadInt det_a = gram_det(f, lat.a);
    auto adj_a = adjugate(f, lat.a);
    auto stab = gram_stabilizer(lat);

    std::vector<GramLattice> out;
    std::vector<std::size_t> pick(n, 0);
    std::vector<QuadInt> c(n, QuadInt::integer(f, 0));
    while (true) {
        for (std::size_t i = 0; i < n; ++i) c[i] = cands[i][pick[i]];
        // Schur complement: det of the extension is target*det(A) - c^T adj(A) c
        QuadInt q = QuadInt::integer(f, 0);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) q = q + adj_a[i][j] * c[i] * c[j];
        QuadInt det_ext = target * det_a - q;
        if (det_ext.is_totally_positive()) {
            // keep only the greatest vector of its symmetry orbit
            bool canonical = true;
            std::vector<QuadInt> image(n, QuadInt::integer(f, 0));
            for (const auto& sp : stab) {
                for (std::size_t i = 0; i < n; ++i) {
                    image[i] = c[sp.p[i]];
                    if ((sp.signs >> i) & 1) image[i] = -image[i];
                }
                if (vec_less(c, image)) {
                    canonical = false;
                    break;
                }
            }
            if (canonical) {
                auto ext = lat.a;
                for (std::size_t i = 0; i < n; ++i) ext[i].push_back(c[i]);
                std::vector<QuadInt> last = c;
                last.push_back(target);
                ext.push_back(std::move(last));
                out.push_back(make_lattice(ext));
            }
        }
        std::size_t i = 0;
        while (i < n && ++pick[i] == cands[i].size()) pick[i++] = 0;
        if (i == n) break;
    }
    return out;
}

RankBound lower_bound_search(const Field& f, const std::vector<QuadInt>& queue,
                             int max_depth) {
    if (max_depth < 1) throw OutOfRange("lower_bound_search: max_depth must be >= 1");
    if (queue.empty() || !queue[0].is_one())
        throw QueueInvalid("lower_bound_search: queue must start with 1");
    for (const QuadInt& e : queue) {
        require_same_field(e.field(), f, "lower_bound_search");
        if (!e.is_totally_positive())
            throw QueueInvalid("lower_bound_search: queue element " + e.str() +
                               " is not totally positive");
    }
    for (std::size_t i = 0; i < queue.size(); ++i)
        for (std::size_t j = i + 1; j < queue.size(); ++j)
            if (queue[i] == queue[j])
                throw QueueInvalid("lower_bound_search: duplicate queue element " +
                                   queue[i].str());

    RankBound out;
    out.field = f;
    out.queue = queue;
    out.exhaustive = true;
    out.levels.push_back({EscalationNode{GramLattice{f, 0, {}}, -1, QuadInt(), {}}});
    out.tree_summary.push_back(1);
    for (int depth = 1; depth <= max_depth; ++depth) {
        std::vector<EscalationNode> next;
        const auto& level = out.levels.back();
        for (std::size_t idx = 0; idx < level.size(); ++idx) {
            auto t = truant(level[idx].lattice, queue);
            if (!t) return out;  // a rank depth-1 branch covers the whole queue
            for (auto& child : escalate(level[idx].lattice, *t)) {
                std::vector<QuadInt> cross(child.a[child.n - 1].begin(),
                                           child.a[child.n - 1].end() - 1);
                next.push_back(
                    {std::move(child), static_cast<int>(idx), *t, std::move(cross)});
            }
        }
        out.bound = depth;
        out.tree_summary.push_back(static_cast<long>(next.size()));
        out.levels.push_back(std::move(next));
    }
    return out;
}

namespace {

// can g be written as a sum of parts lying in pairwise distinct classes drawn
// from avail?  (A part may be g itself.)
bool splits_into_counted(const QuadInt& g, const std::vector<QuadInt>& avail) {
    for (std::size_t i = 0; i < avail.size(); ++i)
        if (same_square_class(g, avail[i])) return true;
    for (const auto& [b, c] : decompose_all(g)) {
        for (std::size_t i = 0; i < avail.size(); ++i) {
            auto rest = avail;
            rest.erase(rest.begin() + i);
            if (same_square_class(b, avail[i]) && splits_into_counted(c, rest)) return true;
            if (same_square_class(c, avail[i]) && splits_into_counted(b, rest)) return true;
        }
    }
    return false;
}

}  // namespace

int diagonal_lower_bound(const Field& f, const std::vector<QuadInt>& elems) {
    for (const QuadInt& e : elems) {
        require_same_field(e.field(), f, "diagonal_lower_bound");
        if (!e.is_totally_positive())
            throw NotTotallyPositive("diagonal_lower_bound: " + e.str() +
                                     " is not totally positive");
    }
    std::vector<QuadInt> counted;
    for (const QuadInt& e : elems) {
        if (!is_indecomposable(e, IndecMode::oracle)) continue;
        bool seen = false;
        for (const QuadInt& r : counted) seen = seen || same_square_class(e, r);
        if (!seen) counted.push_back(e);
    }
    // remaining listed classes force a variable of their own unless they
    // split across distinct counted classes
    std::vector<std::vector<QuadInt>> leftover;
    for (const QuadInt& e : elems) {
        bool covered = false;
        for (const QuadInt& r : counted) covered = covered || same_square_class(e, r);
        if (covered) continue;
        bool placed = false;
        for (auto& bucket : leftover) {
            if (same_square_class(e, bucket[0])) {
                bucket.push_back(e);
                placed = true;
                break;
            }
        }
        if (!placed) leftover.push_back({e});
    }
    int extra = 0;
    for (const auto& bucket : leftover) {
        bool forced = false;
        for (const QuadInt& e : bucket) forced = forced || !splits_into_counted(e, counted);
        if (forced) ++extra;
    }
    return static_cast<int>(counted.size()) + extra;
}

}  // namespace uqf
