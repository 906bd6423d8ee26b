#include "genusforge/lie.hpp"

#include <algorithm>

#include "genusforge/errors.hpp"

namespace gf {

std::size_t GradedLie::total_dim() const {
    std::size_t t = 0;
    for (auto d : dims) t += d;
    return t;
}

F2Vector GradedLie::ad(int x, int g, const F2Vector& w) const {
    if (g < 1 || g > grades()) throw DomainError("grade out of range");
    if (x < 0 || x >= N()) throw DomainError("generator index out of range");
    const auto& col = br[static_cast<std::size_t>(g - 1)][static_cast<std::size_t>(x)];
    F2Vector out(dim(g + 1));
    for (std::size_t k = 0; k < w.size(); ++k)
        if (w.get(k)) out ^= col[k];
    return out;
}

F2Vector GradedLie::bracket(const F2Vector& u, int g, const F2Vector& w) const {
    F2Vector out(dim(g + 1));
    for (int x = 0; x < N(); ++x)
        if (u.get(static_cast<std::size_t>(x))) out ^= ad(x, g, w);
    return out;
}

F2Vector GradedLie::nested(const Tuple& t) const {
    if (t.empty()) throw DomainError("empty bracket");
    F2Vector w = F2Vector::unit(dim(1), static_cast<std::size_t>(t.back()));
    int g = 1;
    for (auto it = t.rbegin() + 1; it != t.rend(); ++it) {
        if (g >= grades()) return F2Vector(0);
        w = ad(*it, g, w);
        ++g;
    }
    return w;
}

namespace {

// Echelon rows carrying a tag, for coordinates on a quotient S / S'.
class TaggedEchelon {
public:
    void add(std::uint64_t v, std::uint64_t tag) {
        for (const auto& r : rows_)
            if (v & lead(r.first)) {
                v ^= r.first;
                tag ^= r.second;
            }
        if (v) rows_.emplace_back(v, tag);
    }
    // Returns (residue, tag).
    std::pair<std::uint64_t, std::uint64_t> reduce(std::uint64_t v) const {
        std::uint64_t tag = 0;
        for (const auto& r : rows_)
            if (v & lead(r.first)) {
                v ^= r.first;
                tag ^= r.second;
            }
        return {v, tag};
    }
    std::size_t size() const { return rows_.size(); }

private:
    static std::uint64_t lead(std::uint64_t v) { return std::uint64_t{1} << (63 - __builtin_clzll(v)); }
    std::vector<std::pair<std::uint64_t, std::uint64_t>> rows_;
};

struct GradeQuotient {
    TaggedEchelon ech;
    std::vector<std::uint64_t> reps;  // kernel masks of the basis classes
};

F2Vector tag_vector(std::size_t len, std::uint64_t tag) { return F2Vector::from_mask(len, tag); }

}  // namespace

GradedLie lie_from_group(const ExpansionGroup& G) {
    const auto series = descending_central_series(G);  // G^(2), G^(3), ... nonzero terms
    const int N = G.num_generators();
    GradedLie L;
    L.shape = G.shape();
    L.dims.push_back(static_cast<std::size_t>(N));

    // quotient coordinates for grade g = 2 .. c
    std::vector<GradeQuotient> q(series.size());
    for (std::size_t t = 0; t < series.size(); ++t) {
        auto& gq = q[t];
        if (t + 1 < series.size())
            for (auto v : series[t + 1].basis()) gq.ech.add(v, 0);
        for (auto v : series[t].basis()) {
            const auto before = gq.ech.size();
            const auto bitpos = gq.reps.size();
            if (bitpos >= 64) throw ResourceError("grade too large for word coordinates");
            gq.ech.add(v, std::uint64_t{1} << bitpos);
            if (gq.ech.size() > before) gq.reps.push_back(v);
        }
        L.dims.push_back(gq.reps.size());
    }
    const int grades = L.grades();
    auto coords = [&](int g, std::uint64_t w) {
        // w in G^(g); returns its class in L_g (empty vector when g is past the top)
        if (g > grades) {
            if (w) throw ClassificationViolation("commutator escapes the last term of the series");
            return F2Vector(0);
        }
        const auto [res, tag] = q[static_cast<std::size_t>(g - 2)].ech.reduce(w);
        if (res) throw ClassificationViolation("commutator not in the expected series term");
        return tag_vector(L.dim(g), tag);
    };

    const auto& K = G.kernel();
    L.br.resize(static_cast<std::size_t>(grades));
    L.labels.resize(static_cast<std::size_t>(grades));
    for (int x = 0; x < N; ++x) L.labels[0].push_back("g" + std::to_string(x + 1));
    for (int g = 2; g <= grades; ++g)
        for (std::size_t k = 0; k < L.dim(g); ++k) L.labels[static_cast<std::size_t>(g - 1)].push_back("c" + std::to_string(g) + "." + std::to_string(k + 1));

    for (int g = 1; g <= grades; ++g) {
        auto& tab = L.br[static_cast<std::size_t>(g - 1)];
        tab.assign(static_cast<std::size_t>(N), {});
        for (int x = 0; x < N; ++x)
            for (std::size_t k = 0; k < L.dim(g); ++k) {
                std::uint64_t w;
                if (g == 1) {
                    const auto c = G.commutator(G.generator(x), G.generator(static_cast<int>(k)));
                    w = K.coord[c];
                } else {
                    const auto r = q[static_cast<std::size_t>(g - 2)].reps[k];
                    w = G.act_on_kernel(x, r) ^ r;
                }
                tab[static_cast<std::size_t>(x)].push_back(coords(g + 1, w));
            }
    }
    return L;
}

// ------------------------------------------------------------ pointed-set model

namespace {

std::vector<Subset> subsets_of_size(int n, int i) {
    std::vector<Subset> out;
    for (Subset A = 1; A <= full_set(n); ++A)
        if (popcount(A) == i) out.push_back(A);
    return out;
}

int rank_in(Subset A, int x) { return popcount(A & (bit(x) - 1)); }

}  // namespace

GradedLie governing_algebra(int n) {
    if (n < 1) throw DomainError("n must be positive");
    GradedLie L;
    L.shape = Shape::ones(n);
    std::vector<std::vector<Subset>> by_size(static_cast<std::size_t>(n + 1));
    for (int i = 1; i <= n; ++i) {
        by_size[static_cast<std::size_t>(i)] = subsets_of_size(n, i);
        L.dims.push_back(i == 1 ? static_cast<std::size_t>(n) : by_size[static_cast<std::size_t>(i)].size() * static_cast<std::size_t>(i - 1));
    }
    auto block_index = [&](int i, Subset A) {
        const auto& v = by_size[static_cast<std::size_t>(i)];
        return static_cast<std::size_t>(std::lower_bound(v.begin(), v.end(), A) - v.begin());
    };
    // e_(A,p) + e_(A,q) with p, q at ranks rp < rq of A: sum of chain vectors rp .. rq-1
    auto pointed_pair = [&](Subset A, int rp, int rq) {
        const int i = popcount(A);
        F2Vector v(L.dim(i));
        const std::size_t base = block_index(i, A) * static_cast<std::size_t>(i - 1);
        for (int m = std::min(rp, rq); m < std::max(rp, rq); ++m) v.flip(base + static_cast<std::size_t>(m));
        return v;
    };

    L.br.resize(static_cast<std::size_t>(n));
    L.labels.resize(static_cast<std::size_t>(n));
    for (int x = 0; x < n; ++x) L.labels[0].push_back("e" + std::to_string(x + 1));
    for (int i = 2; i <= n; ++i)
        for (Subset A : by_size[static_cast<std::size_t>(i)]) {
            const auto el = elements(A);
            for (int m = 0; m + 1 < i; ++m)
                L.labels[static_cast<std::size_t>(i - 1)].push_back("(" + subset_to_string(A) + "," + std::to_string(el[static_cast<std::size_t>(m)] + 1) + ")+(" +
                                                                    subset_to_string(A) + "," + std::to_string(el[static_cast<std::size_t>(m + 1)] + 1) + ")");
        }

    for (int i = 1; i <= n; ++i) {
        auto& tab = L.br[static_cast<std::size_t>(i - 1)];
        tab.assign(static_cast<std::size_t>(n), std::vector<F2Vector>(L.dim(i), F2Vector(L.dim(i + 1))));
        for (int j = 0; j < n; ++j) {
            if (i == 1) {
                for (int x = 0; x < n; ++x) {
                    if (x == j) continue;
                    const Subset A = bit(j) | bit(x);
                    tab[static_cast<std::size_t>(j)][static_cast<std::size_t>(x)] = pointed_pair(A, 0, 1);
                }
                continue;
            }
            for (Subset A : by_size[static_cast<std::size_t>(i)]) {
                if (has(A, j)) continue;
                const Subset B = A | bit(j);
                const auto el = elements(A);
                const std::size_t base = block_index(i, A) * static_cast<std::size_t>(i - 1);
                for (int m = 0; m + 1 < i; ++m)
                    tab[static_cast<std::size_t>(j)][base + static_cast<std::size_t>(m)] =
                        pointed_pair(B, rank_in(B, el[static_cast<std::size_t>(m)]), rank_in(B, el[static_cast<std::size_t>(m + 1)]));
            }
        }
    }
    return L;
}

// ------------------------------------------------------------- dual tensor model

namespace {

GradedLie dual_algebra(const Shape& s, bool use_gov) {
    const int N = s.N();
    if (N < 1) throw DomainError("shape must be nonempty");
    const Subset all = full_set(N);
    // basis tensors per grade
    std::vector<TupleSpace> spaces;
    std::vector<std::vector<F2Vector>> basis;
    for (int i = 1; i <= N && (i == 1 || i <= s.n()); ++i) {
        TupleSpace sp(N, i, all);
        std::vector<F2Vector> b;
        if (i == 1) {
            for (int y = 0; y < N; ++y) b.push_back(F2Vector::unit(sp.size(), static_cast<std::size_t>(y)));
        } else {
            if (use_gov) {
                for (const auto& t : gov_space_general(s, i)) b.push_back(t.values());
                row_reduce(b);
            } else {
                b = cons_space_general(s, i).basis;
            }
        }
        if (b.empty()) break;
        spaces.push_back(sp);
        basis.push_back(std::move(b));
    }
    const int grades = static_cast<int>(basis.size());

    GradedLie L;
    L.shape = s;
    for (const auto& b : basis) L.dims.push_back(b.size());
    L.labels.resize(static_cast<std::size_t>(grades));
    for (int g = 1; g <= grades; ++g)
        for (std::size_t k = 0; k < L.dim(g); ++k)
            L.labels[static_cast<std::size_t>(g - 1)].push_back(g == 1 ? "e" + std::to_string(k + 1) : "c" + std::to_string(g) + "." + std::to_string(k + 1));
    L.br.resize(static_cast<std::size_t>(grades));

    for (int g = 1; g <= grades; ++g) {
        auto& tab = L.br[static_cast<std::size_t>(g - 1)];
        tab.assign(static_cast<std::size_t>(N), std::vector<F2Vector>(L.dim(g), F2Vector(L.dim(g + 1))));
        if (g == grades) continue;
        // columns: basis of grade g in tuple coordinates
        const auto& low = basis[static_cast<std::size_t>(g - 1)];
        F2Matrix M(spaces[static_cast<std::size_t>(g - 1)].size(), low.size());
        for (std::size_t c = 0; c < low.size(); ++c)
            for (std::size_t r = 0; r < low[c].size(); ++r)
                if (low[c].get(r)) M.set(r, c);
        const auto& high = basis[static_cast<std::size_t>(g)];
        for (std::size_t k = 0; k < high.size(); ++k) {
            const MultiTensor phi(spaces[static_cast<std::size_t>(g)], high[k]);
            const auto parts = p_decompose(phi);
            for (int j = 0; j < N; ++j) {
                const auto contracted = parts[static_cast<std::size_t>(j)].widen(all);
                const auto coef = M.solve(contracted.values());
                if (!coef) throw ClassificationViolation("contraction leaves the tensor space");
                // [e_j, e_l^*] evaluated on basis tensor k of grade g+1 is coef_l
                for (std::size_t l = 0; l < low.size(); ++l)
                    if (coef->get(l)) tab[static_cast<std::size_t>(j)][l].set(k);
            }
        }
    }
    return L;
}

}  // namespace

GradedLie governing_algebra_general(const Shape& s) { return dual_algebra(s, true); }
GradedLie cons_dual_algebra(const Shape& s) { return dual_algebra(s, false); }

// -------------------------------------------------------------------- axioms

LieAxiomReport check_lie_axioms(const GradedLie& L, const Shape& shape) {
    LieAxiomReport r;
    const int N = shape.N();
    auto fail = [&](const std::string& m) {
        if (r.failure.empty()) r.failure = m;
    };

    r.graded = L.N() == N && !L.dims.empty() && L.dims[0] == static_cast<std::size_t>(N) && L.br.size() == L.dims.size();
    for (int g = 1; r.graded && g <= L.grades(); ++g) {
        const auto& tab = L.br[static_cast<std::size_t>(g - 1)];
        if (tab.size() != static_cast<std::size_t>(N)) r.graded = false;
        for (const auto& col : tab) {
            if (col.size() != L.dim(g)) r.graded = false;
            for (const auto& v : col)
                if (v.size() != L.dim(g + 1)) r.graded = false;
        }
    }
    if (!r.graded) {
        fail("grading or table sizes inconsistent");
        return r;
    }
    auto e = [&](int x) { return F2Vector::unit(static_cast<std::size_t>(N), static_cast<std::size_t>(x)); };

    r.alternating = true;
    for (int x = 0; x < N; ++x) {
        if (!L.ad(x, 1, e(x)).is_zero()) {
            r.alternating = false;
            fail("[e" + std::to_string(x + 1) + ",e" + std::to_string(x + 1) + "] != 0");
        }
        for (int y = x + 1; y < N; ++y)
            if (L.ad(x, 1, e(y)) != L.ad(y, 1, e(x))) {
                r.alternating = false;
                fail("bracket not symmetric on grade 1");
            }
    }

    // Jacobi on distinct basis triples. With three grade-1 entries it is the usual
    // identity; with a higher-grade entry w it reads [x,[y,w]] = [y,[x,w]].
    bool jac = true, comm = true;
    for (int x = 0; x < N && L.grades() >= 2; ++x)
        for (int y = x + 1; y < N; ++y)
            for (int z = y + 1; z < N; ++z) {
                const auto s = L.ad(x, 2, L.ad(y, 1, e(z))) ^ L.ad(y, 2, L.ad(z, 1, e(x))) ^ L.ad(z, 2, L.ad(x, 1, e(y)));
                if (!s.is_zero()) {
                    jac = false;
                    fail("Jacobi fails on (" + std::to_string(x + 1) + "," + std::to_string(y + 1) + "," + std::to_string(z + 1) + ")");
                }
            }
    for (int g = 2; g + 1 <= L.grades(); ++g)
        for (std::size_t k = 0; k < L.dim(g); ++k) {
            const auto w = F2Vector::unit(L.dim(g), k);
            for (int x = 0; x < N; ++x)
                for (int y = x + 1; y < N; ++y)
                    if (L.ad(x, g + 1, L.ad(y, g, w)) != L.ad(y, g + 1, L.ad(x, g, w))) {
                        jac = false;
                        comm = false;
                        fail("commutativity fails at grade " + std::to_string(g));
                    }
        }
    r.jacobi = jac;
    r.axiom1 = r.graded && r.alternating && r.jacobi;
    r.axiom2 = true;  // brackets among degrees >= 2 vanish by construction

    r.axiom3 = true;
    for (int g = 1; g < L.grades(); ++g) {
        SpanBuilder sb(L.dim(g + 1));
        for (int x = 0; x < N; ++x)
            for (std::size_t k = 0; k < L.dim(g); ++k) sb.add(L.br[static_cast<std::size_t>(g - 1)][static_cast<std::size_t>(x)][k]);
        if (sb.dim() != L.dim(g + 1)) {
            r.axiom3 = false;
            fail("grade " + std::to_string(g + 1) + " not spanned by brackets");
        }
    }

    bool rep = true;
    for (int g = 1; g + 1 <= L.grades(); ++g)
        for (std::size_t k = 0; k < L.dim(g); ++k) {
            const auto w = F2Vector::unit(L.dim(g), k);
            for (int x = 0; x < N; ++x)
                if (!L.ad(x, g + 1, L.ad(x, g, w)).is_zero()) {
                    rep = false;
                    fail("[e" + std::to_string(x + 1) + ",[e" + std::to_string(x + 1) + ",w]] != 0 at grade " + std::to_string(g));
                }
        }
    r.axiom4 = comm && rep;

    if (!shape.all_ones()) {
        // ker(pi) in grade 1
        std::vector<F2Vector> kp;
        for (int b = 0; b < shape.n(); ++b) {
            const auto el = elements(shape.block_mask(b));
            for (std::size_t t = 1; t < el.size(); ++t) kp.push_back(e(el[0]) ^ e(el[t]));
        }
        for (const auto& u : kp) {
            for (const auto& v : kp)
                if (!L.bracket(u, 1, v).is_zero()) {
                    r.tilde1 = false;
                    fail("ker(pi) not abelian in grade 1");
                }
            for (int g = 2; g <= L.grades(); ++g)
                for (std::size_t k = 0; k < L.dim(g); ++k)
                    if (!L.bracket(u, g, F2Vector::unit(L.dim(g), k)).is_zero()) {
                        r.tilde1 = false;
                        fail("ker(pi) does not centralize grade " + std::to_string(g));
                    }
        }
    }
    // basis tuples with two positions in one block
    for (int len = 2; len <= L.grades(); ++len) {
        Tuple t(static_cast<std::size_t>(len), 0);
        while (true) {
            bool clash = false;
            for (int a = 0; a < len && !clash; ++a)
                for (int b = a + 1; b < len; ++b)
                    if (shape.block_of(t[static_cast<std::size_t>(a)]) == shape.block_of(t[static_cast<std::size_t>(b)])) {
                        clash = true;
                        break;
                    }
            if (clash && !L.nested(t).is_zero()) {
                r.tilde2 = false;
                fail("nested bracket with a repeated block does not vanish");
            }
            int p = len - 1;
            while (p >= 0 && ++t[static_cast<std::size_t>(p)] == N) t[static_cast<std::size_t>(p--)] = 0;
            if (p < 0) break;
        }
    }
    return r;
}

// ---------------------------------------------------------------- morphisms

std::size_t LieMorphism::kernel_dim() const {
    std::size_t t = 0;
    for (auto d : kernel_dims) t += d;
    return t;
}

F2Vector LieMorphism::apply(int g, const F2Vector& v) const {
    const auto& im = images.at(static_cast<std::size_t>(g - 1));
    F2Vector out(im.empty() ? 0 : im[0].size());
    for (std::size_t k = 0; k < v.size(); ++k)
        if (v.get(k)) out ^= im[k];
    return out;
}

namespace {

// Linear map determined by pairs (s_p, t_p); nullopt if two pairs disagree.
struct PairSolver {
    std::size_t dim_s, dim_t;
    std::vector<std::pair<F2Vector, F2Vector>> rows;
    std::vector<std::size_t> pivots;
    bool consistent = true;

    void add(F2Vector s, F2Vector t) {
        for (std::size_t r = 0; r < rows.size(); ++r)
            if (s.get(pivots[r])) {
                s ^= rows[r].first;
                t ^= rows[r].second;
            }
        if (s.is_zero()) {
            if (!t.is_zero()) consistent = false;
            return;
        }
        pivots.push_back(s.first_set());
        rows.emplace_back(std::move(s), std::move(t));
    }
    // images of unit vectors, assuming full rank
    std::vector<F2Vector> solve() {
        for (std::size_t r = rows.size(); r-- > 0;)
            for (std::size_t q = 0; q < r; ++q)
                if (rows[q].first.get(pivots[r])) {
                    rows[q].first ^= rows[r].first;
                    rows[q].second ^= rows[r].second;
                }
        std::vector<F2Vector> out(dim_s, F2Vector(dim_t));
        for (std::size_t r = 0; r < rows.size(); ++r) out[pivots[r]] = rows[r].second;
        return out;
    }
};

}  // namespace

LieMorphism lie_epimorphism(const GradedLie& source, const GradedLie& target) {
    if (source.N() != target.N() || source.dim(1) != target.dim(1)) throw DomainError("algebras have different grade-1 spaces");
    const int N = source.N();
    LieMorphism f;
    std::vector<F2Vector> id;
    for (int x = 0; x < N; ++x) id.push_back(F2Vector::unit(static_cast<std::size_t>(N), static_cast<std::size_t>(x)));
    f.images.push_back(id);
    f.kernel_dims.push_back(0);
    for (int g = 1; g < source.grades(); ++g) {
        PairSolver ps{source.dim(g + 1), target.dim(g + 1), {}, {}, true};
        for (int x = 0; x < N; ++x)
            for (std::size_t k = 0; k < source.dim(g); ++k) {
                const auto s = source.br[static_cast<std::size_t>(g - 1)][static_cast<std::size_t>(x)][k];
                const auto t = g <= target.grades() ? target.ad(x, g, f.images[static_cast<std::size_t>(g - 1)][k]) : F2Vector(0);
                ps.add(s, t.size() == ps.dim_t ? t : F2Vector(ps.dim_t));
            }
        if (!ps.consistent) throw ClassificationViolation("bracket extension is inconsistent at grade " + std::to_string(g + 1));
        if (ps.rows.size() != source.dim(g + 1)) throw PreconditionError("source grade " + std::to_string(g + 1) + " is not generated by brackets");
        f.images.push_back(ps.solve());
        f.kernel_dims.push_back(source.dim(g + 1) - rank_of(f.images.back()));
    }
    f.surjective = target.grades() <= source.grades();
    for (int g = 1; g <= target.grades() && f.surjective; ++g)
        if (rank_of(f.images[static_cast<std::size_t>(g - 1)]) != target.dim(g)) f.surjective = false;
    f.injective = f.kernel_dim() == 0;
    return f;
}

std::vector<std::vector<F2Vector>> pairing_identification(int n) {
    const Shape s = Shape::ones(n);
    std::vector<std::vector<F2Vector>> out;
    std::vector<F2Vector> g1;
    for (int x = 0; x < n; ++x) g1.push_back(F2Vector::unit(static_cast<std::size_t>(n), static_cast<std::size_t>(x)));
    out.push_back(g1);
    for (int i = 2; i <= n; ++i) {
        const auto cons = cons_space_general(s, i).basis;
        // spanning family phi_(A,x) in the order (A ascending, x ascending)
        std::vector<std::pair<Subset, int>> labels;
        std::vector<F2Vector> family;
        for (Subset A : subsets_of_size(n, i))
            for (int x : elements(A)) {
                labels.emplace_back(A, x);
                family.push_back(governing_tensor(n, A, x).widen(full_set(n)).values());
            }
        F2Matrix M(family[0].size(), family.size());
        for (std::size_t c = 0; c < family.size(); ++c)
            for (std::size_t r = 0; r < family[c].size(); ++r)
                if (family[c].get(r)) M.set(r, c);
        std::vector<F2Vector> mu;
        for (const auto& c : cons) {
            const auto sol = M.solve(c);
            if (!sol) throw ClassificationViolation("constraint kernel is larger than the governing span");
            mu.push_back(*sol);
        }
        // chain vector (A, a_m) + (A, a_{m+1}) evaluated on each Cons basis tensor
        std::vector<F2Vector> rows;
        for (Subset A : subsets_of_size(n, i)) {
            const auto el = elements(A);
            for (int m = 0; m + 1 < i; ++m) {
                F2Vector row(cons.size());
                for (std::size_t k = 0; k < cons.size(); ++k) {
                    bool v = false;
                    for (std::size_t c = 0; c < labels.size(); ++c)
                        if (mu[k].get(c) && labels[c].first == A && (labels[c].second == el[static_cast<std::size_t>(m)] || labels[c].second == el[static_cast<std::size_t>(m + 1)]))
                            v = !v;
                    row.set(k, v);
                }
                rows.push_back(row);
            }
        }
        out.push_back(rows);
    }
    return out;
}

}  // namespace gf
