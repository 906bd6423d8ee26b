#include "genusforge/expmaps.hpp"

#include <map>
#include <sstream>

#include "genusforge/errors.hpp"
#include "genusforge/tensors.hpp"

namespace gf {

namespace {

std::uint64_t label_key(const PhiLabel& l) {
    return (static_cast<std::uint64_t>(l.A) << 9) | (static_cast<std::uint64_t>(l.x) << 1) | (l.character ? 1U : 0U);
}

int parity64(std::uint64_t v) { return __builtin_popcountll(v) & 1; }

// Affine values along the BFS tree: f(e) = b(e) + <lam(e), c> with c the unknown
// generator values. Right-hand sides carry one bit per cocycle of a family.
struct EdgeSystem {
    std::vector<std::uint64_t> rhs_tree;
    std::vector<std::uint32_t> lam;
    std::vector<std::uint32_t> masks;  // echelon rows; pivot = lowest bit
    std::vector<std::uint64_t> rhs;
    std::vector<std::uint64_t> residuals;  // rhs left over after full reduction
    Obstruction first_bad;
    bool have_bad = false;

    void add_equation(std::uint32_t m, std::uint64_t r, std::uint32_t e, int s) {
        for (std::size_t k = 0; k < masks.size(); ++k)
            if ((m >> __builtin_ctz(masks[k])) & 1U) {
                m ^= masks[k];
                r ^= rhs[k];
            }
        if (m) {
            masks.push_back(m);
            rhs.push_back(r);
        } else if (r) {
            residuals.push_back(r);
            if (!have_bad) {
                have_bad = true;
                first_bad = Obstruction{e, s};
            }
        }
    }

    // Solution for the combination selector `sel` (bit k picks cocycle k); free unknowns are 0.
    std::uint32_t solve(std::uint64_t sel) const {
        std::uint32_t c = 0;
        for (std::size_t k = masks.size(); k-- > 0;) {
            const int p = __builtin_ctz(masks[k]);
            const int v = parity64(rhs[k] & sel) ^ __builtin_parity(masks[k] & c & ~bit(p));
            if (v) c |= bit(p);
        }
        return c;
    }
};

template <class Rhs>
EdgeSystem build_edges(const ExpansionGroup& G, Rhs th) {
    const std::size_t n = G.order();
    const int m = G.num_generators();
    if (m > 32) throw ResourceError("too many generators for the cochain solver");
    EdgeSystem sys;
    sys.rhs_tree.assign(n, 0);
    sys.lam.assign(n, 0);
    for (std::uint32_t e = 1; e < n; ++e) {
        const auto p = G.parent(e);
        const int s = G.parent_gen(e);
        sys.rhs_tree[e] = sys.rhs_tree[p] ^ th(p, s);
        sys.lam[e] = sys.lam[p] ^ bit(s);
    }
    for (int s = 0; s < m; ++s) {
        const auto g = G.generator(s);
        sys.add_equation(sys.lam[g] ^ bit(s), sys.rhs_tree[g], 0, s);
    }
    for (std::uint32_t e = 0; e < n; ++e)
        for (int s = 0; s < m; ++s) {
            const auto t = G.rmul(s, e);
            const std::uint32_t mask = sys.lam[t] ^ sys.lam[e] ^ bit(s);
            const std::uint64_t r = sys.rhs_tree[t] ^ sys.rhs_tree[e] ^ th(e, s);
            if (mask || r) sys.add_equation(mask, r, e, s);
        }
    return sys;
}

F2Vector realize_values(const EdgeSystem& sys, std::uint64_t sel) {
    const auto c = sys.solve(sel);
    F2Vector f(sys.lam.size());
    for (std::size_t e = 0; e < f.size(); ++e)
        if (parity64(sys.rhs_tree[e] & sel) ^ __builtin_parity(sys.lam[e] & c)) f.set(e);
    return f;
}

}  // namespace

std::string label_name(const PhiLabel& l) {
    std::ostringstream os;
    if (l.character)
        os << "chi_" << l.x + 1;
    else
        os << "Phi(" << subset_to_string(l.A) << "," << l.x + 1 << ")";
    return os.str();
}

PhiMap& PhiMap::operator^=(const PhiMap& o) {
    if (blocks != o.blocks) throw DomainError("maps live on different sub-shapes");
    coords ^= o.coords;
    return *this;
}

// ---- cocycles -------------------------------------------------------------

ThetaCocycle::ThetaCocycle(std::size_t order, std::vector<F2Vector> pool, std::vector<std::uint32_t> row_of)
    : pool_(std::move(pool)), row_(std::move(row_of)) {
    if (row_.size() != order) throw DomainError("cocycle needs one row per element");
    for (auto r : row_)
        if (r >= pool_.size() || pool_[r].size() != order) throw DomainError("cocycle row has the wrong length");
}

ThetaCocycle ThetaCocycle::from_rows(std::vector<F2Vector> rows) {
    const std::size_t n = rows.size();
    std::vector<std::uint32_t> idx(n);
    for (std::size_t k = 0; k < n; ++k) idx[k] = static_cast<std::uint32_t>(k);
    return ThetaCocycle(n, std::move(rows), std::move(idx));
}

ThetaCocycle ThetaCocycle::operator^(const ThetaCocycle& o) const {
    if (order() != o.order()) throw DomainError("cocycles on different groups");
    std::map<std::pair<std::uint32_t, std::uint32_t>, std::uint32_t> seen;
    std::vector<F2Vector> pool;
    std::vector<std::uint32_t> row(order());
    for (std::size_t s = 0; s < order(); ++s) {
        const auto key = std::make_pair(row_[s], o.row_[s]);
        auto it = seen.find(key);
        if (it == seen.end()) {
            it = seen.emplace(key, static_cast<std::uint32_t>(pool.size())).first;
            pool.push_back(pool_[key.first] ^ o.pool_[key.second]);
        }
        row[s] = it->second;
    }
    return ThetaCocycle(order(), std::move(pool), std::move(row));
}

ThetaCocycle coboundary(const ExpansionGroup& G, const F2Vector& f) {
    if (f.size() != G.order()) throw DomainError("cochain has the wrong length");
    std::vector<F2Vector> rows;
    for (std::uint32_t s = 0; s < G.order(); ++s) {
        F2Vector r(G.order());
        for (std::uint32_t t = 0; t < G.order(); ++t)
            if (f.get(G.mul(s, t)) ^ f.get(s) ^ f.get(t)) r.set(t);
        rows.push_back(std::move(r));
    }
    return ThetaCocycle::from_rows(std::move(rows));
}

std::uint64_t cocycle_violations(const ExpansionGroup& G, const ThetaCocycle& th) {
    if (th.order() != G.order()) throw DomainError("cocycle on a different group");
    const auto n = static_cast<std::uint32_t>(G.order());
    std::uint64_t bad = 0;
    for (std::uint32_t a = 0; a < n; ++a)
        for (std::uint32_t b = 0; b < n; ++b) {
            const auto ab = G.mul(a, b);
            for (std::uint32_t c = 0; c < n; ++c)
                if (th.at(a, b) ^ th.at(ab, c) ^ th.at(a, G.mul(b, c)) ^ th.at(b, c)) ++bad;
        }
    return bad;
}

bool same_cocycle(const ThetaCocycle& a, const ThetaCocycle& b) {
    if (a.order() != b.order()) return false;
    for (std::uint32_t s = 0; s < a.order(); ++s)
        if (a.row(s) != b.row(s)) return false;
    return true;
}

std::optional<F2Vector> solve_cochain(const ExpansionGroup& G, const ThetaCocycle& th, Obstruction* witness) {
    if (th.order() != G.order()) throw DomainError("cocycle on a different group");
    if (th.at(0, 0)) throw PreconditionError("cocycle is not normalized: theta(1,1) = 1");
    std::vector<std::uint32_t> gens;
    for (int s = 0; s < G.num_generators(); ++s) gens.push_back(G.generator(s));
    const auto sys = build_edges(G, [&](std::uint32_t e, int s) -> std::uint64_t { return th.at(e, gens[static_cast<std::size_t>(s)]) ? 1U : 0U; });
    if (sys.have_bad) {
        if (witness) *witness = sys.first_bad;
        return std::nullopt;
    }
    return realize_values(sys, 1);
}

// ---- the Phi space --------------------------------------------------------

PhiSpace::PhiSpace(const Shape& s, Exec exec) : shape_(s), G_(build_universal_general(s, exec)) {
    const int n = s.n();
    if (n > 6) throw ResourceError("polynomial coordinates need n <= 6");
    G_.build_table();
    series_ = descending_central_series(G_);
    labels_.resize(std::size_t{1} << n);
    for (Subset K = 0; K < (Subset{1} << n); ++K) {
        auto& L = labels_[K];
        for (int x = 0; x < s.N(); ++x)
            if (has(K, s.block_of(x))) L.push_back(PhiLabel{true, bit(s.block_of(x)), x});
        for (int size = 2; size <= popcount(K); ++size)
            for (Subset A = 1; A < (Subset{1} << n); ++A) {
                if (popcount(A) != size || (A & ~K)) continue;
                for (int i : elements(A))
                    for (int x = s.first_of(i); x < s.first_of(i) + s.k(i); ++x) L.push_back(PhiLabel{false, A, x});
            }
    }
    index_.resize(labels_.size());
    for (std::size_t K = 0; K < labels_.size(); ++K)
        for (std::size_t k = 0; k < labels_[K].size(); ++k) index_[K].emplace(label_key(labels_[K][k]), k);
}

const std::vector<PhiLabel>& PhiSpace::labels(Subset blocks) const {
    if (blocks & ~all_blocks()) throw DomainError("block set leaves [n]");
    return labels_[blocks];
}

std::optional<std::size_t> PhiSpace::index_of(Subset blocks, const PhiLabel& l) const {
    if (blocks & ~all_blocks()) throw DomainError("block set leaves [n]");
    const auto& m = index_[blocks];
    const auto it = m.find(label_key(l));
    if (it == m.end()) return std::nullopt;
    return it->second;
}

PhiMap PhiSpace::zero(Subset blocks) const { return PhiMap{blocks, F2Vector(dim(blocks))}; }

PhiMap PhiSpace::basis_map(Subset blocks, std::size_t k) const {
    if (k >= dim(blocks)) throw DomainError("basis index out of range");
    return PhiMap{blocks, F2Vector::unit(dim(blocks), k)};
}

PhiMap PhiSpace::character(int x) const {
    if (x < 0 || x >= shape_.N()) throw DomainError("index outside [N]");
    auto f = zero(all_blocks());
    f.coords.set(*index_of(all_blocks(), PhiLabel{true, bit(shape_.block_of(x)), x}));
    return f;
}

PhiMap PhiSpace::chi_A(Subset A, Subset within) const {
    if (A & ~within) throw DomainError("A must lie inside the block set");
    auto f = zero(within);
    if (A == 0) return f;
    for (int i : elements(A))
        for (int x = shape_.first_of(i); x < shape_.first_of(i) + shape_.k(i); ++x) {
            const PhiLabel l = popcount(A) == 1 ? PhiLabel{true, A, x} : PhiLabel{false, A, x};
            f.coords.flip(*index_of(within, l));
        }
    return f;
}

bool PhiSpace::value(const PhiLabel& l, std::uint32_t e) const {
    const auto c = G_.component(e, l.x);
    if (l.character) return c.poly & 1U;
    const Subset S = l.A & ~bit(shape_.block_of(l.x));
    return (c.poly >> S) & 1U;
}

F2Vector PhiSpace::table(const PhiLabel& l) const {
    F2Vector t(G_.order());
    for (std::uint32_t e = 0; e < G_.order(); ++e)
        if (value(l, e)) t.set(e);
    return t;
}

const std::vector<F2Vector>& PhiSpace::full_tables() const {
    if (tables_.empty()) {
        const auto& L = labels(all_blocks());
        std::vector<F2Vector> t(L.size());
        configured_threads();
#pragma omp parallel for schedule(dynamic)
        for (std::int64_t k = 0; k < static_cast<std::int64_t>(L.size()); ++k) t[static_cast<std::size_t>(k)] = table(L[static_cast<std::size_t>(k)]);
        tables_ = std::move(t);
    }
    return tables_;
}

F2Vector PhiSpace::values(const PhiMap& f) const {
    const auto& L = labels(f.blocks);
    if (f.coords.size() != L.size()) throw DomainError("coordinate vector has the wrong length");
    const auto& T = full_tables();
    F2Vector v(G_.order());
    for (std::size_t k = 0; k < L.size(); ++k)
        if (f.coords.get(k)) v ^= T[*index_of(all_blocks(), L[k])];
    return v;
}

Subset PhiSpace::block_chars(std::uint32_t e) const {
    const Subset p = G_.phi(e);
    Subset c = 0;
    for (int j = 0; j < shape_.n(); ++j)
        if (popcount(p & shape_.block_mask(j)) & 1) c |= bit(j);
    return c;
}

bool PhiSpace::chi_B(Subset B, std::uint32_t e) const { return B != 0 && (B & ~block_chars(e)) == 0; }

std::optional<PhiMap> PhiSpace::coords_of(const F2Vector& v) const {
    if (v.size() != G_.order()) throw DomainError("function has the wrong length");
    const std::size_t D = dim(all_blocks());
    if (solve_rows_.empty()) {
        const auto& T = full_tables();
        for (std::size_t k = 0; k < D; ++k) {
            F2Vector r = T[k], tag = F2Vector::unit(D, k);
            for (std::size_t q = 0; q < solve_rows_.size(); ++q)
                if (r.get(solve_piv_[q])) {
                    r ^= solve_rows_[q];
                    tag ^= solve_tags_[q];
                }
            if (r.is_zero()) throw ClassificationViolation("label tables are linearly dependent");
            solve_piv_.push_back(r.first_set());
            solve_rows_.push_back(std::move(r));
            solve_tags_.push_back(std::move(tag));
        }
    }
    F2Vector r = v, tag(D);
    for (std::size_t q = 0; q < solve_rows_.size(); ++q)
        if (r.get(solve_piv_[q])) {
            r ^= solve_rows_[q];
            tag ^= solve_tags_[q];
        }
    if (!r.is_zero()) return std::nullopt;
    return PhiMap{all_blocks(), tag};
}

PhiMap PhiSpace::P(int i, const PhiMap& f) const {
    if (!has(f.blocks, i)) throw DomainError("P_i needs block i in the sub-shape");
    const Subset K2 = f.blocks & ~bit(i);
    const auto& L = labels(f.blocks);
    auto out = zero(K2);
    for (std::size_t k = 0; k < L.size(); ++k) {
        if (!f.coords.get(k)) continue;
        const auto& l = L[k];
        if (l.character || !has(l.A, i) || shape_.block_of(l.x) == i) continue;
        const Subset A2 = l.A & ~bit(i);
        const PhiLabel l2{popcount(A2) == 1, A2, l.x};
        out.coords.flip(*index_of(K2, l2));
    }
    return out;
}

PhiMap PhiSpace::P_set(Subset B, const PhiMap& f) const {
    PhiMap g = f;
    for (int i : elements(B)) g = P(i, g);
    return g;
}

int PhiSpace::nil_deg(const PhiMap& f) const {
    const auto v = values(f);
    if (v.is_zero()) return 0;
    const auto& K = G_.kernel();
    for (int j = 1;; ++j) {
        const auto idx = static_cast<std::size_t>(j - 1);
        if (idx >= series_.size()) return j;
        bool vanish = true;
        for (auto b : series_[idx].basis())
            if (v.get(K.elem_of_coord[b])) vanish = false;
        if (vanish) return j;
    }
}

std::vector<PhiMap> PhiSpace::direct_layer(int j) const {
    if (j < 1) throw DomainError("layer index must be positive");
    const std::size_t D = dim(all_blocks());
    const auto idx = static_cast<std::size_t>(j - 1);
    std::vector<PhiMap> out;
    if (idx >= series_.size()) {
        for (std::size_t k = 0; k < D; ++k) out.push_back(basis_map(all_blocks(), k));
        return out;
    }
    const auto& K = G_.kernel();
    const auto& T = full_tables();
    F2Matrix M(0, D);
    for (auto b : series_[idx].basis()) {
        F2Vector r(D);
        const auto e = K.elem_of_coord[b];
        for (std::size_t k = 0; k < D; ++k)
            if (T[k].get(e)) r.set(k);
        M.append_row(std::move(r));
    }
    for (auto& v : M.kernel_basis()) out.push_back(PhiMap{all_blocks(), v});
    return out;
}

std::vector<PhiMap> PhiSpace::layer_one(Subset blocks) const {
    std::vector<PhiMap> out;
    const auto& L = labels(blocks);
    for (std::size_t k = 0; k < L.size(); ++k)
        if (L[k].character) out.push_back(basis_map(blocks, k));
    for (Subset A = 1; A <= blocks; ++A)
        if ((A & ~blocks) == 0 && popcount(A) >= 2) out.push_back(chi_A(A, blocks));
    return out;
}

// ---- checks ---------------------------------------------------------------

namespace {

// For each D: mismatches of c_D(st)+c_D(s)+c_D(t) = sum_{0 != S <= D} chi_S(s) c_{D-S}(t),
// with c_D = P_{[n]-D}(f). D = [n] is the universal equation.
std::uint64_t shifted_mismatches(const PhiSpace& S, const PhiMap& f, bool all_D) {
    const auto& G = S.group();
    if (!G.has_table()) throw ResourceError("exhaustive pair check needs a multiplication table", G.log2_order());
    const Subset full = S.all_blocks();
    std::vector<F2Vector> parts(std::size_t{1} << S.shape().n());
    for (Subset B = 0; B <= full; ++B) parts[B] = S.values(S.P_set(B, f));
    std::vector<Subset> ch(G.order());
    for (std::uint32_t e = 0; e < G.order(); ++e) ch[e] = S.block_chars(e);
    std::uint64_t bad = 0;
    for (Subset D = all_D ? 0 : full; D <= full; ++D) {
        const auto& c = parts[full & ~D];
        std::vector<F2Vector> F(parts.size());
        for (Subset t = 0; t <= full; ++t) {
            F[t] = F2Vector(G.order());
            const Subset m = t & D;
            for (Subset s = m; s; s = (s - 1) & m) F[t] ^= parts[(full & ~D) | s];
        }
        for (std::uint32_t a = 0; a < G.order(); ++a) {
            const auto& row = F[ch[a]];
            for (std::uint32_t b = 0; b < G.order(); ++b)
                if ((c.get(G.mul(a, b)) ^ c.get(a) ^ c.get(b)) != row.get(b)) ++bad;
        }
    }
    return bad;
}

}  // namespace

std::uint64_t universal_equation_mismatches(const PhiSpace& S, const PhiMap& f) {
    if (f.blocks != S.all_blocks()) throw DomainError("map must live on the full shape");
    return shifted_mismatches(S, f, false);
}

std::pair<bool, bool> lcomm_check(const PhiSpace& S, Subset A, int x, const std::vector<std::uint32_t>& tuple) {
    const auto& s = S.shape();
    if (x < 0 || x >= s.N()) throw DomainError("index outside [N]");
    const int b = s.block_of(x);
    if (popcount(A) < 2 || !has(A, b) || (A & ~S.all_blocks())) throw DomainError("need |A| >= 2 with block(x) in A");
    if (tuple.size() != static_cast<std::size_t>(popcount(A))) throw DomainError("tuple length must be |A|");
    const auto& G = S.group();
    const bool lhs = S.value(PhiLabel{false, A, x}, nested_commutator(G, tuple));
    std::vector<F2Vector> w;
    for (auto e : tuple) {
        F2Vector v(static_cast<std::size_t>(s.n()));
        const Subset c = S.block_chars(e);
        for (int j = 0; j < s.n(); ++j)
            if (j == b ? has(G.phi(e), x) : has(c, j)) v.set(static_cast<std::size_t>(j));
        w.push_back(std::move(v));
    }
    const bool rhs = governing_tensor(s.n(), A, b).eval_vectors(w);
    return {lhs, rhs};
}

bool shuffling_check(const PhiSpace& S, Subset A) {
    if (popcount(A) < 2 || (A & ~S.all_blocks())) throw DomainError("need |A| >= 2 inside [n]");
    const auto v = S.values(S.chi_A(A, S.all_blocks()));
    for (std::uint32_t e = 0; e < S.group().order(); ++e)
        if (v.get(e) != S.chi_B(A, e)) return false;
    return true;
}

RestrictionReport restriction_kernel_check(const PhiSpace& S) {
    RestrictionReport r;
    const Subset full = S.all_blocks();
    const auto& K = S.group().kernel();
    const auto& L = S.labels(full);
    r.phi_dim = L.size();
    r.commutator_dim = K.dim();
    F2Matrix M(0, L.size());
    for (auto e : K.basis) {
        F2Vector row(L.size());
        for (std::size_t k = 0; k < L.size(); ++k)
            if (S.value(L[k], e)) row.set(k);
        M.append_row(std::move(row));
    }
    r.restriction_rank = M.rank();
    r.surjective = r.restriction_rank == r.commutator_dim;
    const auto ker = M.kernel_basis();
    r.kernel_dim = ker.size();
    std::vector<F2Vector> ones;
    for (const auto& f : S.layer_one(full)) ones.push_back(f.coords);
    r.predicted_kernel_dim = static_cast<std::size_t>(S.shape().N()) + (std::size_t{1} << S.shape().n()) - static_cast<std::size_t>(S.shape().n()) - 1;
    r.kernel_matches = same_span(ker, ones) && rank_of(ones) == r.predicted_kernel_dim;
    return r;
}

CocycleView cocycle_view(const PhiSpace& S, const PhiMap& f) {
    if (f.blocks != S.all_blocks()) throw DomainError("map must live on the full shape");
    CocycleView v;
    for (Subset B = 0; B <= S.all_blocks(); ++B) v.parts.push_back(S.P_set(B, f));
    v.certified = shifted_mismatches(S, f, true) == 0;
    return v;
}

// ---- commuting vectors ----------------------------------------------------

namespace {

void check_shape(const PhiSpace& S, const CommVector& v) {
    const int n = S.shape().n();
    if (static_cast<int>(v.entries.size()) != n) throw DomainError("commuting vector needs one entry per block");
    for (int i = 0; i < n; ++i) {
        const auto& e = v.entries[static_cast<std::size_t>(i)];
        if (e.blocks != (S.all_blocks() & ~bit(i)) || e.coords.size() != S.dim(e.blocks))
            throw DomainError("entry " + std::to_string(i + 1) + " must live on [n] - {i}");
    }
}

}  // namespace

bool is_commuting(const PhiSpace& S, const CommVector& v) {
    check_shape(S, v);
    const int n = S.shape().n();
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (S.P(j, v.entries[static_cast<std::size_t>(i)]) != S.P(i, v.entries[static_cast<std::size_t>(j)])) return false;
    return true;
}

PhiMap comm_P(const PhiSpace& S, const CommVector& v, Subset B) {
    if (B == 0 || (B & ~S.all_blocks())) throw DomainError("B must be a nonempty block set");
    const int i = __builtin_ctz(B);
    return S.P_set(B & ~bit(i), v.entries[static_cast<std::size_t>(i)]);
}

ThetaCocycle theta(const PhiSpace& S, const CommVector& v) {
    if (!is_commuting(S, v)) throw DomainError("vector does not commute: P_j(Phi_i) != P_i(Phi_j)");
    const Subset full = S.all_blocks();
    const auto& G = S.group();
    std::vector<F2Vector> parts(std::size_t{full} + 1);
    for (Subset B = 1; B <= full; ++B) parts[B] = S.values(comm_P(S, v, B));
    std::vector<F2Vector> pool;
    for (Subset c = 0; c <= full; ++c) {
        F2Vector r(G.order());
        for (Subset s = c; s; s = (s - 1) & c) r ^= parts[s];
        pool.push_back(std::move(r));
    }
    std::vector<std::uint32_t> row(G.order());
    for (std::uint32_t e = 0; e < G.order(); ++e) row[e] = S.block_chars(e);
    return ThetaCocycle(G.order(), std::move(pool), std::move(row));
}

PhiMap realize_commuting_vector(const PhiSpace& S, const CommVector& v) {
    const auto th = theta(S, v);
    const auto f0 = solve_cochain(S.group(), th);
    if (!f0) throw ClassificationViolation("theta of a commuting vector is not a coboundary");
    const auto f = S.coords_of(*f0);
    if (!f) throw ClassificationViolation("solution of d(Phi) = theta leaves the Phi space");
    for (int i = 0; i < S.shape().n(); ++i)
        if (S.P(i, *f) != v.entries[static_cast<std::size_t>(i)]) throw ClassificationViolation("realized map has the wrong corners");
    return *f;
}

// ---- layers ---------------------------------------------------------------

bool same_subspace(const std::vector<PhiMap>& a, const std::vector<PhiMap>& b) {
    std::vector<F2Vector> va, vb;
    for (const auto& f : a) va.push_back(f.coords);
    for (const auto& f : b) vb.push_back(f.coords);
    if (!a.empty() && !b.empty() && a.front().blocks != b.front().blocks) return false;
    return same_span(va, vb);
}

std::vector<PhiMap> corner_layer(const PhiSpace& S, int i, int j) {
    const int n = S.shape().n();
    if (n < 2) throw DomainError("corner of a one-block shape is empty");
    if (i < 0 || i >= n) throw DomainError("block outside [n]");
    const PhiSpace C(S.shape().without(bit(i)));
    std::vector<int> block_map, index_map;
    for (int b = 0; b < n; ++b)
        if (b != i) block_map.push_back(b);
    for (int x = 0; x < S.shape().N(); ++x)
        if (S.shape().block_of(x) != i) index_map.push_back(x);
    const Subset K = S.all_blocks() & ~bit(i);
    const auto& CL = C.labels(C.all_blocks());
    std::vector<std::size_t> where;
    for (const auto& l : CL) {
        Subset A = 0;
        for (int b : elements(l.A)) A |= bit(block_map[static_cast<std::size_t>(b)]);
        const auto k = S.index_of(K, PhiLabel{l.character, A, index_map[static_cast<std::size_t>(l.x)]});
        if (!k) throw ClassificationViolation("corner label has no ambient counterpart");
        where.push_back(*k);
    }
    std::vector<PhiMap> out;
    for (const auto& f : C.direct_layer(j)) {
        auto g = S.zero(K);
        for (std::size_t k = 0; k < CL.size(); ++k)
            if (f.coords.get(k)) g.coords.set(where[k]);
        out.push_back(std::move(g));
    }
    return out;
}

LayerResult reconstruct_layer(const PhiSpace& S, int j, const std::vector<std::vector<PhiMap>>& corners) {
    const int n = S.shape().n();
    if (j < 2) throw DomainError("reconstruction starts at j = 2");
    if (n < 2) throw DomainError("reconstruction needs at least two blocks");
    if (static_cast<int>(corners.size()) != n) throw PreconditionError("need one corner space per block");
    struct Param {
        int block;
        PhiMap f;
    };
    std::vector<Param> params;
    for (int i = 0; i < n; ++i)
        for (const auto& f : corners[static_cast<std::size_t>(i)]) {
            if (f.blocks != (S.all_blocks() & ~bit(i)) || f.coords.size() != S.dim(f.blocks))
                throw PreconditionError("corner space " + std::to_string(i + 1) + " lives on the wrong sub-shape");
            params.push_back({i, f});
        }
    // Commuting conditions P_b(Phi_a) = P_a(Phi_b), one coordinate block per pair a < b.
    std::vector<std::pair<int, int>> pairs;
    std::vector<std::size_t> offset;
    std::size_t R = 0;
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b) {
            pairs.emplace_back(a, b);
            offset.push_back(R);
            R += S.dim(S.all_blocks() & ~bit(a) & ~bit(b));
        }
    std::vector<F2Vector> cols;
    for (const auto& p : params) {
        F2Vector col(R);
        for (std::size_t q = 0; q < pairs.size(); ++q) {
            const auto [a, b] = pairs[q];
            if (p.block != a && p.block != b) continue;
            const auto g = S.P(p.block == a ? b : a, p.f);
            for (std::size_t k = 0; k < g.coords.size(); ++k)
                if (g.coords.get(k)) col.set(offset[q] + k);
        }
        cols.push_back(std::move(col));
    }
    std::vector<F2Vector> comm;
    if (R == 0) {
        for (std::size_t k = 0; k < params.size(); ++k) comm.push_back(F2Vector::unit(params.size(), k));
    } else {
        comm = F2Matrix::from_rows(R, cols).transpose().kernel_basis();
    }
    auto vector_of = [&](const F2Vector& a) {
        CommVector v;
        for (int i = 0; i < n; ++i) v.entries.push_back(S.zero(S.all_blocks() & ~bit(i)));
        for (std::size_t k = 0; k < params.size(); ++k)
            if (a.get(k)) v.entries[static_cast<std::size_t>(params[k].block)] ^= params[k].f;
        return v;
    };

    LayerResult out;
    out.j = j;
    out.comm_dim = comm.size();
    if (comm.size() > 64) throw ResourceError("commuting space too large for the joint solver");
    std::vector<ThetaCocycle> th;
    for (const auto& a : comm) th.push_back(theta(S, vector_of(a)));
    const auto& G = S.group();
    std::vector<std::uint32_t> gens;
    for (int s = 0; s < G.num_generators(); ++s) gens.push_back(G.generator(s));
    const auto sys = build_edges(G, [&](std::uint32_t e, int s) {
        std::uint64_t r = 0;
        for (std::size_t k = 0; k < th.size(); ++k)
            if (th[k].at(e, gens[static_cast<std::size_t>(s)])) r |= std::uint64_t{1} << k;
        return r;
    });
    // Solvable combinations: orthogonal to every leftover right-hand side.
    std::vector<F2Vector> res;
    for (auto r : sys.residuals) res.push_back(F2Vector::from_mask(comm.size(), r));
    std::vector<F2Vector> ok;
    if (res.empty()) {
        for (std::size_t k = 0; k < comm.size(); ++k) ok.push_back(F2Vector::unit(comm.size(), k));
    } else {
        ok = F2Matrix::from_rows(comm.size(), res).kernel_basis();
    }
    out.obstruction_count = comm.size() - ok.size();

    SpanBuilder span(S.dim(S.all_blocks()));
    for (const auto& f : S.layer_one(S.all_blocks()))
        if (span.add(f.coords)) out.basis.push_back(f);
    for (const auto& sel : ok) {
        F2Vector a(params.size());
        for (std::size_t k = 0; k < comm.size(); ++k)
            if (sel.get(k)) a ^= comm[k];
        const auto f = realize_commuting_vector(S, vector_of(a));
        if (span.add(f.coords)) out.basis.push_back(f);
    }
    return out;
}

}  // namespace gf
