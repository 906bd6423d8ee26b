#include "genusforge/groups.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "genusforge/errors.hpp"

namespace gf {

// ------------------------------------------------------------ semidirect ops

namespace {

constexpr std::uint64_t kLowHalf[6] = {
    0x5555555555555555ULL, 0x3333333333333333ULL, 0x0F0F0F0F0F0F0F0FULL,
    0x00FF00FF00FF00FFULL, 0x0000FFFF0000FFFFULL, 0x00000000FFFFFFFFULL,
};

}  // namespace

std::uint64_t act(Subset v, std::uint64_t a) {
    // x_j = 1 + t_j; t_j moves the monomials without j to the ones with j.
    while (v) {
        const int j = std::countr_zero(v);
        v &= v - 1;
        a ^= (a & kLowHalf[j]) << (1U << j);
    }
    return a;
}

SemidirectElement sd_mul(const SemidirectElement& a, const SemidirectElement& b) {
    return {a.poly ^ act(a.vec, b.poly), a.vec ^ b.vec};
}

SemidirectElement sd_inv(const SemidirectElement& a) { return {act(a.vec, a.poly), a.vec}; }

// ------------------------------------------------------------ ConcreteModel

ConcreteModel::ConcreteModel(int n, std::vector<int> pointers) : n_(n), pointers_(std::move(pointers)) {
    if (n < 1 || n > 6) throw DomainError("concrete models support 1 <= n <= 6");
    for (int p : pointers_)
        if (p < 0 || p >= n) throw DomainError("factor pointer outside [n]");
    width_ = (1 << n) + n;
    packable_ = width_ * factors() <= 128;
}

GroupElement ConcreteModel::identity() const { return GroupElement{std::vector<SemidirectElement>(pointers_.size())}; }

GroupElement ConcreteModel::mul(const GroupElement& a, const GroupElement& b) const {
    GroupElement r;
    r.comps.resize(pointers_.size());
    for (std::size_t c = 0; c < pointers_.size(); ++c) r.comps[c] = sd_mul(a.comps[c], b.comps[c]);
    return r;
}

GroupElement ConcreteModel::inv(const GroupElement& a) const {
    GroupElement r;
    r.comps.resize(pointers_.size());
    for (std::size_t c = 0; c < pointers_.size(); ++c) r.comps[c] = sd_inv(a.comps[c]);
    return r;
}

Key ConcreteModel::pack(const GroupElement& g) const {
    if (!packable_) throw ResourceError("element encoding exceeds 128 bits");
    Key k = 0;
    const int pw = 1 << n_;
    for (int c = 0; c < factors(); ++c) {
        const auto& e = g.comps[static_cast<std::size_t>(c)];
        const int off = c * width_;
        k |= static_cast<Key>(e.poly) << off;
        k |= static_cast<Key>(e.vec) << (off + pw);
    }
    return k;
}

SemidirectElement ConcreteModel::component(Key k, int c) const {
    const int pw = 1 << n_;
    const Key w = k >> (c * width_);
    const std::uint64_t pmask = pw == 64 ? ~0ULL : ((1ULL << pw) - 1);
    return {static_cast<std::uint64_t>(w) & pmask, static_cast<Subset>(static_cast<std::uint64_t>(w >> pw) & ((1U << n_) - 1))};
}

GroupElement ConcreteModel::unpack(Key k) const {
    GroupElement g;
    for (int c = 0; c < factors(); ++c) g.comps.push_back(component(k, c));
    return g;
}

Key ConcreteModel::mul_packed(Key a, Key b) const {
    Key r = 0;
    const int pw = 1 << n_;
    for (int c = 0; c < factors(); ++c) {
        const auto x = component(a, c), y = component(b, c);
        const auto z = sd_mul(x, y);
        const int off = c * width_;
        r |= static_cast<Key>(z.poly) << off;
        r |= static_cast<Key>(z.vec) << (off + pw);
    }
    return r;
}

Key ConcreteModel::inv_packed(Key a) const {
    Key r = 0;
    const int pw = 1 << n_;
    for (int c = 0; c < factors(); ++c) {
        const auto z = sd_inv(component(a, c));
        const int off = c * width_;
        r |= static_cast<Key>(z.poly) << off;
        r |= static_cast<Key>(z.vec) << (off + pw);
    }
    return r;
}

// ------------------------------------------------------------ ExpansionGroup

namespace {

Subset read_phi(const ConcreteModel& m, const std::vector<PhiSource>& src, Key k) {
    Subset out = 0;
    for (std::size_t x = 0; x < src.size(); ++x) {
        const auto c = m.component(k, src[x].comp);
        const bool b = src[x].vec_bit < 0 ? (c.poly & 1U) : has(c.vec, src[x].vec_bit);
        if (b) out |= bit(static_cast<int>(x));
    }
    return out;
}

}  // namespace

ExpansionGroup ExpansionGroup::from_model(Shape shape, ConcreteModel model, std::vector<GroupElement> gens,
                                          std::vector<PhiSource> phi, std::size_t cap, Exec exec) {
    if (static_cast<int>(gens.size()) != shape.N() || phi.size() != gens.size())
        throw DomainError("one generator and one phi coordinate per index of the shape");
    if (!model.packable()) throw ResourceError("element encoding exceeds 128 bits");
    for (const auto& g : gens)
        if (static_cast<int>(g.comps.size()) != model.factors()) throw DomainError("generator has the wrong number of components");
    std::vector<Key> gk;
    for (const auto& g : gens) gk.push_back(model.pack(g));
    const ConcreteModel& m = model;
    Closure cl = bfs_closure(
        0, static_cast<int>(gk.size()), [&](Key k, int g) { return m.mul_packed(k, gk[static_cast<std::size_t>(g)]); }, cap, exec);

    ExpansionGroup G;
    G.shape_ = std::move(shape);
    G.model_ = std::make_shared<const ConcreteModel>(std::move(model));
    const std::size_t order = cl.index.size();
    G.phi_.resize(order);
    for (std::size_t e = 0; e < order; ++e) G.phi_[e] = read_phi(*G.model_, phi, cl.index.key(static_cast<std::uint32_t>(e)));
    G.rmul_ = std::move(cl.rmul);
    G.parent_ = std::move(cl.parent);
    G.parent_gen_ = std::move(cl.parent_gen);
    G.keys_ = std::make_shared<const KeyIndex>(std::move(cl.index));
    G.finish();
    return G;
}

ExpansionGroup ExpansionGroup::from_cayley(Shape shape, std::vector<std::vector<std::uint32_t>> rmul, std::vector<Subset> phi) {
    const std::size_t order = phi.size();
    if (static_cast<int>(rmul.size()) != shape.N()) throw DomainError("one Cayley column per generator");
    for (const auto& col : rmul)
        if (col.size() != order) throw DomainError("Cayley column has the wrong length");
    // Renumber breadth first from element 0.
    std::vector<std::uint32_t> newid(order, KeyIndex::none), oldid;
    std::vector<std::uint32_t> parent{0};
    std::vector<std::uint8_t> pgen{0};
    newid[0] = 0;
    oldid.push_back(0);
    for (std::size_t q = 0; q < oldid.size(); ++q)
        for (std::size_t g = 0; g < rmul.size(); ++g) {
            const auto t = rmul[g][oldid[q]];
            if (t >= order) throw DomainError("Cayley entry out of range");
            if (newid[t] == KeyIndex::none) {
                newid[t] = static_cast<std::uint32_t>(oldid.size());
                oldid.push_back(t);
                parent.push_back(static_cast<std::uint32_t>(q));
                pgen.push_back(static_cast<std::uint8_t>(g));
            }
        }
    if (oldid.size() != order) throw DomainError("Cayley graph is not generated by its generators");
    ExpansionGroup G;
    G.shape_ = std::move(shape);
    G.rmul_.assign(rmul.size(), std::vector<std::uint32_t>(order));
    G.phi_.resize(order);
    for (std::size_t e = 0; e < order; ++e) {
        G.phi_[e] = phi[oldid[e]];
        for (std::size_t g = 0; g < rmul.size(); ++g) G.rmul_[g][e] = newid[rmul[g][oldid[e]]];
    }
    G.parent_ = std::move(parent);
    G.parent_gen_ = std::move(pgen);
    G.finish();
    if (order <= 4096) G.build_table();
    return G;
}

void ExpansionGroup::finish() {
    gen_inverse_word_len_.clear();
    for (int x = 0; x < num_generators(); ++x) {
        std::uint32_t e = generator(x), o = 1;
        while (e != 0) {
            e = rmul(x, e);
            ++o;
            if (o > order()) throw DomainError("generator of infinite order");
        }
        gen_inverse_word_len_.push_back(o - 1);
    }
}

double ExpansionGroup::log2_order() const { return std::log2(static_cast<double>(order())); }

std::vector<int> ExpansionGroup::word(std::uint32_t e) const {
    std::vector<int> w;
    while (e != 0) {
        w.push_back(parent_gen_[e]);
        e = parent_[e];
    }
    std::reverse(w.begin(), w.end());
    return w;
}

std::uint32_t ExpansionGroup::mul(std::uint32_t a, std::uint32_t b) const {
    if (!table_.empty()) return table_[static_cast<std::size_t>(a) * order() + b];
    if (model_) return keys_->find(model_->mul_packed(keys_->key(a), keys_->key(b)));
    for (int g : word(b)) a = rmul(g, a);
    return a;
}

std::uint32_t ExpansionGroup::inv(std::uint32_t a) const {
    if (model_) return keys_->find(model_->inv_packed(keys_->key(a)));
    const auto w = word(a);
    std::uint32_t r = 0;
    for (auto it = w.rbegin(); it != w.rend(); ++it)
        for (std::uint32_t k = 0; k < gen_inverse_word_len_[static_cast<std::size_t>(*it)]; ++k) r = rmul(*it, r);
    return r;
}

std::uint32_t ExpansionGroup::commutator(std::uint32_t a, std::uint32_t b) const {
    return mul(mul(a, b), mul(inv(a), inv(b)));
}

std::uint32_t ExpansionGroup::conj(std::uint32_t g, std::uint32_t w) const { return mul(mul(g, w), inv(g)); }

std::uint32_t nested_commutator(const ExpansionGroup& G, const std::vector<std::uint32_t>& elems) {
    if (elems.size() < 2) throw DomainError("nested commutator needs at least two entries");
    std::uint32_t w = G.commutator(elems[elems.size() - 2], elems.back());
    for (std::size_t k = elems.size() - 2; k-- > 0;) w = G.commutator(elems[k], w);
    return w;
}

const ConcreteModel& ExpansionGroup::model() const {
    if (!model_) throw PreconditionError("group has no concrete model");
    return *model_;
}

GroupElement ExpansionGroup::element(std::uint32_t e) const { return model().unpack(keys_->key(e)); }

std::optional<std::uint32_t> ExpansionGroup::index_of(const GroupElement& g) const {
    const auto k = keys_->find(model().pack(g));
    if (k == KeyIndex::none) return std::nullopt;
    return k;
}

SemidirectElement ExpansionGroup::component(std::uint32_t e, int c) const { return model().component(keys_->key(e), c); }

void ExpansionGroup::build_table(std::size_t max_order) {
    if (order() > max_order || !table_.empty()) return;
    const std::size_t n = order();
    std::vector<std::uint32_t> t(n * n);
    for (std::size_t b = 0; b < n; ++b) {
        const auto w = word(static_cast<std::uint32_t>(b));
        for (std::size_t a = 0; a < n; ++a) {
            std::uint32_t r = static_cast<std::uint32_t>(a);
            for (int g : w) r = rmul(g, r);
            t[a * n + b] = r;
        }
    }
    table_ = std::move(t);
}

std::optional<KernelCoords> elementary_abelian_coords(const ExpansionGroup& G, const std::vector<bool>& member) {
    const std::size_t n = G.order();
    if (member.size() != n || !member[0]) throw DomainError("membership vector must cover the group and contain 1");
    KernelCoords kc;
    kc.member = member;
    kc.coord.assign(n, 0);
    kc.elem_of_coord.push_back(0);
    std::vector<bool> spanned(n, false);
    spanned[0] = true;
    for (std::uint32_t m = 0; m < n; ++m) {
        if (!member[m] || spanned[m]) continue;
        if (G.mul(m, m) != 0) return std::nullopt;
        for (auto b : kc.basis)
            if (G.mul(m, b) != G.mul(b, m)) return std::nullopt;
        const std::size_t d = kc.basis.size();
        if (d >= 40) throw ResourceError("elementary abelian subgroup too large for coordinates");
        const std::size_t sz = kc.elem_of_coord.size();
        for (std::size_t c = 0; c < sz; ++c) {
            const auto e = G.mul(kc.elem_of_coord[c], m);
            if (!member[e] || spanned[e]) return std::nullopt;
            spanned[e] = true;
            kc.coord[e] = c | (std::uint64_t{1} << d);
            kc.elem_of_coord.push_back(e);
        }
        kc.basis.push_back(m);
    }
    return kc;
}

const KernelCoords& ExpansionGroup::kernel() const {
    if (!kernel_) {
        std::vector<bool> member(order());
        for (std::size_t e = 0; e < order(); ++e) member[e] = phi_[e] == 0;
        auto kc = elementary_abelian_coords(*this, member);
        if (!kc) throw PreconditionError("ker(phi) is not elementary abelian");
        kernel_ = std::make_shared<KernelCoords>(std::move(*kc));
    }
    return *kernel_;
}

const std::vector<std::uint64_t>& ExpansionGroup::action(int x) const {
    const auto& K = kernel();
    if (action_.empty()) {
        action_.resize(static_cast<std::size_t>(num_generators()));
        for (int g = 0; g < num_generators(); ++g)
            for (auto b : K.basis) action_[static_cast<std::size_t>(g)].push_back(K.coord[conj(generator(g), b)]);
    }
    return action_[static_cast<std::size_t>(x)];
}

std::uint64_t ExpansionGroup::act_on_kernel(int x, std::uint64_t w) const {
    const auto& cols = action(x);
    std::uint64_t r = 0;
    while (w) {
        r ^= cols[static_cast<std::size_t>(std::countr_zero(w))];
        w &= w - 1;
    }
    return r;
}

// ----------------------------------------------------------------- builders

UniversalModel universal_model(const Shape& s) {
    std::vector<int> pointers;
    for (int x = 0; x < s.N(); ++x) pointers.push_back(s.block_of(x));
    UniversalModel u{ConcreteModel(s.n(), pointers), {}, {}};
    for (int j = 0; j < s.N(); ++j) {
        GroupElement g = u.model.identity();
        for (int x = 0; x < s.N(); ++x) {
            auto& c = g.comps[static_cast<std::size_t>(x)];
            if (s.block_of(j) != s.block_of(x))
                c.vec = bit(s.block_of(j));
            else if (j == x)
                c.poly = 1;
        }
        u.gens.push_back(std::move(g));
        u.phi.push_back(PhiSource{j, -1});
    }
    return u;
}

ExpansionGroup build_single_factor(int n, int i, Exec exec) {
    if (n < 1) throw DomainError("n must be positive");
    if (i < 0 || i >= n) throw DomainError("factor index outside [n]");
    ConcreteModel m(n, {i});
    std::vector<GroupElement> gens;
    std::vector<PhiSource> phi;
    for (int j = 0; j < n; ++j) {
        GroupElement g = m.identity();
        if (j == i) {
            g.comps[0].poly = 1;
            phi.push_back({0, -1});
        } else {
            g.comps[0].vec = bit(j);
            phi.push_back({0, j});
        }
        gens.push_back(std::move(g));
    }
    return ExpansionGroup::from_model(Shape::ones(n), std::move(m), std::move(gens), std::move(phi), kEnumerationCap, exec);
}

std::uint64_t universal_log2_formula(const Shape& s) {
    const std::uint64_t n = static_cast<std::uint64_t>(s.n());
    return static_cast<std::uint64_t>(s.N()) * (std::uint64_t{1} << (n - 1)) - (std::uint64_t{1} << n) + n + 1;
}

ExpansionGroup build_universal_general(const Shape& s, Exec exec) {
    if (s.n() < 1) throw DomainError("shape must have at least one block");
    const auto predicted = universal_log2_formula(s);
    if (predicted > 22)
        throw ResourceError("universal group of shape " + s.to_string() + " has 2^" + std::to_string(predicted) +
                                " elements, above the enumeration cap 2^22",
                            static_cast<double>(predicted));
    auto u = universal_model(s);
    return ExpansionGroup::from_model(s, std::move(u.model), std::move(u.gens), std::move(u.phi), kEnumerationCap, exec);
}

ExpansionGroup build_universal(int n, Exec exec) {
    if (n < 1) throw DomainError("n must be positive");
    return build_universal_general(Shape::ones(n), exec);
}

std::uint64_t universal_log2_linear(const Shape& s) {
    auto u = universal_model(s);
    const int pw = 1 << s.n();
    const std::size_t len = static_cast<std::size_t>(u.model.factors() * pw);
    auto flatten = [&](const GroupElement& g) {
        F2Vector v(len);
        for (int c = 0; c < u.model.factors(); ++c) {
            const auto& e = g.comps[static_cast<std::size_t>(c)];
            if (e.vec) throw ClassificationViolation("commutator with nonzero vector part");
            for (int b = 0; b < pw; ++b)
                if ((e.poly >> b) & 1U) v.set(static_cast<std::size_t>(c * pw + b));
        }
        return v;
    };
    auto unflatten = [&](const F2Vector& v) {
        GroupElement g = u.model.identity();
        for (int c = 0; c < u.model.factors(); ++c)
            for (int b = 0; b < pw; ++b)
                if (v.get(static_cast<std::size_t>(c * pw + b))) g.comps[static_cast<std::size_t>(c)].poly |= std::uint64_t{1} << b;
        return g;
    };
    const auto& m = u.model;
    SpanBuilder span(len);
    std::vector<F2Vector> queue;
    for (int a = 0; a < s.N(); ++a)
        for (int b = a + 1; b < s.N(); ++b) {
            const auto& ga = u.gens[static_cast<std::size_t>(a)];
            const auto& gb = u.gens[static_cast<std::size_t>(b)];
            queue.push_back(flatten(m.mul(m.mul(ga, gb), m.mul(m.inv(ga), m.inv(gb)))));
        }
    while (!queue.empty()) {
        F2Vector w = std::move(queue.back());
        queue.pop_back();
        if (!span.add(w)) continue;
        const auto wg = unflatten(w);
        for (const auto& g : u.gens) {
            const auto c = m.mul(m.mul(g, wg), m.inv(g));
            queue.push_back(flatten(c) ^ w);
        }
    }
    return static_cast<std::uint64_t>(s.N()) + span.dim();
}

ExpansionGroup product_expansion(const ExpansionGroup& a, const ExpansionGroup& b, Exec exec) {
    if (!(a.shape() == b.shape())) throw DomainError("product needs groups of the same shape");
    const int ng = a.num_generators();
    Closure cl = bfs_closure(
        0, ng,
        [&](Key k, int g) {
            const auto ia = static_cast<std::uint32_t>(k >> 32), ib = static_cast<std::uint32_t>(k & 0xffffffffU);
            return (static_cast<Key>(a.rmul(g, ia)) << 32) | b.rmul(g, ib);
        },
        kEnumerationCap, exec);
    std::vector<Subset> phi;
    for (std::uint32_t e = 0; e < cl.index.size(); ++e) phi.push_back(a.phi(static_cast<std::uint32_t>(cl.index.key(e) >> 32)));
    return ExpansionGroup::from_cayley(a.shape(), std::move(cl.rmul), std::move(phi));
}

// ------------------------------------------------------------------- axioms

namespace {

// Subgroup generated by `seeds` and all their conjugates.
std::vector<bool> normal_closure(const ExpansionGroup& G, std::vector<std::uint32_t> X) {
    std::vector<bool> member;
    for (;;) {
        member.assign(G.order(), false);
        member[0] = true;
        std::vector<std::uint32_t> list{0};
        for (std::size_t q = 0; q < list.size(); ++q)
            for (auto x : X) {
                const auto e = G.mul(list[q], x);
                if (!member[e]) {
                    member[e] = true;
                    list.push_back(e);
                }
            }
        bool grown = false;
        const auto Xs = X;
        for (auto x : Xs)
            for (int s = 0; s < G.num_generators(); ++s) {
                const auto c = G.conj(G.generator(s), x);
                if (!member[c]) {
                    X.push_back(c);
                    member[c] = true;
                    grown = true;
                }
            }
        if (!grown) return member;
    }
}

}  // namespace

AxiomReport check_expansion_axioms(const ExpansionGroup& G) {
    AxiomReport r;
    const int N = G.num_generators();
    auto fail = [&](const std::string& why) {
        if (r.failure.empty()) r.failure = why;
    };
    // 1: phi is a homomorphism with phi(g_x) = e_x.
    r.axiom1 = G.phi(0) == 0;
    for (int x = 0; x < N && r.axiom1; ++x) r.axiom1 = G.phi(G.generator(x)) == bit(x);
    for (std::uint32_t e = 0; e < G.order() && r.axiom1; ++e)
        for (int x = 0; x < N && r.axiom1; ++x) r.axiom1 = G.phi(G.rmul(x, e)) == (G.phi(e) ^ bit(x));
    if (!r.axiom1) fail("phi is not a homomorphism sending g_x to e_x");

    // 2: ker(phi) elementary abelian.
    std::vector<bool> ker(G.order());
    for (std::uint32_t e = 0; e < G.order(); ++e) ker[e] = G.phi(e) == 0;
    const auto kc = elementary_abelian_coords(G, ker);
    r.axiom2 = kc.has_value();
    if (!r.axiom2) fail("ker(phi) is not elementary abelian");

    // 3: [G,G] = ker(phi).
    std::vector<std::uint32_t> comms;
    for (int a = 0; a < N; ++a)
        for (int b = a + 1; b < N; ++b) comms.push_back(G.commutator(G.generator(a), G.generator(b)));
    const auto cc = normal_closure(G, comms);
    r.axiom3 = cc == ker;
    if (!r.axiom3) fail("[G,G] differs from ker(phi)");

    // 4: generators are involutions.
    r.axiom4 = true;
    for (int x = 0; x < N && r.axiom4; ++x) r.axiom4 = G.mul(G.generator(x), G.generator(x)) == 0;
    if (!r.axiom4) fail("a distinguished generator is not an involution");

    // Block version: phi^{-1}(ker pi) elementary abelian.
    if (!G.shape().all_ones()) {
        std::vector<bool> m(G.order());
        const auto& s = G.shape();
        for (std::uint32_t e = 0; e < G.order(); ++e) {
            bool in = true;
            for (int b = 0; b < s.n() && in; ++b) in = popcount(G.phi(e) & s.block_mask(b)) % 2 == 0;
            m[e] = in;
        }
        r.block_condition = elementary_abelian_coords(G, m).has_value();
        if (!r.block_condition) fail("phi^{-1}(ker pi) is not elementary abelian");
    }
    return r;
}

// ----------------------------------------------------------- central series

std::vector<MaskSpan> descending_central_series(const ExpansionGroup& G) {
    const auto& K = G.kernel();
    const int N = G.num_generators();
    MaskSpan g2;
    std::vector<std::uint64_t> queue;
    for (int a = 0; a < N; ++a)
        for (int b = a + 1; b < N; ++b) queue.push_back(K.coord[G.commutator(G.generator(a), G.generator(b))]);
    while (!queue.empty()) {
        const auto w = queue.back();
        queue.pop_back();
        if (!g2.add(w)) continue;
        for (int x = 0; x < N; ++x) queue.push_back(w ^ G.act_on_kernel(x, w));
    }
    std::vector<MaskSpan> series;
    MaskSpan cur = g2;
    while (cur.dim() > 0) {
        series.push_back(cur);
        MaskSpan next;
        for (auto w : cur.basis())
            for (int x = 0; x < N; ++x) next.add(w ^ G.act_on_kernel(x, w));
        cur = next;
    }
    return series;
}

std::vector<MaskSpan> central_series_by_commutators(const ExpansionGroup& G, Exec exec) {
    const auto& K = G.kernel();
    auto series = descending_central_series(G);
    if (series.empty()) return series;
    std::vector<MaskSpan> out{series[0]};
    MaskSpan cur = series[0];
    const auto order = static_cast<std::int64_t>(G.order());
    for (;;) {
        std::vector<std::uint32_t> reps;
        for (auto w : cur.basis()) reps.push_back(K.elem_of_coord[w]);
        MaskSpan next;
        if (exec == Exec::Serial) {
            for (std::int64_t g = 0; g < order; ++g)
                for (auto w : reps) next.add(K.coord[G.commutator(static_cast<std::uint32_t>(g), w)]);
        } else {
            configured_threads();
#pragma omp parallel
            {
                MaskSpan local;
#pragma omp for schedule(static)
                for (std::int64_t g = 0; g < order; ++g)
                    for (auto w : reps) local.add(K.coord[G.commutator(static_cast<std::uint32_t>(g), w)]);
#pragma omp critical
                next.merge(local);
            }
        }
        if (next.dim() == 0) break;
        out.push_back(next);
        cur = next;
    }
    return out;
}

std::vector<MaskSpan> augmentation_filtration(const ExpansionGroup& G) {
    const auto& K = G.kernel();
    const int N = G.num_generators();
    if (N > 20) throw ResourceError("augmentation filtration enumerates all of F2^N");
    auto series = descending_central_series(G);
    if (series.empty()) return {};
    // Action of every v in F2^N, as a product of commuting generator actions.
    std::vector<std::vector<std::uint64_t>> Mv(std::size_t{1} << N);
    Mv[0].resize(K.dim());
    for (std::size_t k = 0; k < K.dim(); ++k) Mv[0][k] = std::uint64_t{1} << k;
    for (std::size_t v = 1; v < Mv.size(); ++v) {
        const int x = std::countr_zero(v);
        const auto& prev = Mv[v & (v - 1)];
        Mv[v].resize(K.dim());
        for (std::size_t k = 0; k < K.dim(); ++k) Mv[v][k] = G.act_on_kernel(x, prev[k]);
    }
    auto apply = [&](std::size_t v, std::uint64_t w) {
        std::uint64_t r = 0;
        while (w) {
            r ^= Mv[v][static_cast<std::size_t>(std::countr_zero(w))];
            w &= w - 1;
        }
        return r;
    };
    std::vector<MaskSpan> out;
    MaskSpan cur = series[0];
    while (cur.dim() > 0) {
        out.push_back(cur);
        MaskSpan next;
        for (auto w : cur.basis())
            for (std::size_t v = 1; v < Mv.size(); ++v) next.add(w ^ apply(v, w));
        cur = next;
    }
    return out;
}

// ------------------------------------------------------------------ quotients

ExpansionGroup quotient(const ExpansionGroup& G, const std::vector<std::uint32_t>& seeds, Subset drop, const Shape& new_shape) {
    const auto member = normal_closure(G, seeds);
    std::vector<std::uint32_t> sub;
    for (std::uint32_t e = 0; e < G.order(); ++e)
        if (member[e]) sub.push_back(e);
    std::vector<std::uint32_t> label(G.order(), KeyIndex::none), rep;
    for (std::uint32_t e = 0; e < G.order(); ++e) {
        if (label[e] != KeyIndex::none) continue;
        const auto c = static_cast<std::uint32_t>(rep.size());
        rep.push_back(e);
        for (auto s : sub) label[G.mul(e, s)] = c;
    }
    std::vector<int> kept;
    for (int x = 0; x < G.num_generators(); ++x) {
        if (has(drop, x)) {
            if (label[G.generator(x)] != label[0]) throw PreconditionError("dropped generator survives in the quotient");
        } else {
            kept.push_back(x);
        }
    }
    if (static_cast<int>(kept.size()) != new_shape.N()) throw DomainError("new shape does not match the kept generators");
    // phi must be constant on cosets after deleting the dropped coordinates.
    auto project = [&](Subset p) {
        Subset out = 0;
        for (std::size_t k = 0; k < kept.size(); ++k)
            if (has(p, kept[k])) out |= bit(static_cast<int>(k));
        return out;
    };
    std::vector<Subset> phi(rep.size());
    for (std::uint32_t e = 0; e < G.order(); ++e) {
        const auto p = project(G.phi(e));
        if (e == rep[label[e]])
            phi[label[e]] = p;
        else if (phi[label[e]] != p)
            throw PreconditionError("phi does not descend to the quotient");
    }
    std::vector<std::vector<std::uint32_t>> rmul(kept.size(), std::vector<std::uint32_t>(rep.size()));
    for (std::size_t k = 0; k < kept.size(); ++k)
        for (std::size_t c = 0; c < rep.size(); ++c) rmul[k][c] = label[G.rmul(kept[k], rep[c])];
    return ExpansionGroup::from_cayley(new_shape, std::move(rmul), std::move(phi));
}

ExpansionGroup corner(const ExpansionGroup& G, int block) {
    const auto& s = G.shape();
    if (block < 0 || block >= s.n()) throw DomainError("corner block outside [n]");
    if (s.n() < 2) throw DomainError("corner needs at least two blocks");
    std::vector<std::uint32_t> seeds;
    for (int x : elements(s.block_mask(block))) seeds.push_back(G.generator(x));
    return quotient(G, seeds, s.block_mask(block), s.without(bit(block)));
}

ExpansionGroup inflated_corner(const ExpansionGroup& G, int block) {
    const auto& s = G.shape();
    if (block < 0 || block >= s.n()) throw DomainError("block outside [n]");
    std::vector<std::uint32_t> seeds;
    for (int x : elements(s.block_mask(block)))
        for (int a = 0; a < G.num_generators(); ++a) seeds.push_back(G.commutator(G.generator(x), G.generator(a)));
    return quotient(G, seeds, 0, s);
}

ExpansionGroup abelianization(const ExpansionGroup& G) {
    std::vector<std::uint32_t> seeds;
    for (int a = 0; a < G.num_generators(); ++a)
        for (int b = a + 1; b < G.num_generators(); ++b) seeds.push_back(G.commutator(G.generator(a), G.generator(b)));
    return quotient(G, seeds, 0, G.shape());
}

std::optional<Epimorphism> unique_epimorphism(const ExpansionGroup& source, const ExpansionGroup& target) {
    if (!(source.shape() == target.shape())) throw DomainError("epimorphism needs groups of the same shape");
    Epimorphism f;
    f.map.assign(source.order(), KeyIndex::none);
    f.map[0] = 0;
    for (std::uint32_t e = 0; e < source.order(); ++e)
        for (int x = 0; x < source.num_generators(); ++x) {
            const auto s = source.rmul(x, e);
            const auto t = target.rmul(x, f.map[e]);
            if (f.map[s] == KeyIndex::none)
                f.map[s] = t;
            else if (f.map[s] != t)
                return std::nullopt;
        }
    std::vector<bool> hit(target.order(), false);
    for (auto t : f.map) hit[t] = true;
    f.surjective = std::all_of(hit.begin(), hit.end(), [](bool b) { return b; });
    return f;
}

}  // namespace gf
