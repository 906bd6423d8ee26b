#include "genusforge/tensors.hpp"

#include <algorithm>
#include <istream>
#include <map>
#include <numeric>
#include <ostream>
#include <sstream>

#include "genusforge/errors.hpp"

namespace gf {

// ---------------------------------------------------------------- TupleSpace

TupleSpace::TupleSpace(int N, int i, Subset B) : N_(N), i_(i), B_(B) {
    if (N < 0 || N > 30) throw DomainError("index set size out of range");
    if (B & ~full_set(N)) throw DomainError("support leaves [N]");
    m_ = popcount(B);
    if (i < 1 || i > m_) throw DomainError("arity must satisfy 1 <= i <= |B|");
    if (m_ > 10) throw DomainError("supports above 10 elements are not supported");
    pos_.assign(static_cast<std::size_t>(N), -1);
    for (int e : elements(B)) {
        pos_[static_cast<std::size_t>(e)] = static_cast<int>(elems_.size());
        elems_.push_back(e);
    }
    // weight of slot h = (m-h-1)! / (m-i)!
    w_.assign(static_cast<std::size_t>(i), 1);
    for (int h = i - 2; h >= 0; --h) w_[static_cast<std::size_t>(h)] = w_[static_cast<std::size_t>(h + 1)] * static_cast<std::size_t>(m_ - h - 1);
    size_ = w_[0] * static_cast<std::size_t>(m_);
}

std::size_t TupleSpace::index(const Tuple& t) const {
    if (static_cast<int>(t.size()) != i_) throw DomainError("tuple length does not match arity");
    std::size_t idx = 0;
    std::uint32_t used = 0;
    for (int h = 0; h < i_; ++h) {
        const int e = t[static_cast<std::size_t>(h)];
        if (e < 0 || e >= N_) throw DomainError("tuple entry outside [N]");
        const int p = pos_[static_cast<std::size_t>(e)];
        if (p < 0 || (used >> p) & 1U) return npos;
        const int rank = p - __builtin_popcount(used & ((1U << p) - 1));
        idx += static_cast<std::size_t>(rank) * w_[static_cast<std::size_t>(h)];
        used |= 1U << p;
    }
    return idx;
}

Tuple TupleSpace::tuple(std::size_t idx) const {
    Tuple t(static_cast<std::size_t>(i_));
    std::uint32_t used = 0;
    for (int h = 0; h < i_; ++h) {
        std::size_t rank = idx / w_[static_cast<std::size_t>(h)];
        idx %= w_[static_cast<std::size_t>(h)];
        int p = 0;
        for (;; ++p) {
            if ((used >> p) & 1U) continue;
            if (rank == 0) break;
            --rank;
        }
        used |= 1U << p;
        t[static_cast<std::size_t>(h)] = elems_[static_cast<std::size_t>(p)];
    }
    return t;
}

const std::vector<Tuple>& TupleSpace::all() const {
    if (cache_.size() != size_) {
        cache_.clear();
        cache_.reserve(size_);
        for (std::size_t k = 0; k < size_; ++k) cache_.push_back(tuple(k));
    }
    return cache_;
}

// --------------------------------------------------------------- MultiTensor

MultiTensor::MultiTensor(int N, int i, Subset B) : space_(N, i, B), values_(space_.size()) {}

MultiTensor::MultiTensor(const TupleSpace& space, F2Vector values) : space_(space), values_(std::move(values)) {
    if (values_.size() != space_.size()) throw DomainError("tensor value table has the wrong size");
}

bool MultiTensor::eval(const Tuple& t) const {
    const auto k = space_.index(t);
    return k != TupleSpace::npos && values_.get(k);
}

bool MultiTensor::eval_vectors(const std::vector<F2Vector>& args) const {
    if (static_cast<int>(args.size()) != arity()) throw DomainError("wrong number of arguments");
    for (const auto& a : args)
        if (static_cast<int>(a.size()) != N()) throw DomainError("argument vector has the wrong length");
    bool acc = false;
    const auto& tuples = space_.all();
    for (std::size_t k = 0; k < tuples.size(); ++k) {
        if (!values_.get(k)) continue;
        bool term = true;
        for (int h = 0; h < arity() && term; ++h) term = args[static_cast<std::size_t>(h)].get(static_cast<std::size_t>(tuples[k][static_cast<std::size_t>(h)]));
        acc ^= term;
    }
    return acc;
}

void MultiTensor::set(const Tuple& t, bool v) {
    const auto k = space_.index(t);
    if (k == TupleSpace::npos) throw DomainError("tuple is not an injective tuple of the support");
    values_.set(k, v);
}

MultiTensor MultiTensor::widen(Subset B) const {
    if ((support() & ~B) != 0) throw DomainError("widen: new support must contain the old one");
    MultiTensor out(N(), arity(), B);
    const auto& tuples = space_.all();
    for (std::size_t k = 0; k < tuples.size(); ++k)
        if (values_.get(k)) out.set(tuples[k], true);
    return out;
}

bool MultiTensor::operator==(const MultiTensor& o) const {
    if (N() != o.N() || arity() != o.arity()) return false;
    if (support() == o.support()) return values_ == o.values_;
    const Subset U = support() | o.support();
    return widen(U).values_ == o.widen(U).values_;
}

MultiTensor& MultiTensor::operator^=(const MultiTensor& o) {
    if (N() != o.N() || arity() != o.arity()) throw DomainError("tensor shape mismatch");
    if (support() != o.support()) {
        const Subset U = support() | o.support();
        *this = widen(U);
        values_ ^= o.widen(U).values_;
    } else {
        values_ ^= o.values_;
    }
    return *this;
}

MultiTensor pure_tensor(int N, Subset B, const std::vector<Subset>& forms) {
    MultiTensor t(N, static_cast<int>(forms.size()), B);
    const auto& tuples = t.space().all();
    for (std::size_t k = 0; k < tuples.size(); ++k) {
        bool v = true;
        for (std::size_t h = 0; h < forms.size() && v; ++h) v = has(forms[h], tuples[k][h]);
        if (v) t.values().flip(k);
    }
    return t;
}

// ---------------------------------------------------------- governing tensors

namespace {

// Calls f(order) for every arrangement of the items in which item `mark` sits in one of
// the last two slots.
template <class F>
void arrangements_with_mark_last_two(std::vector<int> items, int mark, F&& f) {
    std::sort(items.begin(), items.end());
    const std::size_t i = items.size();
    do {
        if (i == 1 || items[i - 1] == mark || items[i - 2] == mark) f(items);
    } while (std::next_permutation(items.begin(), items.end()));
}

}  // namespace

MultiTensor governing_tensor(int N, Subset A, int x) {
    if (!has(A, x)) throw DomainError("pointer must lie in A");
    MultiTensor acc(N, popcount(A), A);
    arrangements_with_mark_last_two(elements(A), x, [&](const std::vector<int>& order) {
        std::vector<Subset> forms;
        for (int e : order) forms.push_back(bit(e));
        acc ^= pure_tensor(N, A, forms);
    });
    return acc;
}

std::vector<MultiTensor> gov_space(int N, Subset B, int i) {
    std::vector<MultiTensor> out;
    for (Subset A = 1; A <= B; ++A) {
        if ((A & ~B) || popcount(A) != i) continue;
        for (int x : elements(A)) out.push_back(governing_tensor(N, A, x).widen(B));
    }
    return out;
}

MultiTensor governing_tensor_general(const Shape& s, Subset A, int x, Subset T) {
    if (!has(A, x)) throw DomainError("pointer block must lie in A");
    if (A & ~full_set(s.n())) throw DomainError("block set leaves [n]");
    if (T == 0 || (T & ~s.block_mask(x))) throw DomainError("T must be a nonempty subset of f(x)");
    const Subset support = s.indices_over(A);
    MultiTensor acc(s.N(), popcount(A), support);
    // Block x is represented by T; the marker -1 stands for T in the arrangement.
    std::vector<int> items;
    for (int b : elements(A)) items.push_back(b == x ? -1 : b);
    arrangements_with_mark_last_two(items, -1, [&](const std::vector<int>& order) {
        std::vector<Subset> forms;
        for (int b : order) forms.push_back(b < 0 ? T : s.block_mask(b));
        acc ^= pure_tensor(s.N(), support, forms);
    });
    return acc;
}

std::vector<MultiTensor> gov_space_general(const Shape& s, int i) {
    std::vector<MultiTensor> out;
    const Subset all = full_set(s.N());
    if (i == 1) {
        for (int y = 0; y < s.N(); ++y) out.push_back(pure_tensor(s.N(), all, {bit(y)}));
        return out;
    }
    for (Subset A = 1; A <= full_set(s.n()); ++A) {
        if (popcount(A) != i) continue;
        for (int x : elements(A))
            for (int y : elements(s.block_mask(x))) out.push_back(governing_tensor_general(s, A, x, bit(y)).widen(all));
    }
    return out;
}

// --------------------------------------------------------------- constraints

namespace {

F2Vector row_of(const TupleSpace& cols, std::initializer_list<Tuple> terms) {
    F2Vector r(cols.size());
    for (const auto& t : terms) {
        const auto k = cols.index(t);
        if (k != TupleSpace::npos) r.flip(k);
    }
    return r;
}

Tuple cat(int a, const Tuple& rest) {
    Tuple t{a};
    t.insert(t.end(), rest.begin(), rest.end());
    return t;
}

}  // namespace

ConstraintSystem cons_constraints(int N, Subset B, int i) {
    ConstraintSystem sys{TupleSpace(N, i, B), {}, {}};
    if (i == 1) return sys;
    const auto& cols = sys.columns;
    // P-components must lie in the arity i-1 space over B - {j}.
    if (i >= 3) {
        for (int j : elements(B)) {
            const auto sub = cons_constraints(N, B & ~bit(j), i - 1);
            for (const auto& srow : sub.rows) {
                F2Vector r(cols.size());
                for (std::size_t k = 0; k < srow.size(); ++k)
                    if (srow.get(k)) r.flip(cols.index(cat(j, sub.columns.tuple(k))));
                sys.add(std::move(r), RowKind::Inflated);
            }
        }
    }
    const auto el = elements(B);
    if (i == 2) {
        for (std::size_t p = 0; p < el.size(); ++p)
            for (std::size_t q = p + 1; q < el.size(); ++q)
                sys.add(row_of(cols, {{el[p], el[q]}, {el[q], el[p]}}), RowKind::Symmetry);
    } else if (i == 3) {
        for (std::size_t p = 0; p < el.size(); ++p)
            for (std::size_t q = p + 1; q < el.size(); ++q)
                for (std::size_t r = q + 1; r < el.size(); ++r) {
                    const int a = el[p], b = el[q], c = el[r];
                    sys.add(row_of(cols, {{a, b, c}, {c, a, b}, {b, c, a}}), RowKind::HallWitt);
                }
    } else {
        for (std::size_t p = 0; p < el.size(); ++p)
            for (std::size_t q = p + 1; q < el.size(); ++q) {
                const int j1 = el[p], j2 = el[q];
                const TupleSpace rest(N, i - 2, B & ~bit(j1) & ~bit(j2));
                for (const auto& tau : rest.all()) {
                    Tuple t1{j1, j2}, t2{j2, j1};
                    t1.insert(t1.end(), tau.begin(), tau.end());
                    t2.insert(t2.end(), tau.begin(), tau.end());
                    sys.add(row_of(cols, {t1, t2}), RowKind::Commutativity);
                }
            }
    }
    return sys;
}

ConsSpace kernel_of(const ConstraintSystem& sys) {
    const auto M = F2Matrix::from_rows(sys.columns.size(), sys.rows);
    return ConsSpace{sys.columns, M.kernel_basis()};
}

ConsSpace cons_space(int N, Subset B, int i) { return kernel_of(cons_constraints(N, B, i)); }

std::vector<MultiTensor> ConsSpace::tensors() const {
    std::vector<MultiTensor> out;
    for (const auto& b : basis) out.emplace_back(columns, b);
    return out;
}

bool ConsSpace::contains(const MultiTensor& t) const {
    const MultiTensor w = t.support() == columns.support() ? t : t.widen(columns.support());
    return in_span(basis, w.values());
}

namespace {

// Enumerates all injective tuples of length len over [N] (entries anywhere in [N]).
std::vector<Tuple> injective_tuples(int N, int len) {
    if (len == 0) return {Tuple{}};
    return TupleSpace(N, len, full_set(N)).all();
}

}  // namespace

ConstraintSystem cons_constraints_general(const Shape& s, int i) {
    const int N = s.N();
    ConstraintSystem sys = cons_constraints(N, full_set(N), i);
    const auto& cols = sys.columns;
    // ker(pi) is spanned by e_r + e_{g(r)} with r not the first index of its block.
    std::vector<std::pair<int, int>> kappa;
    for (int r = 0; r < N; ++r) {
        const int g = s.first_of(s.block_of(r));
        if (r != g) kappa.emplace_back(r, g);
    }
    auto add_terms = [&](const std::vector<Tuple>& terms, RowKind kind) {
        F2Vector row(cols.size());
        for (const auto& t : terms) {
            const auto k = cols.index(t);
            if (k != TupleSpace::npos) row.flip(k);
        }
        if (!row.is_zero()) sys.add(std::move(row), kind);
    };
    // Rule 1: some slot h <= i-2 in ker(pi).
    if (i >= 3) {
        for (int h = 0; h <= i - 3; ++h)
            for (const auto& [r, g] : kappa)
                for (const auto& others : injective_tuples(N, i - 1)) {
                    Tuple a = others, b = others;
                    a.insert(a.begin() + h, r);
                    b.insert(b.begin() + h, g);
                    add_terms({a, b}, RowKind::KerPiEarly);
                }
    }
    // Rule 2: both of the last two slots in ker(pi).
    for (const auto& [r, gr] : kappa)
        for (const auto& [q, gq] : kappa)
            for (const auto& others : injective_tuples(N, i - 2)) {
                std::vector<Tuple> terms;
                for (int u : {r, gr})
                    for (int v : {q, gq}) {
                        Tuple t = others;
                        t.push_back(u);
                        t.push_back(v);
                        terms.push_back(t);
                    }
                add_terms(terms, RowKind::KerPiLastTwo);
            }
    // Rule 3: two basis entries from the same block.
    for (std::size_t k = 0; k < cols.size(); ++k) {
        const Tuple t = cols.tuple(k);
        bool hit = false;
        for (std::size_t p = 0; p < t.size() && !hit; ++p)
            for (std::size_t q = p + 1; q < t.size() && !hit; ++q) hit = s.block_of(t[p]) == s.block_of(t[q]);
        if (hit) sys.add(F2Vector::unit(cols.size(), k), RowKind::SameBlock);
    }
    return sys;
}

ConsSpace cons_space_general(const Shape& s, int i) { return kernel_of(cons_constraints_general(s, i)); }

std::uint64_t expected_cons_dim(int n, int i) {
    if (i == 1) return static_cast<std::uint64_t>(n);
    return static_cast<std::uint64_t>(i - 1) * binom(n, i);
}

std::uint64_t expected_cons_dim_general(const Shape& s, int i) {
    if (i == 1) return static_cast<std::uint64_t>(s.N());
    return static_cast<std::uint64_t>(s.N()) * binom(s.n() - 1, i - 1) - binom(s.n(), i);
}

namespace {

GovConsReport compare(const ConstraintSystem& sys, const std::vector<MultiTensor>& gov, std::uint64_t expected) {
    GovConsReport rep;
    rep.expected = expected;
    const auto M = F2Matrix::from_rows(sys.columns.size(), sys.rows);
    rep.cons_dim = sys.columns.size() - M.rank();
    std::vector<F2Vector> g;
    rep.gov_inside_cons = true;
    for (const auto& t : gov) {
        g.push_back(t.values());
        if (!M.apply(t.values()).is_zero()) rep.gov_inside_cons = false;
    }
    rep.gov_dim = rank_of(g);
    rep.equal = rep.gov_inside_cons && rep.gov_dim == rep.cons_dim && rep.cons_dim == expected;
    return rep;
}

}  // namespace

GovConsReport gov_equals_cons_check(int n, int i) {
    const Subset B = full_set(n);
    std::vector<MultiTensor> gov;
    if (i == 1) {
        for (int x = 0; x < n; ++x) gov.push_back(pure_tensor(n, B, {bit(x)}));
    } else {
        gov = gov_space(n, B, i);
    }
    return compare(cons_constraints(n, B, i), gov, expected_cons_dim(n, i));
}

GovConsReport gov_equals_cons_check_general(const Shape& s, int i) {
    return compare(cons_constraints_general(s, i), gov_space_general(s, i), expected_cons_dim_general(s, i));
}

// ----------------------------------------------------------- P decomposition

std::vector<MultiTensor> p_decompose(const MultiTensor& b) {
    if (b.arity() < 2) throw DomainError("P needs arity at least 2");
    std::vector<MultiTensor> parts;
    for (int j : elements(b.support())) {
        MultiTensor part(b.N(), b.arity() - 1, b.support() & ~bit(j));
        const auto& tuples = part.space().all();
        for (std::size_t k = 0; k < tuples.size(); ++k)
            if (b.eval(cat(j, tuples[k]))) part.values().set(k);
        parts.push_back(std::move(part));
    }
    return parts;
}

MultiTensor p_reassemble(int N, Subset B, const std::vector<MultiTensor>& parts) {
    const auto el = elements(B);
    if (parts.size() != el.size()) throw DomainError("one component per element of B is needed");
    const int i = parts.empty() ? 1 : parts[0].arity() + 1;
    MultiTensor out(N, i, B);
    for (std::size_t p = 0; p < el.size(); ++p) {
        const auto& part = parts[p];
        if (part.arity() != i - 1 || (part.support() & ~(B & ~bit(el[p])))) throw DomainError("component has the wrong support or arity");
        const auto& tuples = part.space().all();
        for (std::size_t k = 0; k < tuples.size(); ++k)
            if (part.values().get(k)) out.set(cat(el[p], tuples[k]), true);
    }
    return out;
}

// ---------------------------------------------------------- canonical tuples

std::vector<Tuple> canonical_tuples(Subset B, int i) {
    std::vector<Tuple> out;
    const int N = 32 - __builtin_clz(B | 1U);
    const TupleSpace sp(N, i, B);
    for (const auto& t : sp.all()) {
        bool ok = true;
        for (int h = 0; h + 1 <= i - 3; ++h)
            if (t[static_cast<std::size_t>(h)] > t[static_cast<std::size_t>(h + 1)]) ok = false;
        for (int h = 0; h + 1 < i; ++h)
            if (t[static_cast<std::size_t>(h)] > t.back()) ok = false;
        if (ok) out.push_back(t);
    }
    return out;
}

namespace {

void expand_into(Tuple t, std::map<Tuple, bool>& acc) {
    const std::size_t i = t.size();
    if (i >= 4) std::sort(t.begin(), t.begin() + static_cast<std::ptrdiff_t>(i - 2));
    if (i >= 2 && t[i - 2] > t[i - 1]) std::swap(t[i - 2], t[i - 1]);
    if (i >= 3 && t[i - 3] > t[i - 1]) {
        // b(.., a, b, c) = b(.., c, b, a) + b(.., b, c, a)
        const int a = t[i - 3], b = t[i - 2], c = t[i - 1];
        Tuple u = t, v = t;
        u[i - 3] = c, u[i - 2] = b, u[i - 1] = a;
        v[i - 3] = b, v[i - 2] = c, v[i - 1] = a;
        expand_into(u, acc);
        expand_into(v, acc);
        return;
    }
    acc[t] ^= true;
}

}  // namespace

std::vector<Tuple> canonical_expansion(const Tuple& t) {
    for (std::size_t p = 0; p < t.size(); ++p)
        for (std::size_t q = p + 1; q < t.size(); ++q)
            if (t[p] == t[q]) return {};
    std::map<Tuple, bool> acc;
    expand_into(t, acc);
    std::vector<Tuple> out;
    for (const auto& [u, odd] : acc)
        if (odd) out.push_back(u);
    return out;
}

// ------------------------------------------------------------------ text I/O

void write_tensor(std::ostream& os, const MultiTensor& t) {
    os << t.N() << ' ' << t.arity() << ' ';
    for (int k = 0; k < t.N(); ++k) os << (has(t.support(), k) ? '1' : '0');
    os << '\n';
    const auto& tuples = t.space().all();
    for (std::size_t k = 0; k < tuples.size(); ++k) {
        for (std::size_t h = 0; h < tuples[k].size(); ++h) os << (h ? "," : "") << tuples[k][h] + 1;
        os << '=' << (t.values().get(k) ? 1 : 0) << '\n';
    }
}

MultiTensor read_tensor(std::istream& is) {
    std::string header;
    if (!std::getline(is, header)) throw DomainError("missing tensor header");
    std::istringstream hs(header);
    int N = 0, i = 0;
    std::string bits;
    if (!(hs >> N >> i >> bits)) throw DomainError("malformed tensor header");
    if (static_cast<int>(bits.size()) != N) throw DomainError("support bit string must have N characters");
    Subset B = 0;
    for (int k = 0; k < N; ++k) {
        if (bits[static_cast<std::size_t>(k)] == '1')
            B |= bit(k);
        else if (bits[static_cast<std::size_t>(k)] != '0')
            throw DomainError("support bit string may only contain 0 and 1");
    }
    MultiTensor t(N, i, B);
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw DomainError("tensor line without '=': " + line);
        Tuple tup;
        std::stringstream ts(line.substr(0, eq));
        std::string item;
        while (std::getline(ts, item, ',')) {
            try {
                tup.push_back(std::stoi(item) - 1);
            } catch (const std::exception&) {
                throw DomainError("bad tuple entry in: " + line);
            }
        }
        const std::string val = line.substr(eq + 1);
        if (val != "0" && val != "1") throw DomainError("tensor value must be 0 or 1: " + line);
        if (static_cast<int>(tup.size()) != i) throw DomainError("tuple length does not match arity: " + line);
        for (int e : tup)
            if (e < 0 || e >= N) throw DomainError("tuple entry outside [N]: " + line);
        if (t.space().index(tup) == TupleSpace::npos) throw DomainError("tuple is not injective in the support: " + line);
        t.set(tup, val == "1");
    }
    return t;
}

}  // namespace gf
