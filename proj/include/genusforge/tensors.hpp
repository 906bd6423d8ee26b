#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "genusforge/f2.hpp"
#include "genusforge/shape.hpp"

namespace gf {

using Tuple = std::vector<int>;  // 0-based entries

// Injective tuples of length i with entries in a support set B, in lexicographic order.
class TupleSpace {
public:
    TupleSpace() = default;
    TupleSpace(int N, int i, Subset B);

    int N() const { return N_; }
    int arity() const { return i_; }
    Subset support() const { return B_; }
    std::size_t size() const { return size_; }
    static constexpr std::size_t npos = static_cast<std::size_t>(-1);
    // npos for tuples that repeat an entry or leave B.
    std::size_t index(const Tuple& t) const;
    Tuple tuple(std::size_t idx) const;
    const std::vector<Tuple>& all() const;

private:
    int N_ = 0, i_ = 0;
    Subset B_ = 0;
    int m_ = 0;
    std::vector<int> pos_;       // element -> rank in B, -1 if absent
    std::vector<int> elems_;     // rank -> element
    std::vector<std::size_t> w_; // positional weights, falling factorials
    std::size_t size_ = 0;
    mutable std::vector<Tuple> cache_;
};

// A multilinear form on V_N^i that vanishes on tuples with repeated basis vectors
// and on basis vectors outside B. Stored as its values on injective tuples of B.
class MultiTensor {
public:
    MultiTensor() = default;
    MultiTensor(int N, int i, Subset B);
    MultiTensor(const TupleSpace& space, F2Vector values);

    int N() const { return space_.N(); }
    int arity() const { return space_.arity(); }
    Subset support() const { return space_.support(); }
    const TupleSpace& space() const { return space_; }
    const F2Vector& values() const { return values_; }
    F2Vector& values() { return values_; }

    // Value on a tuple of basis vectors.
    bool eval(const Tuple& t) const;
    // Multilinear value on arbitrary vectors of V_N.
    bool eval_vectors(const std::vector<F2Vector>& args) const;
    void set(const Tuple& t, bool v);
    // Re-express on a larger support (values outside the old support are zero).
    MultiTensor widen(Subset B) const;
    bool operator==(const MultiTensor& o) const;
    MultiTensor& operator^=(const MultiTensor& o);

private:
    TupleSpace space_;
    F2Vector values_;
};

// Pure tensor of linear forms: prod_h lambda_h(sigma_h), restricted to injective tuples of B.
MultiTensor pure_tensor(int N, Subset B, const std::vector<Subset>& forms);

// phi_(A,x): sum over bijections [i] -> A with x in one of the last two slots.
MultiTensor governing_tensor(int N, Subset A, int x);
// Spanning family {phi_(A,x) : A subset of B, |A| = i, x in A}.
std::vector<MultiTensor> gov_space(int N, Subset B, int i);

// Block version: A is a set of blocks, x a block of A, T a nonempty subset of f(x).
MultiTensor governing_tensor_general(const Shape& s, Subset A, int x, Subset T);
std::vector<MultiTensor> gov_space_general(const Shape& s, int i);

enum class RowKind { Inflated, Symmetry, HallWitt, Commutativity, KerPiEarly, KerPiLastTwo, SameBlock };

struct ConstraintSystem {
    TupleSpace columns;
    std::vector<F2Vector> rows;
    std::vector<RowKind> kinds;
    void add(F2Vector r, RowKind k) {
        rows.push_back(std::move(r));
        kinds.push_back(k);
    }
};

struct ConsSpace {
    TupleSpace columns;
    std::vector<F2Vector> basis;  // kernel basis of the constraint matrix
    std::size_t dim() const { return basis.size(); }
    std::vector<MultiTensor> tensors() const;
    bool contains(const MultiTensor& t) const;
};

// Linear equations cutting Cons(V_B, i) out of the injective-tuple space of B.
ConstraintSystem cons_constraints(int N, Subset B, int i);
ConsSpace kernel_of(const ConstraintSystem& sys);
ConsSpace cons_space(int N, Subset B, int i);

// Cons(V_N, i) together with the three block vanishing rules.
ConstraintSystem cons_constraints_general(const Shape& s, int i);
ConsSpace cons_space_general(const Shape& s, int i);

// Closed forms: (i-1) C(n,i) for i >= 2, and n for i = 1.
std::uint64_t expected_cons_dim(int n, int i);
// (sum k) C(n-1,i-1) - C(n,i) for i >= 2, and sum k for i = 1.
std::uint64_t expected_cons_dim_general(const Shape& s, int i);

struct GovConsReport {
    std::size_t cons_dim = 0;
    std::size_t gov_dim = 0;
    std::uint64_t expected = 0;
    bool gov_inside_cons = false;
    bool equal = false;  // spans agree and match the closed form
};
GovConsReport gov_equals_cons_check(int n, int i);
GovConsReport gov_equals_cons_check_general(const Shape& s, int i);

// P(b) = (b(e_j, -))_{j in B}; the j-th entry lives on B - {j} with arity i-1.
std::vector<MultiTensor> p_decompose(const MultiTensor& b);
MultiTensor p_reassemble(int N, Subset B, const std::vector<MultiTensor>& parts);

// Tuples with distinct entries, first i-2 increasing, last entry maximal.
std::vector<Tuple> canonical_tuples(Subset B, int i);
// Rewrites an injective tuple into a sum of canonical tuples using symmetry of the first
// i-2 slots, symmetry of the last two and the Hall-Witt relation.
std::vector<Tuple> canonical_expansion(const Tuple& t);

// Text form: header "N i B" with B as a little-endian bit string,
// then one line "i1,...,ii=bit" per stored tuple, 1-based.
void write_tensor(std::ostream& os, const MultiTensor& t);
MultiTensor read_tensor(std::istream& is);

}  // namespace gf
