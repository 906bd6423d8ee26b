#pragma once

#include <string>
#include <vector>

#include "genusforge/f2.hpp"
#include "genusforge/groups.hpp"
#include "genusforge/shape.hpp"
#include "genusforge/tensors.hpp"

namespace gf {

// Graded Lie algebra over F2 generated in degree 1, with grade 1 identified with V = F2^N
// through psi (basis vector x of grade 1 is psi^{-1}(e_x)). Brackets between two pieces of
// degree >= 2 are zero, so the algebra is determined by ad(e_x) on every grade.
struct GradedLie {
    Shape shape;
    std::vector<std::size_t> dims;  // dims[g-1] = dim L_g
    // br[g-1][x][k] = [e_x, b_k] in L_{g+1}, b_k the k-th basis vector of L_g.
    // For the top grade the entries have length 0.
    std::vector<std::vector<std::vector<F2Vector>>> br;
    std::vector<std::vector<std::string>> labels;  // optional basis names per grade

    int N() const { return shape.N(); }
    int grades() const { return static_cast<int>(dims.size()); }
    std::size_t dim(int g) const { return g >= 1 && g <= grades() ? dims[static_cast<std::size_t>(g - 1)] : 0; }
    std::size_t total_dim() const;
    // [e_x, w] for w in L_g.
    F2Vector ad(int x, int g, const F2Vector& w) const;
    // [u, w] for u in L_1 and w in L_g.
    F2Vector bracket(const F2Vector& u, int g, const F2Vector& w) const;
    // [e_{t0}, [e_{t1}, ... [e_{t_{m-2}}, e_{t_{m-1}}]]] in L_m.
    F2Vector nested(const Tuple& t) const;
};

// Quotients along the descending central series; grade-1 basis is the classes of g_x.
GradedLie lie_from_group(const ExpansionGroup& G);

// The pointed-set model: grade i spanned by e_(A,x) + e_(A,y), basis given by the chain
// {a_m, a_{m+1}} of consecutive elements of A; ad(e_j) acts as T_j.
GradedLie governing_algebra(int n);

// Dual of the governing tensor spaces of the block shape, bracket by contraction:
// [e_j, rho](phi) = rho(phi(e_j, -)).
GradedLie governing_algebra_general(const Shape& s);
// Same construction on the constraint kernels Cons instead of the governing spans.
GradedLie cons_dual_algebra(const Shape& s);

struct LieAxiomReport {
    bool graded = false, alternating = false, jacobi = false;
    bool axiom1 = false, axiom2 = false, axiom3 = false, axiom4 = false;
    bool tilde1 = true, tilde2 = true;
    std::string failure;
    bool all() const { return axiom1 && axiom2 && axiom3 && axiom4 && tilde1 && tilde2; }
};
LieAxiomReport check_lie_axioms(const GradedLie& L, const Shape& shape);

struct LieMorphism {
    // images[g-1][k]: image of the k-th basis vector of the source grade g.
    std::vector<std::vector<F2Vector>> images;
    std::vector<std::size_t> kernel_dims;
    bool surjective = false;
    bool injective = false;
    std::size_t kernel_dim() const;
    F2Vector apply(int g, const F2Vector& v) const;
};
// The unique map fixing grade 1 and commuting with every ad(e_x). Throws
// ClassificationViolation if the extension is inconsistent.
LieMorphism lie_epimorphism(const GradedLie& source, const GradedLie& target);

// Pairing of the pointed-set model with the constraint kernels:
// <e_(A,x), phi_(B,y)> = [A = B][x = y]. Row k of grade i gives the chain basis vector k
// as a functional on the Cons basis used by cons_dual_algebra.
std::vector<std::vector<F2Vector>> pairing_identification(int n);

}  // namespace gf
