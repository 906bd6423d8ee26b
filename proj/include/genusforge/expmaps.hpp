#pragma once

#include <optional>
#include <unordered_map>
#include <string>
#include <utility>
#include <vector>

#include "genusforge/f2.hpp"
#include "genusforge/groups.hpp"
#include "genusforge/shape.hpp"

namespace gf {

// Basis function of the Phi space. Characters chi_x carry A = {block(x)};
// the maps Phi_(A,x) have |A| >= 2 and block(x) in A. Blocks and indices keep the
// numbering of the ambient shape, also for sub-shapes.
struct PhiLabel {
    bool character = false;
    Subset A = 0;
    int x = 0;
    bool operator==(const PhiLabel&) const = default;
};
std::string label_name(const PhiLabel& l);  // "chi_3", "Phi({1,2},3)"

// Element of the Phi space of the sub-shape made of the blocks in `blocks`,
// in coordinates over that sub-shape's labels.
struct PhiMap {
    Subset blocks = 0;
    F2Vector coords;
    bool operator==(const PhiMap&) const = default;
    bool is_zero() const { return coords.is_zero(); }
    PhiMap& operator^=(const PhiMap& o);
};

// A function of two group elements, stored as one row per left argument with rows shared.
class ThetaCocycle {
public:
    ThetaCocycle() = default;
    ThetaCocycle(std::size_t order, std::vector<F2Vector> pool, std::vector<std::uint32_t> row_of);
    static ThetaCocycle from_rows(std::vector<F2Vector> rows);
    std::size_t order() const { return row_.size(); }
    bool at(std::uint32_t s, std::uint32_t t) const { return pool_[row_[s]].get(t); }
    const F2Vector& row(std::uint32_t s) const { return pool_[row_[s]]; }
    ThetaCocycle operator^(const ThetaCocycle& o) const;

private:
    std::vector<F2Vector> pool_;
    std::vector<std::uint32_t> row_;
};

// df(s, t) = f(st) + f(s) + f(t).
ThetaCocycle coboundary(const ExpansionGroup& G, const F2Vector& f);
// Number of triples violating the 2-cocycle identity (exhaustive; needs a table).
std::uint64_t cocycle_violations(const ExpansionGroup& G, const ThetaCocycle& th);
bool same_cocycle(const ThetaCocycle& a, const ThetaCocycle& b);

struct Obstruction {
    std::uint32_t element = 0;  // edge (element, generator) that cannot be satisfied
    int generator = -1;
};
// Phi_0 with dPhi_0 = theta, found by spreading along the Cayley graph; the value on each
// generator is a free unknown solved for at the end. Theta must be a normalized 2-cocycle.
std::optional<F2Vector> solve_cochain(const ExpansionGroup& G, const ThetaCocycle& th, Obstruction* witness = nullptr);

struct CommVector {
    std::vector<PhiMap> entries;  // entry i lives on the blocks [n] - {i}
};

// The Phi space of a block shape, realized on the enumerated universal group.
class PhiSpace {
public:
    explicit PhiSpace(const Shape& s, Exec exec = Exec::Parallel);

    const Shape& shape() const { return shape_; }
    const ExpansionGroup& group() const { return G_; }
    Subset all_blocks() const { return full_set(shape_.n()); }

    const std::vector<PhiLabel>& labels(Subset blocks) const;
    std::size_t dim(Subset blocks) const { return labels(blocks).size(); }
    std::optional<std::size_t> index_of(Subset blocks, const PhiLabel& l) const;
    PhiMap zero(Subset blocks) const;
    PhiMap basis_map(Subset blocks, std::size_t k) const;
    PhiMap character(int x) const;
    // chi_A = prod_{j in A} chi_j on the blocks `within` (A must be inside it).
    PhiMap chi_A(Subset A, Subset within) const;

    // Direct evaluation from the group coordinates of an element.
    bool value(const PhiLabel& l, std::uint32_t e) const;
    F2Vector table(const PhiLabel& l) const;
    F2Vector values(const PhiMap& f) const;
    // Block character chi_j and the products chi_B (chi_empty = 0).
    Subset block_chars(std::uint32_t e) const;
    bool chi_B(Subset B, std::uint32_t e) const;

    // Coordinates of a function on the group, if it lies in the full Phi space.
    std::optional<PhiMap> coords_of(const F2Vector& values) const;

    // Cornering operators.
    PhiMap P(int i, const PhiMap& f) const;
    PhiMap P_set(Subset B, const PhiMap& f) const;

    // 0 for the zero map, otherwise the least j with f vanishing on G^(j+1).
    int nil_deg(const PhiMap& f) const;
    // Phi_j of the full shape as a subspace, computed from the series.
    std::vector<PhiMap> direct_layer(int j) const;
    // Span of the characters and the chi_A.
    std::vector<PhiMap> layer_one(Subset blocks) const;

    // Nilpotency class of the group.
    int group_class() const { return static_cast<int>(series_.size()) + 1; }
    const std::vector<MaskSpan>& series() const { return series_; }

private:
    Shape shape_;
    ExpansionGroup G_;
    std::vector<std::vector<PhiLabel>> labels_;  // indexed by block subset
    std::vector<std::unordered_map<std::uint64_t, std::size_t>> index_;
    std::vector<MaskSpan> series_;
    mutable std::vector<F2Vector> tables_;  // full-shape labels, lazily
    mutable std::vector<F2Vector> solve_rows_, solve_tags_;
    mutable std::vector<std::size_t> solve_piv_;
    const std::vector<F2Vector>& full_tables() const;
};

// Universal equation dPhi(s,t) = sum_{B nonempty} chi_B(s) P_B(Phi)(t); number of failing pairs.
std::uint64_t universal_equation_mismatches(const PhiSpace& S, const PhiMap& f);

// (Phi_(A,x) of the nested commutator, governing tensor on the characters of the tuple).
std::pair<bool, bool> lcomm_check(const PhiSpace& S, Subset A, int x, const std::vector<std::uint32_t>& tuple);

// sum_{i in A} sum_{x in f(i)} Phi_(A,x) == chi_A as value tables.
bool shuffling_check(const PhiSpace& S, Subset A);

struct RestrictionReport {
    std::size_t phi_dim = 0, commutator_dim = 0, restriction_rank = 0;
    std::size_t kernel_dim = 0, predicted_kernel_dim = 0;
    bool surjective = false, kernel_matches = false;
};
RestrictionReport restriction_kernel_check(const PhiSpace& S);

struct CocycleView {
    std::vector<PhiMap> parts;  // parts[B] = P_B(Phi), B a block subset
    bool certified = false;
};
CocycleView cocycle_view(const PhiSpace& S, const PhiMap& f);

bool is_commuting(const PhiSpace& S, const CommVector& v);
// P_B of a commuting vector for nonempty B.
PhiMap comm_P(const PhiSpace& S, const CommVector& v, Subset B);
ThetaCocycle theta(const PhiSpace& S, const CommVector& v);
PhiMap realize_commuting_vector(const PhiSpace& S, const CommVector& v);

struct LayerResult {
    int j = 0;
    std::vector<PhiMap> basis;
    std::size_t comm_dim = 0;           // dim Comm-Vect_j
    std::size_t obstruction_count = 0;  // commuting directions whose cocycle is not a coboundary
    std::size_t dim() const { return basis.size(); }
};
// Phi_j from the corner layers Phi_{j-1} (entry i on the blocks [n] - {i}).
LayerResult reconstruct_layer(const PhiSpace& S, int j, const std::vector<std::vector<PhiMap>>& corner_spaces);

// Phi_{j} of the corner shape without block i, computed on that corner's own group and
// relabelled into the ambient numbering.
std::vector<PhiMap> corner_layer(const PhiSpace& S, int i, int j);

bool same_subspace(const std::vector<PhiMap>& a, const std::vector<PhiMap>& b);

}  // namespace gf
