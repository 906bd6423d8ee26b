#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "genusforge/f2.hpp"
#include "genusforge/parallel.hpp"
#include "genusforge/shape.hpp"

namespace gf {

inline constexpr std::size_t kEnumerationCap = std::size_t{1} << 22;

// Element of F2[F2^{[n]-{p}}] x| F2^{[n]-{p}}. The polynomial is stored in monomial
// coordinates: bit S of `poly` is the coefficient of t_S, S a subset of [n] - {p}.
struct SemidirectElement {
    std::uint64_t poly = 0;
    Subset vec = 0;
    bool operator==(const SemidirectElement&) const = default;
};

// x^v * a, i.e. the action of the group element v on the group ring.
std::uint64_t act(Subset v, std::uint64_t a);
SemidirectElement sd_mul(const SemidirectElement& a, const SemidirectElement& b);
SemidirectElement sd_inv(const SemidirectElement& a);

struct GroupElement {
    std::vector<SemidirectElement> comps;
    bool operator==(const GroupElement&) const = default;
};

// Component layout of a product of semidirect factors sharing the index set [n].
class ConcreteModel {
public:
    ConcreteModel(int n, std::vector<int> pointers);
    int n() const { return n_; }
    int factors() const { return static_cast<int>(pointers_.size()); }
    int pointer(int c) const { return pointers_[static_cast<std::size_t>(c)]; }
    const std::vector<int>& pointers() const { return pointers_; }
    bool packable() const { return packable_; }

    GroupElement identity() const;
    GroupElement mul(const GroupElement& a, const GroupElement& b) const;
    GroupElement inv(const GroupElement& a) const;
    Key pack(const GroupElement& g) const;
    GroupElement unpack(Key k) const;
    Key mul_packed(Key a, Key b) const;
    Key inv_packed(Key a) const;
    SemidirectElement component(Key k, int c) const;

private:
    int n_;
    std::vector<int> pointers_;
    int width_;  // bits per component
    bool packable_;
};

// Where coordinate x of phi is read from: the t_empty bit of a component, or a vector bit.
struct PhiSource {
    int comp = 0;
    int vec_bit = -1;  // -1: coefficient of t_empty
};

struct AxiomReport {
    bool axiom1 = false, axiom2 = false, axiom3 = false, axiom4 = false;
    bool block_condition = true;  // phi^{-1}(ker pi) elementary abelian
    std::string failure;
    bool all() const { return axiom1 && axiom2 && axiom3 && axiom4 && block_condition; }
};

// Coordinates on an elementary abelian subgroup; coord(basis[k]) = bit k.
struct KernelCoords {
    std::vector<std::uint32_t> basis;
    std::vector<std::uint32_t> elem_of_coord;  // size 2^dim
    std::vector<std::uint64_t> coord;          // indexed by element; valid on members only
    std::vector<bool> member;
    std::size_t dim() const { return basis.size(); }
};

// A finite group with distinguished generators g_1..g_N and a map phi to F2^N, held as
// its Cayley graph. Concrete groups also keep their semidirect-product coordinates.
class ExpansionGroup {
public:
    // Closure of the given generators inside a concrete model.
    static ExpansionGroup from_model(Shape shape, ConcreteModel model, std::vector<GroupElement> gens,
                                     std::vector<PhiSource> phi, std::size_t cap = kEnumerationCap,
                                     Exec exec = Exec::Parallel);
    // Abstract group from a Cayley graph numbered breadth first from the identity.
    static ExpansionGroup from_cayley(Shape shape, std::vector<std::vector<std::uint32_t>> rmul,
                                      std::vector<Subset> phi);

    const Shape& shape() const { return shape_; }
    std::size_t order() const { return phi_.size(); }
    double log2_order() const;
    int num_generators() const { return static_cast<int>(rmul_.size()); }
    std::uint32_t generator(int x) const { return rmul_[static_cast<std::size_t>(x)][0]; }
    std::uint32_t rmul(int x, std::uint32_t e) const { return rmul_[static_cast<std::size_t>(x)][e]; }
    const std::vector<std::vector<std::uint32_t>>& cayley() const { return rmul_; }
    Subset phi(std::uint32_t e) const { return phi_[e]; }
    std::uint32_t parent(std::uint32_t e) const { return parent_[e]; }
    int parent_gen(std::uint32_t e) const { return parent_gen_[e]; }

    std::uint32_t mul(std::uint32_t a, std::uint32_t b) const;
    std::uint32_t inv(std::uint32_t a) const;
    std::uint32_t commutator(std::uint32_t a, std::uint32_t b) const;  // a b a^-1 b^-1
    std::uint32_t conj(std::uint32_t g, std::uint32_t w) const;        // g w g^-1
    std::vector<int> word(std::uint32_t e) const;                       // generators, left to right

    bool is_concrete() const { return model_ != nullptr; }
    const ConcreteModel& model() const;
    GroupElement element(std::uint32_t e) const;
    std::optional<std::uint32_t> index_of(const GroupElement& g) const;
    SemidirectElement component(std::uint32_t e, int c) const;

    // Tables for fast multiplication of small groups.
    void build_table(std::size_t max_order = 4096);
    bool has_table() const { return !table_.empty(); }

    // ker(phi) as an elementary abelian group; throws PreconditionError if it is not one.
    const KernelCoords& kernel() const;
    // Matrix of conjugation by generator x in kernel coordinates (column k = image of basis k).
    const std::vector<std::uint64_t>& action(int x) const;
    std::uint64_t act_on_kernel(int x, std::uint64_t w) const;

private:
    ExpansionGroup() = default;
    void finish();

    Shape shape_;
    std::vector<std::vector<std::uint32_t>> rmul_;
    std::vector<Subset> phi_;
    std::vector<std::uint32_t> parent_;
    std::vector<std::uint8_t> parent_gen_;
    std::vector<std::uint32_t> gen_inverse_word_len_;  // order of each generator minus one
    std::shared_ptr<const ConcreteModel> model_;
    std::shared_ptr<const KeyIndex> keys_;
    std::vector<std::uint32_t> table_;
    mutable std::shared_ptr<KernelCoords> kernel_;
    mutable std::vector<std::vector<std::uint64_t>> action_;
};

// Right-nested commutator [a_0, [a_1, [..., [a_{m-2}, a_{m-1}]]]]; needs m >= 2.
std::uint32_t nested_commutator(const ExpansionGroup& G, const std::vector<std::uint32_t>& elems);

// Greedy coordinates on the subgroup {e : pred(e)}; nullopt if it is not elementary abelian.
std::optional<KernelCoords> elementary_abelian_coords(const ExpansionGroup& G, const std::vector<bool>& member);

// G_i([n]); i is 0-based.
ExpansionGroup build_single_factor(int n, int i, Exec exec = Exec::Parallel);
// The universal group over [n]; resource error for n >= 5.
ExpansionGroup build_universal(int n, Exec exec = Exec::Parallel);
ExpansionGroup build_universal_general(const Shape& s, Exec exec = Exec::Parallel);
// Closed form log2 of the universal order: (sum k) 2^{n-1} - 2^n + n + 1.
std::uint64_t universal_log2_formula(const Shape& s);
// Exact log2 order computed from the commutator subspace, without enumerating.
std::uint64_t universal_log2_linear(const Shape& s);
// The model behind the universal group, with its generators.
struct UniversalModel {
    ConcreteModel model;
    std::vector<GroupElement> gens;
    std::vector<PhiSource> phi;
};
UniversalModel universal_model(const Shape& s);

ExpansionGroup product_expansion(const ExpansionGroup& a, const ExpansionGroup& b, Exec exec = Exec::Parallel);

AxiomReport check_expansion_axioms(const ExpansionGroup& G);

// Descending central series G^(2) > G^(3) > ... (down to 0) in kernel coordinates.
std::vector<MaskSpan> descending_central_series(const ExpansionGroup& G);
// Same series computed from group commutators [g, w] with g running over all of G.
std::vector<MaskSpan> central_series_by_commutators(const ExpansionGroup& G, Exec exec = Exec::Parallel);
// I^k G^(2) for k = 0, 1, ... until zero.
std::vector<MaskSpan> augmentation_filtration(const ExpansionGroup& G);

// Quotient by the normal closure of `seeds`. Generators listed in `drop` must land in the
// subgroup; they are removed together with their phi coordinates.
ExpansionGroup quotient(const ExpansionGroup& G, const std::vector<std::uint32_t>& seeds, Subset drop_generators,
                        const Shape& new_shape);
// Quotient by the normal closure of the generators of block i (0-based).
ExpansionGroup corner(const ExpansionGroup& G, int block);
// Quotient keeping every generator, killing commutators that involve block i.
ExpansionGroup inflated_corner(const ExpansionGroup& G, int block);
ExpansionGroup abelianization(const ExpansionGroup& G);

struct Epimorphism {
    std::vector<std::uint32_t> map;
    bool surjective = false;
};
// The homomorphism g_x -> g'_x if it is well defined.
std::optional<Epimorphism> unique_epimorphism(const ExpansionGroup& source, const ExpansionGroup& target);

// Text dump: header lines, then one element per line.
void dump_group(std::ostream& os, const ExpansionGroup& G);
struct GroupDump {
    Shape shape;
    int n = 0;
    std::vector<int> pointers;
    std::vector<GroupElement> gens;
    std::vector<GroupElement> elements;
};
GroupDump read_group_dump(std::istream& is);

}  // namespace gf
