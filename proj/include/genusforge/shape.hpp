#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace gf {

using Subset = std::uint32_t;  // bitmask, bit k <-> element k (0-based)

inline int popcount(Subset s) { return __builtin_popcount(s); }
inline bool has(Subset s, int k) { return (s >> k) & 1U; }
inline Subset bit(int k) { return Subset{1} << k; }
inline Subset full_set(int n) { return n >= 32 ? ~Subset{0} : (Subset{1} << n) - 1; }
std::vector<int> elements(Subset s);
std::string subset_to_string(Subset s);  // "{1,3}" with 1-based labels

std::uint64_t binom(int n, int k);

// Block vector k = (k_1, ..., k_n); the index set [N] is cut into consecutive blocks.
class Shape {
public:
    Shape() = default;
    explicit Shape(std::vector<int> k);
    static Shape ones(int n) { return Shape(std::vector<int>(static_cast<std::size_t>(n), 1)); }
    static Shape parse(const std::string& csv);  // "2,1"

    int n() const { return static_cast<int>(k_.size()); }
    int N() const { return N_; }
    int k(int block) const { return k_[static_cast<std::size_t>(block)]; }
    const std::vector<int>& sizes() const { return k_; }
    int block_of(int x) const { return block_of_[static_cast<std::size_t>(x)]; }
    int first_of(int block) const { return first_[static_cast<std::size_t>(block)]; }
    // f(block): the indices in [N] that make up the block.
    Subset block_mask(int block) const;
    // Indices of [N] whose blocks lie in the given block set.
    Subset indices_over(Subset blocks) const;
    bool all_ones() const;
    // Shape with the blocks in `removed` deleted.
    Shape without(Subset removed) const;
    std::string to_string() const;  // "(2,1)"
    bool operator==(const Shape& o) const { return k_ == o.k_; }

private:
    std::vector<int> k_;
    std::vector<int> block_of_;
    std::vector<int> first_;
    int N_ = 0;
};

// All compositions of N into positive parts, for N = 1..max_total.
std::vector<Shape> shapes_up_to(int max_total);

}  // namespace gf
