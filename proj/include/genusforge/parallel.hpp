#pragma once

// Kernels with a serial reference and an OpenMP version. Both produce identical output;
// the tests compare them and the benchmark target times them.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

#include "genusforge/errors.hpp"

namespace gf {

using Key = unsigned __int128;

// Reads GENUSFORGE_THREADS once and applies it to the OpenMP runtime.
int configured_threads();

enum class Exec { Serial, Parallel };

// Open-addressing map from 128-bit keys to dense indices.
class KeyIndex {
public:
    explicit KeyIndex(std::size_t expected = 1024);
    static constexpr std::uint32_t none = 0xffffffffU;
    std::uint32_t find(Key k) const;
    // Inserts k with the next index if absent; returns its index.
    std::uint32_t insert(Key k);
    std::size_t size() const { return keys_.size(); }
    const std::vector<Key>& keys() const { return keys_; }
    Key key(std::uint32_t idx) const { return keys_[idx]; }

private:
    static std::uint64_t mix(Key k);
    void grow();
    std::vector<std::uint32_t> slots_;
    std::vector<Key> keys_;
    std::uint64_t mask_ = 0;
};

// Result of a breadth-first closure from the identity under right multiplication by
// generators. Element 0 is the identity; parent[e] < e for e > 0.
struct Closure {
    KeyIndex index{16};
    std::vector<std::vector<std::uint32_t>> rmul;  // rmul[g][e] = e * g
    std::vector<std::uint32_t> parent;
    std::vector<std::uint8_t> parent_gen;
};

using StepFn = std::function<Key(Key, int)>;

// Throws ResourceError once more than `cap` elements are found.
Closure bfs_closure(Key identity, int ngen, const StepFn& step, std::size_t cap, Exec exec);

struct PairWitness {
    std::uint64_t failures = 0;
    std::uint64_t first_a = 0, first_b = 0;  // lexicographically first failing pair
    bool ok() const { return failures == 0; }
};

// Counts pairs (a, b) in [0,na) x [0,nb) with pred(a, b) false.
PairWitness check_pairs(std::uint64_t na, std::uint64_t nb, const std::function<bool(std::uint64_t, std::uint64_t)>& pred, Exec exec);

}  // namespace gf
