#include "genusforge/parallel.hpp"

#include <algorithm>
#include <cstdlib>
#include <limits>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace gf {

int configured_threads() {
    static const int threads = [] {
        int t = 1;
#ifdef _OPENMP
        t = omp_get_max_threads();
        if (const char* env = std::getenv("GENUSFORGE_THREADS")) {
            const int v = std::atoi(env);
            if (v > 0) t = v;
        }
        omp_set_num_threads(t);
#endif
        return t;
    }();
    return threads;
}

// ------------------------------------------------------------------ KeyIndex

KeyIndex::KeyIndex(std::size_t expected) {
    std::size_t cap = 16;
    while (cap < expected * 2) cap <<= 1;
    slots_.assign(cap, none);
    mask_ = cap - 1;
    keys_.reserve(expected);
}

std::uint64_t KeyIndex::mix(Key k) {
    std::uint64_t h = static_cast<std::uint64_t>(k) * 0x9e3779b97f4a7c15ULL;
    h ^= static_cast<std::uint64_t>(k >> 64) + 0x632be59bd9b4e019ULL + (h << 6) + (h >> 2);
    h ^= h >> 31;
    h *= 0xbf58476d1ce4e5b9ULL;
    h ^= h >> 29;
    return h;
}

std::uint32_t KeyIndex::find(Key k) const {
    for (std::uint64_t s = mix(k) & mask_;; s = (s + 1) & mask_) {
        const std::uint32_t v = slots_[s];
        if (v == none) return none;
        if (keys_[v] == k) return v;
    }
}

void KeyIndex::grow() {
    const std::size_t cap = slots_.size() * 2;
    slots_.assign(cap, none);
    mask_ = cap - 1;
    for (std::uint32_t v = 0; v < keys_.size(); ++v) {
        std::uint64_t s = mix(keys_[v]) & mask_;
        while (slots_[s] != none) s = (s + 1) & mask_;
        slots_[s] = v;
    }
}

std::uint32_t KeyIndex::insert(Key k) {
    if ((keys_.size() + 1) * 2 > slots_.size()) grow();
    std::uint64_t s = mix(k) & mask_;
    for (;; s = (s + 1) & mask_) {
        const std::uint32_t v = slots_[s];
        if (v == none) break;
        if (keys_[v] == k) return v;
    }
    const auto idx = static_cast<std::uint32_t>(keys_.size());
    slots_[s] = idx;
    keys_.push_back(k);
    return idx;
}

// ---------------------------------------------------------------- BFS closure

namespace {

void over_cap(std::size_t cap) {
    throw ResourceError("enumeration exceeded the element cap of " + std::to_string(cap));
}

}  // namespace

Closure bfs_closure(Key identity, int ngen, const StepFn& step, std::size_t cap, Exec exec) {
    if (ngen < 0 || ngen > 255) throw DomainError("generator count out of range");
    Closure c;
    c.rmul.assign(static_cast<std::size_t>(ngen), {});
    c.index.insert(identity);
    c.parent.push_back(0);
    c.parent_gen.push_back(0);

    auto record = [&](std::uint32_t from, int g, Key k) {
        std::uint32_t to = c.index.find(k);
        if (to == KeyIndex::none) {
            if (c.index.size() >= cap) over_cap(cap);
            to = c.index.insert(k);
            c.parent.push_back(from);
            c.parent_gen.push_back(static_cast<std::uint8_t>(g));
        }
        c.rmul[static_cast<std::size_t>(g)].push_back(to);
    };

    if (exec == Exec::Serial) {
        for (std::uint32_t e = 0; e < c.index.size(); ++e)
            for (int g = 0; g < ngen; ++g) record(e, g, step(c.index.key(e), g));
        return c;
    }

    // Level-synchronous: products and lookups in parallel, insertion serially in the
    // same (element, generator) order as the serial loop, so numbering agrees.
    configured_threads();
    std::size_t lo = 0;
    std::vector<Key> prod;
    std::vector<std::uint32_t> hit;
    while (lo < c.index.size()) {
        const std::size_t hi = c.index.size();
        const std::size_t cnt = (hi - lo) * static_cast<std::size_t>(ngen);
        prod.resize(cnt);
        hit.resize(cnt);
        const auto& idx = c.index;
#pragma omp parallel for schedule(static)
        for (std::int64_t t = 0; t < static_cast<std::int64_t>(cnt); ++t) {
            const std::size_t e = lo + static_cast<std::size_t>(t) / static_cast<std::size_t>(ngen);
            const int g = static_cast<int>(static_cast<std::size_t>(t) % static_cast<std::size_t>(ngen));
            prod[static_cast<std::size_t>(t)] = step(idx.key(static_cast<std::uint32_t>(e)), g);
            hit[static_cast<std::size_t>(t)] = idx.find(prod[static_cast<std::size_t>(t)]);
        }
        for (std::size_t t = 0; t < cnt; ++t) {
            const auto e = static_cast<std::uint32_t>(lo + t / static_cast<std::size_t>(ngen));
            const int g = static_cast<int>(t % static_cast<std::size_t>(ngen));
            if (hit[t] != KeyIndex::none)
                c.rmul[static_cast<std::size_t>(g)].push_back(hit[t]);
            else
                record(e, g, prod[t]);
        }
        lo = hi;
    }
    return c;
}

// ----------------------------------------------------------------- pair check

PairWitness check_pairs(std::uint64_t na, std::uint64_t nb, const std::function<bool(std::uint64_t, std::uint64_t)>& pred, Exec exec) {
    PairWitness w;
    const std::uint64_t none = std::numeric_limits<std::uint64_t>::max();
    std::uint64_t first = none;
    if (exec == Exec::Serial) {
        for (std::uint64_t a = 0; a < na; ++a)
            for (std::uint64_t b = 0; b < nb; ++b)
                if (!pred(a, b)) {
                    if (first == none) first = a * nb + b;
                    ++w.failures;
                }
    } else {
        configured_threads();
        std::uint64_t fails = 0;
#pragma omp parallel for schedule(dynamic, 16) reduction(+ : fails) reduction(min : first)
        for (std::int64_t a = 0; a < static_cast<std::int64_t>(na); ++a)
            for (std::uint64_t b = 0; b < nb; ++b)
                if (!pred(static_cast<std::uint64_t>(a), b)) {
                    first = std::min(first, static_cast<std::uint64_t>(a) * nb + b);
                    ++fails;
                }
        w.failures = fails;
    }
    if (first != none) {
        w.first_a = first / nb;
        w.first_b = first % nb;
    }
    return w;
}

}  // namespace gf
