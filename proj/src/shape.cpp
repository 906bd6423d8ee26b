#include "genusforge/shape.hpp"

#include <sstream>

#include "genusforge/errors.hpp"

namespace gf {

std::vector<int> elements(Subset s) {
    std::vector<int> out;
    for (int k = 0; s; ++k, s >>= 1)
        if (s & 1U) out.push_back(k);
    return out;
}

std::string subset_to_string(Subset s) {
    std::string out = "{";
    bool first = true;
    for (int k : elements(s)) {
        if (!first) out += ",";
        out += std::to_string(k + 1);
        first = false;
    }
    return out + "}";
}

std::uint64_t binom(int n, int k) {
    if (k < 0 || n < 0 || k > n) return 0;
    std::uint64_t r = 1;
    for (int j = 1; j <= k; ++j) r = r * static_cast<std::uint64_t>(n - k + j) / static_cast<std::uint64_t>(j);
    return r;
}

Shape::Shape(std::vector<int> k) : k_(std::move(k)) {
    if (k_.size() > 16) throw DomainError("at most 16 blocks are supported");
    for (int b = 0; b < n(); ++b) {
        if (k_[static_cast<std::size_t>(b)] < 1) throw DomainError("block sizes must be positive");
        first_.push_back(N_);
        for (int j = 0; j < k_[static_cast<std::size_t>(b)]; ++j) block_of_.push_back(b);
        N_ += k_[static_cast<std::size_t>(b)];
    }
    if (N_ > 30) throw DomainError("total block size above 30 is not supported");
}

Shape Shape::parse(const std::string& csv) {
    std::vector<int> k;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::size_t used = 0;
        int v = 0;
        try {
            v = std::stoi(item, &used);
        } catch (const std::exception&) {
            throw DomainError("bad shape entry '" + item + "'");
        }
        if (used != item.size()) throw DomainError("bad shape entry '" + item + "'");
        k.push_back(v);
    }
    if (k.empty()) throw DomainError("empty shape");
    return Shape(std::move(k));
}

Subset Shape::block_mask(int block) const {
    return full_set(k(block)) << first_of(block);
}

Subset Shape::indices_over(Subset blocks) const {
    Subset out = 0;
    for (int b : elements(blocks)) out |= block_mask(b);
    return out;
}

bool Shape::all_ones() const {
    for (int v : k_)
        if (v != 1) return false;
    return true;
}

Shape Shape::without(Subset removed) const {
    std::vector<int> rest;
    for (int b = 0; b < n(); ++b)
        if (!has(removed, b)) rest.push_back(k(b));
    Shape s;
    s.k_ = rest;
    // Allow the empty shape here; the public constructor would too, but keep it explicit.
    for (int b = 0; b < s.n(); ++b) {
        s.first_.push_back(s.N_);
        for (int j = 0; j < s.k(b); ++j) s.block_of_.push_back(b);
        s.N_ += s.k(b);
    }
    return s;
}

std::string Shape::to_string() const {
    std::string out = "(";
    for (std::size_t b = 0; b < k_.size(); ++b) {
        if (b) out += ",";
        out += std::to_string(k_[b]);
    }
    return out + ")";
}

namespace {
void compositions(int rest, std::vector<int>& cur, std::vector<Shape>& out) {
    if (rest == 0) {
        out.emplace_back(cur);
        return;
    }
    for (int p = 1; p <= rest; ++p) {
        cur.push_back(p);
        compositions(rest - p, cur, out);
        cur.pop_back();
    }
}
}  // namespace

std::vector<Shape> shapes_up_to(int max_total) {
    std::vector<Shape> out;
    for (int N = 1; N <= max_total; ++N) {
        std::vector<int> cur;
        compositions(N, cur, out);
    }
    return out;
}

}  // namespace gf
