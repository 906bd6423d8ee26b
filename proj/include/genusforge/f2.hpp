#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace gf {

// Bit-packed vector over F2. Bit k lives in word k/64; bits past len() are zero.
class F2Vector {
public:
    F2Vector() = default;
    explicit F2Vector(std::size_t len);
    static F2Vector unit(std::size_t len, std::size_t k);
    static F2Vector from_mask(std::size_t len, std::uint64_t mask);
    // "0110..." with character k giving bit k.
    static F2Vector from_string(const std::string& bits);

    std::size_t size() const { return len_; }
    bool get(std::size_t k) const { return (words_[k >> 6] >> (k & 63)) & 1U; }
    void set(std::size_t k, bool v = true);
    void flip(std::size_t k) { words_[k >> 6] ^= std::uint64_t{1} << (k & 63); }

    F2Vector& operator^=(const F2Vector& o);
    F2Vector operator^(const F2Vector& o) const;
    bool dot(const F2Vector& o) const;
    std::size_t popcount() const;
    bool is_zero() const;
    // Index of the lowest set bit, or size() if none.
    std::size_t first_set() const;
    bool operator==(const F2Vector& o) const = default;

    std::string to_string() const;
    std::uint64_t low_word() const { return words_.empty() ? 0 : words_[0]; }
    const std::vector<std::uint64_t>& words() const { return words_; }
    std::size_t hash() const;

private:
    std::size_t len_ = 0;
    std::vector<std::uint64_t> words_;
};

// Dense row-major matrix over F2.
class F2Matrix {
public:
    F2Matrix() = default;
    F2Matrix(std::size_t rows, std::size_t cols);
    static F2Matrix from_rows(std::size_t cols, std::vector<F2Vector> rows);
    static F2Matrix identity(std::size_t n);

    std::size_t rows() const { return rows_.size(); }
    std::size_t cols() const { return cols_; }
    const F2Vector& row(std::size_t r) const { return rows_[r]; }
    F2Vector& row(std::size_t r) { return rows_[r]; }
    const std::vector<F2Vector>& row_list() const { return rows_; }
    void append_row(F2Vector r);
    bool get(std::size_t r, std::size_t c) const { return rows_[r].get(c); }
    void set(std::size_t r, std::size_t c, bool v = true) { rows_[r].set(c, v); }

    F2Matrix transpose() const;
    F2Vector apply(const F2Vector& x) const;  // M * x
    F2Matrix multiply(const F2Matrix& o) const;

    std::size_t rank() const;
    // Basis of {x : M x = 0}, in the standard reduced form (one free column each).
    std::vector<F2Vector> kernel_basis() const;
    std::optional<F2Vector> solve(const F2Vector& rhs) const;

private:
    std::size_t cols_ = 0;
    std::vector<F2Vector> rows_;
};

// Reduced row echelon form in place; returns pivot columns in row order.
// Pivots are taken as the first set bit in a row-major scan.
std::vector<std::size_t> row_reduce(std::vector<F2Vector>& rows);

std::size_t rank_of(std::vector<F2Vector> vecs);
bool in_span(const std::vector<F2Vector>& vecs, const F2Vector& v);
bool same_span(const std::vector<F2Vector>& a, const std::vector<F2Vector>& b);

// Incremental echelon basis; useful when vectors arrive one at a time.
class SpanBuilder {
public:
    explicit SpanBuilder(std::size_t len) : len_(len) {}
    // Returns true if v was independent of what was already there.
    bool add(const F2Vector& v);
    bool contains(const F2Vector& v) const;
    F2Vector reduce(F2Vector v) const;
    std::size_t dim() const { return basis_.size(); }
    const std::vector<F2Vector>& basis() const { return basis_; }

private:
    std::size_t len_;
    std::vector<F2Vector> basis_;
    std::vector<std::size_t> pivots_;
};

// Same thing for vectors of at most 64 bits.
class MaskSpan {
public:
    bool add(std::uint64_t v);
    std::uint64_t reduce(std::uint64_t v) const;
    bool contains(std::uint64_t v) const { return reduce(v) == 0; }
    std::size_t dim() const { return basis_.size(); }
    const std::vector<std::uint64_t>& basis() const { return basis_; }
    void merge(const MaskSpan& o);

private:
    std::vector<std::uint64_t> basis_;  // each with a distinct leading bit
};

}  // namespace gf
