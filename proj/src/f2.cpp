#include "genusforge/f2.hpp"

#include <algorithm>
#include <bit>

#include "genusforge/errors.hpp"

namespace gf {

namespace {
std::size_t nwords(std::size_t len) { return (len + 63) / 64; }
}  // namespace

F2Vector::F2Vector(std::size_t len) : len_(len), words_(nwords(len), 0) {}

F2Vector F2Vector::unit(std::size_t len, std::size_t k) {
    F2Vector v(len);
    v.set(k);
    return v;
}

F2Vector F2Vector::from_mask(std::size_t len, std::uint64_t mask) {
    F2Vector v(len);
    if (len < 64) mask &= (std::uint64_t{1} << len) - 1;
    if (!v.words_.empty()) v.words_[0] = mask;
    return v;
}

F2Vector F2Vector::from_string(const std::string& bits) {
    F2Vector v(bits.size());
    for (std::size_t k = 0; k < bits.size(); ++k) {
        if (bits[k] == '1')
            v.set(k);
        else if (bits[k] != '0')
            throw DomainError("bit string may only contain 0 and 1");
    }
    return v;
}

void F2Vector::set(std::size_t k, bool v) {
    const std::uint64_t m = std::uint64_t{1} << (k & 63);
    if (v)
        words_[k >> 6] |= m;
    else
        words_[k >> 6] &= ~m;
}

F2Vector& F2Vector::operator^=(const F2Vector& o) {
    if (o.len_ != len_) throw DomainError("F2Vector length mismatch");
    for (std::size_t w = 0; w < words_.size(); ++w) words_[w] ^= o.words_[w];
    return *this;
}

F2Vector F2Vector::operator^(const F2Vector& o) const {
    F2Vector r = *this;
    r ^= o;
    return r;
}

bool F2Vector::dot(const F2Vector& o) const {
    if (o.len_ != len_) throw DomainError("F2Vector length mismatch");
    std::uint64_t acc = 0;
    for (std::size_t w = 0; w < words_.size(); ++w) acc ^= words_[w] & o.words_[w];
    return std::popcount(acc) & 1;
}

std::size_t F2Vector::popcount() const {
    std::size_t c = 0;
    for (auto w : words_) c += static_cast<std::size_t>(std::popcount(w));
    return c;
}

bool F2Vector::is_zero() const {
    return std::all_of(words_.begin(), words_.end(), [](std::uint64_t w) { return w == 0; });
}

std::size_t F2Vector::first_set() const {
    for (std::size_t w = 0; w < words_.size(); ++w)
        if (words_[w]) return w * 64 + static_cast<std::size_t>(std::countr_zero(words_[w]));
    return len_;
}

std::string F2Vector::to_string() const {
    std::string s(len_, '0');
    for (std::size_t k = 0; k < len_; ++k)
        if (get(k)) s[k] = '1';
    return s;
}

std::size_t F2Vector::hash() const {
    std::uint64_t h = 0x9e3779b97f4a7c15ULL ^ len_;
    for (auto w : words_) {
        h ^= w + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    }
    return static_cast<std::size_t>(h);
}

F2Matrix::F2Matrix(std::size_t rows, std::size_t cols) : cols_(cols), rows_(rows, F2Vector(cols)) {}

F2Matrix F2Matrix::from_rows(std::size_t cols, std::vector<F2Vector> rows) {
    F2Matrix m;
    m.cols_ = cols;
    for (auto& r : rows)
        if (r.size() != cols) throw DomainError("row length mismatch");
    m.rows_ = std::move(rows);
    return m;
}

F2Matrix F2Matrix::identity(std::size_t n) {
    F2Matrix m(n, n);
    for (std::size_t k = 0; k < n; ++k) m.set(k, k);
    return m;
}

void F2Matrix::append_row(F2Vector r) {
    if (r.size() != cols_) throw DomainError("row length mismatch");
    rows_.push_back(std::move(r));
}

F2Matrix F2Matrix::transpose() const {
    F2Matrix t(cols_, rows_.size());
    for (std::size_t r = 0; r < rows_.size(); ++r)
        for (std::size_t c = 0; c < cols_; ++c)
            if (rows_[r].get(c)) t.set(c, r);
    return t;
}

F2Vector F2Matrix::apply(const F2Vector& x) const {
    if (x.size() != cols_) throw DomainError("matrix/vector size mismatch");
    F2Vector y(rows_.size());
    for (std::size_t r = 0; r < rows_.size(); ++r)
        if (rows_[r].dot(x)) y.set(r);
    return y;
}

F2Matrix F2Matrix::multiply(const F2Matrix& o) const {
    if (o.rows() != cols_) throw DomainError("matrix size mismatch");
    F2Matrix p(rows_.size(), o.cols());
    for (std::size_t r = 0; r < rows_.size(); ++r)
        for (std::size_t k = 0; k < cols_; ++k)
            if (rows_[r].get(k)) p.rows_[r] ^= o.rows_[k];
    return p;
}

std::vector<std::size_t> row_reduce(std::vector<F2Vector>& rows) {
    std::vector<std::size_t> pivots;
    std::size_t top = 0;
    if (rows.empty()) return pivots;
    const std::size_t cols = rows[0].size();
    for (std::size_t c = 0; c < cols && top < rows.size(); ++c) {
        std::size_t p = top;
        while (p < rows.size() && !rows[p].get(c)) ++p;
        if (p == rows.size()) continue;
        std::swap(rows[top], rows[p]);
        for (std::size_t r = 0; r < rows.size(); ++r)
            if (r != top && rows[r].get(c)) rows[r] ^= rows[top];
        pivots.push_back(c);
        ++top;
    }
    rows.resize(top);
    return pivots;
}

std::size_t F2Matrix::rank() const {
    auto copy = rows_;
    return row_reduce(copy).size();
}

std::vector<F2Vector> F2Matrix::kernel_basis() const {
    auto red = rows_;
    auto piv = row_reduce(red);
    std::vector<bool> is_pivot(cols_, false);
    for (auto p : piv) is_pivot[p] = true;
    std::vector<F2Vector> basis;
    for (std::size_t f = 0; f < cols_; ++f) {
        if (is_pivot[f]) continue;
        F2Vector v(cols_);
        v.set(f);
        for (std::size_t r = 0; r < red.size(); ++r)
            if (red[r].get(f)) v.set(piv[r]);
        basis.push_back(std::move(v));
    }
    return basis;
}

std::optional<F2Vector> F2Matrix::solve(const F2Vector& rhs) const {
    if (rhs.size() != rows_.size()) throw DomainError("rhs size mismatch");
    // Augment with the right-hand side as an extra column.
    std::vector<F2Vector> aug;
    aug.reserve(rows_.size());
    for (std::size_t r = 0; r < rows_.size(); ++r) {
        F2Vector a(cols_ + 1);
        for (std::size_t c = 0; c < cols_; ++c)
            if (rows_[r].get(c)) a.set(c);
        if (rhs.get(r)) a.set(cols_);
        aug.push_back(std::move(a));
    }
    auto piv = row_reduce(aug);
    F2Vector x(cols_);
    for (std::size_t r = 0; r < aug.size(); ++r) {
        if (piv[r] == cols_) return std::nullopt;
        if (aug[r].get(cols_)) x.set(piv[r]);
    }
    return x;
}

std::size_t rank_of(std::vector<F2Vector> vecs) { return row_reduce(vecs).size(); }

bool in_span(const std::vector<F2Vector>& vecs, const F2Vector& v) {
    if (vecs.empty()) return v.is_zero();
    auto a = vecs;
    const auto r = row_reduce(a).size();
    a.push_back(v);
    return row_reduce(a).size() == r;
}

bool same_span(const std::vector<F2Vector>& a, const std::vector<F2Vector>& b) {
    auto ab = a;
    ab.insert(ab.end(), b.begin(), b.end());
    const auto r = rank_of(ab);
    return r == rank_of(a) && r == rank_of(b);
}

F2Vector SpanBuilder::reduce(F2Vector v) const {
    for (std::size_t k = 0; k < basis_.size(); ++k)
        if (v.get(pivots_[k])) v ^= basis_[k];
    return v;
}

bool SpanBuilder::add(const F2Vector& v) {
    if (v.size() != len_) throw DomainError("SpanBuilder length mismatch");
    F2Vector r = reduce(v);
    const std::size_t p = r.first_set();
    if (p == len_) return false;
    // Keep the basis fully reduced so reduce() is a single pass.
    for (auto& b : basis_)
        if (b.get(p)) b ^= r;
    basis_.push_back(std::move(r));
    pivots_.push_back(p);
    return true;
}

bool SpanBuilder::contains(const F2Vector& v) const { return reduce(v).is_zero(); }

std::uint64_t MaskSpan::reduce(std::uint64_t v) const {
    for (auto b : basis_) {
        const std::uint64_t lead = std::uint64_t{1} << (63 - std::countl_zero(b));
        if (v & lead) v ^= b;
    }
    return v;
}

bool MaskSpan::add(std::uint64_t v) {
    v = reduce(v);
    if (!v) return false;
    const std::uint64_t lead = std::uint64_t{1} << (63 - std::countl_zero(v));
    for (auto& b : basis_)
        if (b & lead) b ^= v;
    basis_.push_back(v);
    return true;
}

void MaskSpan::merge(const MaskSpan& o) {
    for (auto b : o.basis_) add(b);
}

}  // namespace gf
