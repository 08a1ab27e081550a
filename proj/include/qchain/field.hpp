#pragma once

// Exact linear algebra over a prime field Z/p: vectors, matrices, RREF,
// kernels, deterministic solving, canonical sections of surjections, and
// guarded coset enumeration. Everything is a value; all functions are pure.

#include <qchain/errors.hpp>

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace qchain {

class PrimeField {
  public:
    explicit PrimeField(std::uint32_t p) : p_(p) {
        if (p < 2) throw Error("modulus must be at least 2");
        for (std::uint32_t d = 2; d * d <= p; ++d)
            if (p % d == 0) throw Error("modulus " + std::to_string(p) + " is not prime");
    }

    std::uint32_t p() const { return p_; }

    std::uint32_t add(std::uint32_t a, std::uint32_t b) const { return (a + b) % p_; }
    std::uint32_t sub(std::uint32_t a, std::uint32_t b) const { return (a + p_ - b) % p_; }
    std::uint32_t neg(std::uint32_t a) const { return a == 0 ? 0 : p_ - a; }
    std::uint32_t mul(std::uint32_t a, std::uint32_t b) const {
        return static_cast<std::uint32_t>((std::uint64_t{a} * b) % p_);
    }
    std::uint32_t reduce(std::int64_t a) const {
        std::int64_t r = a % static_cast<std::int64_t>(p_);
        return static_cast<std::uint32_t>(r < 0 ? r + p_ : r);
    }

    // Inverse of a nonzero residue, by extended Euclid.
    std::uint32_t inv(std::uint32_t a) const {
        if (a == 0) throw Error("division by zero in Z/" + std::to_string(p_));
        std::int64_t t = 0, newt = 1, r = p_, newr = a;
        while (newr != 0) {
            std::int64_t q = r / newr;
            t = std::exchange(newt, t - q * newt);
            r = std::exchange(newr, r - q * newr);
        }
        return reduce(t);
    }

    bool operator==(const PrimeField& o) const { return p_ == o.p_; }
    bool operator!=(const PrimeField& o) const { return p_ != o.p_; }

  private:
    std::uint32_t p_;
};

// Dense vector of canonical residues. Zero-length vectors are first-class:
// they are the sole element of a rank-0 module.
struct Vec {
    PrimeField field;
    std::vector<std::uint32_t> entries;

    Vec(PrimeField f, std::vector<std::uint32_t> e) : field(f), entries(std::move(e)) {
        for (auto& x : entries)
            if (x >= field.p()) x %= field.p();
    }
    static Vec zero(PrimeField f, std::size_t n) {
        return Vec(f, std::vector<std::uint32_t>(n, 0));
    }

    std::size_t size() const { return entries.size(); }
    bool is_zero() const {
        for (auto x : entries)
            if (x != 0) return false;
        return true;
    }
    bool operator==(const Vec& o) const { return field == o.field && entries == o.entries; }
    bool operator!=(const Vec& o) const { return !(*this == o); }
};

inline void check_same_field(const PrimeField& a, const PrimeField& b) {
    if (a != b) throw FieldMismatch("operands live over Z/" + std::to_string(a.p()) +
                                    " and Z/" + std::to_string(b.p()));
}

inline Vec vec_add(const Vec& a, const Vec& b) {
    check_same_field(a.field, b.field);
    if (a.size() != b.size()) throw DimensionMismatch("vector lengths differ");
    std::vector<std::uint32_t> e(a.size());
    for (std::size_t i = 0; i < e.size(); ++i) e[i] = a.field.add(a.entries[i], b.entries[i]);
    return Vec(a.field, std::move(e));
}

inline Vec vec_sub(const Vec& a, const Vec& b) {
    check_same_field(a.field, b.field);
    if (a.size() != b.size()) throw DimensionMismatch("vector lengths differ");
    std::vector<std::uint32_t> e(a.size());
    for (std::size_t i = 0; i < e.size(); ++i) e[i] = a.field.sub(a.entries[i], b.entries[i]);
    return Vec(a.field, std::move(e));
}

inline Vec vec_scale(std::uint32_t c, const Vec& a) {
    std::vector<std::uint32_t> e(a.size());
    for (std::size_t i = 0; i < e.size(); ++i) e[i] = a.field.mul(c, a.entries[i]);
    return Vec(a.field, std::move(e));
}

// Row-major matrix. Zero-row and zero-column matrices are permitted and
// behave as the unique linear maps to/from the zero module.
struct Mat {
    PrimeField field;
    std::size_t rows = 0, cols = 0;
    std::vector<std::uint32_t> entries;  // rows*cols, row-major

    Mat(PrimeField f, std::size_t r, std::size_t c, std::vector<std::uint32_t> e)
        : field(f), rows(r), cols(c), entries(std::move(e)) {
        if (entries.size() != rows * cols)
            throw DimensionMismatch("matrix entry count does not match shape");
        for (auto& x : entries)
            if (x >= field.p()) x %= field.p();
    }
    static Mat zero(PrimeField f, std::size_t r, std::size_t c) {
        return Mat(f, r, c, std::vector<std::uint32_t>(r * c, 0));
    }
    static Mat identity(PrimeField f, std::size_t n) {
        Mat m = zero(f, n, n);
        for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1;
        return m;
    }
    // Columns given as vectors of length `r`.
    static Mat from_columns(PrimeField f, std::size_t r, const std::vector<Vec>& cs) {
        Mat m = zero(f, r, cs.size());
        for (std::size_t j = 0; j < cs.size(); ++j) {
            if (cs[j].size() != r) throw DimensionMismatch("column length mismatch");
            for (std::size_t i = 0; i < r; ++i) m.at(i, j) = cs[j].entries[i];
        }
        return m;
    }

    std::uint32_t& at(std::size_t r, std::size_t c) { return entries[r * cols + c]; }
    std::uint32_t at(std::size_t r, std::size_t c) const { return entries[r * cols + c]; }

    Vec column(std::size_t j) const {
        std::vector<std::uint32_t> e(rows);
        for (std::size_t i = 0; i < rows; ++i) e[i] = at(i, j);
        return Vec(field, std::move(e));
    }

    bool is_zero() const {
        for (auto x : entries)
            if (x != 0) return false;
        return true;
    }
    bool operator==(const Mat& o) const {
        return field == o.field && rows == o.rows && cols == o.cols && entries == o.entries;
    }
    bool operator!=(const Mat& o) const { return !(*this == o); }
};

inline Vec mat_apply(const Mat& m, const Vec& v) {
    check_same_field(m.field, v.field);
    if (v.size() != m.cols)
        throw DimensionMismatch("matrix has " + std::to_string(m.cols) + " columns, vector length " +
                                std::to_string(v.size()));
    std::vector<std::uint32_t> out(m.rows, 0);
    for (std::size_t i = 0; i < m.rows; ++i) {
        std::uint64_t acc = 0;
        for (std::size_t j = 0; j < m.cols; ++j) acc += std::uint64_t{m.at(i, j)} * v.entries[j];
        out[i] = static_cast<std::uint32_t>(acc % m.field.p());
    }
    return Vec(m.field, std::move(out));
}

inline Mat mat_mul(const Mat& a, const Mat& b) {
    check_same_field(a.field, b.field);
    if (a.cols != b.rows) throw DimensionMismatch("inner matrix dimensions disagree");
    Mat out = Mat::zero(a.field, a.rows, b.cols);
    for (std::size_t i = 0; i < a.rows; ++i)
        for (std::size_t k = 0; k < a.cols; ++k) {
            std::uint32_t aik = a.at(i, k);
            if (aik == 0) continue;
            for (std::size_t j = 0; j < b.cols; ++j)
                out.at(i, j) = a.field.add(out.at(i, j), a.field.mul(aik, b.at(k, j)));
        }
    return out;
}

// Reduced row echelon form. Pivot choice is canonical: scanning columns left
// to right, take the first nonzero entry at or below the current row.
struct Rref {
    Mat mat;
    std::vector<std::size_t> pivot_cols;  // ascending
};

inline Rref rref(Mat m) {
    std::vector<std::size_t> pivots;
    std::size_t row = 0;
    for (std::size_t col = 0; col < m.cols && row < m.rows; ++col) {
        std::size_t sel = row;
        while (sel < m.rows && m.at(sel, col) == 0) ++sel;
        if (sel == m.rows) continue;
        if (sel != row)
            for (std::size_t j = 0; j < m.cols; ++j) std::swap(m.at(row, j), m.at(sel, j));
        std::uint32_t inv = m.field.inv(m.at(row, col));
        for (std::size_t j = 0; j < m.cols; ++j) m.at(row, j) = m.field.mul(inv, m.at(row, j));
        for (std::size_t i = 0; i < m.rows; ++i) {
            if (i == row) continue;
            std::uint32_t c = m.at(i, col);
            if (c == 0) continue;
            for (std::size_t j = 0; j < m.cols; ++j)
                m.at(i, j) = m.field.sub(m.at(i, j), m.field.mul(c, m.at(row, j)));
        }
        pivots.push_back(col);
        ++row;
    }
    return Rref{std::move(m), std::move(pivots)};
}

inline std::size_t rank(const Mat& m) { return rref(m).pivot_cols.size(); }

// Canonical kernel basis from the RREF: one vector per free column, with a 1
// in that column, the negated reduced entries in the pivot columns, and 0
// elsewhere. Vectors are ordered by ascending free column.
inline std::vector<Vec> kernel_basis(const Mat& m) {
    Rref r = rref(m);
    std::vector<bool> is_pivot(m.cols, false);
    for (auto c : r.pivot_cols) is_pivot[c] = true;
    std::vector<Vec> basis;
    for (std::size_t j = 0; j < m.cols; ++j) {
        if (is_pivot[j]) continue;
        Vec v = Vec::zero(m.field, m.cols);
        v.entries[j] = 1;
        for (std::size_t prow = 0; prow < r.pivot_cols.size(); ++prow)
            v.entries[r.pivot_cols[prow]] = m.field.neg(r.mat.at(prow, j));
        basis.push_back(std::move(v));
    }
    return basis;
}

// Deterministic particular solution of m v = b: reduce the augmented matrix,
// set every free variable to 0, read pivots off. Returns nothing when the
// system is inconsistent. For fixed m the map b -> solve(m, b) is linear.
inline std::optional<Vec> solve(const Mat& m, const Vec& b) {
    check_same_field(m.field, b.field);
    if (b.size() != m.rows) throw DimensionMismatch("right-hand side length mismatch");
    Mat aug = Mat::zero(m.field, m.rows, m.cols + 1);
    for (std::size_t i = 0; i < m.rows; ++i) {
        for (std::size_t j = 0; j < m.cols; ++j) aug.at(i, j) = m.at(i, j);
        aug.at(i, m.cols) = b.entries[i];
    }
    Rref r = rref(std::move(aug));
    for (auto c : r.pivot_cols)
        if (c == m.cols) return std::nullopt;  // pivot in the augmented column
    Vec v = Vec::zero(m.field, m.cols);
    for (std::size_t prow = 0; prow < r.pivot_cols.size(); ++prow)
        v.entries[r.pivot_cols[prow]] = r.mat.at(prow, m.cols);
    return v;
}

// Linear right inverse of a surjective matrix, assembled column-by-column
// from `solve` on the standard basis. Throws NotSurjective when rank < rows.
inline Mat section_of_surjection(const Mat& m) {
    if (rank(m) < m.rows)
        throw NotSurjective("matrix of rank " + std::to_string(rank(m)) + " is not onto Z/p^" +
                            std::to_string(m.rows));
    std::vector<Vec> cols;
    cols.reserve(m.rows);
    for (std::size_t i = 0; i < m.rows; ++i) {
        Vec e = Vec::zero(m.field, m.rows);
        e.entries[i] = 1;
        cols.push_back(*solve(m, e));
    }
    return Mat::from_columns(m.field, m.cols, cols);
}

// p^k clamped against a guard; throws instead of overflowing.
inline std::size_t guarded_power(std::uint32_t p, std::size_t k, std::size_t limit, int dim = -1) {
    std::size_t n = 1;
    for (std::size_t i = 0; i < k; ++i) {
        if (n > limit / p) throw SizeGuardExceeded(limit + 1, limit, dim);
        n *= p;
    }
    if (n > limit) throw SizeGuardExceeded(n, limit, dim);
    return n;
}

// All p^|basis| vectors offset + span(basis), deduplicated preserving first
// occurrence, coefficient tuples in lexicographic order (first coefficient
// most significant). Guarded by `limit`.
inline std::vector<Vec> enumerate_affine(const std::vector<Vec>& basis, const Vec& offset,
                                         std::size_t limit) {
    for (const auto& b : basis) {
        check_same_field(b.field, offset.field);
        if (b.size() != offset.size()) throw DimensionMismatch("basis/offset length mismatch");
    }
    std::uint32_t p = offset.field.p();
    guarded_power(p, basis.size(), limit);
    std::vector<Vec> out;
    std::set<std::vector<std::uint32_t>> seen;
    std::vector<std::uint32_t> coeff(basis.size(), 0);
    for (;;) {
        Vec v = offset;
        for (std::size_t i = 0; i < basis.size(); ++i)
            if (coeff[i] != 0) v = vec_add(v, vec_scale(coeff[i], basis[i]));
        if (seen.insert(v.entries).second) out.push_back(std::move(v));
        // odometer, last coefficient fastest
        std::size_t i = basis.size();
        while (i > 0) {
            --i;
            if (++coeff[i] < p) break;
            coeff[i] = 0;
            if (i == 0) return out;
        }
        if (basis.empty()) return out;
    }
}

// All p^n vectors of length n in lexicographic order (first entry most
// significant). Guarded by `limit`.
inline std::vector<Vec> enumerate_vectors(PrimeField f, std::size_t n, std::size_t limit,
                                          int dim = -1) {
    std::size_t total = guarded_power(f.p(), n, limit, dim);
    std::vector<Vec> out;
    out.reserve(total);
    std::vector<std::uint32_t> e(n, 0);
    for (;;) {
        out.push_back(Vec(f, e));
        std::size_t i = n;
        while (i > 0) {
            --i;
            if (++e[i] < f.p()) break;
            e[i] = 0;
            if (i == 0) return out;
        }
        if (n == 0) return out;
    }
}

}  // namespace qchain
