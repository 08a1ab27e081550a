#pragma once

// Truncated positively graded chain complexes of Z/p-vector spaces and the
// chain maps between them. A complex carries its rank sequence n_0..n_N and
// the differential matrices d_i : rank(i-1) x rank(i), 1 <= i <= N. Modules
// are identified with Z/p^n in the standard basis.

#include <qchain/field.hpp>

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace qchain {

class ChainComplex {
  public:
    using Elem = Vec;

    ChainComplex(PrimeField f, std::vector<std::size_t> ranks, std::vector<Mat> diffs)
        : field_(f), ranks_(std::move(ranks)), diffs_(std::move(diffs)) {
        if (ranks_.empty()) throw DimensionMismatch("a complex needs at least dimension 0");
        if (diffs_.size() + 1 != ranks_.size())
            throw DimensionMismatch("expected one differential per dimension 1..N");
        for (std::size_t i = 1; i < ranks_.size(); ++i) {
            const Mat& d = diffs_[i - 1];
            check_same_field(d.field, field_);
            if (d.rows != ranks_[i - 1] || d.cols != ranks_[i])
                throw DimensionMismatch("differential " + std::to_string(i) + " has shape " +
                                        std::to_string(d.rows) + "x" + std::to_string(d.cols) +
                                        ", expected " + std::to_string(ranks_[i - 1]) + "x" +
                                        std::to_string(ranks_[i]));
        }
    }

    // The zero complex truncated at N.
    static ChainComplex zero(PrimeField f, int trunc) {
        std::vector<std::size_t> ranks(static_cast<std::size_t>(trunc) + 1, 0);
        std::vector<Mat> diffs(static_cast<std::size_t>(trunc), Mat::zero(f, 0, 0));
        return ChainComplex(f, std::move(ranks), std::move(diffs));
    }

    // The i-cell: Z/p in degrees i and i-1 with identity differential
    // between them. Contractible; classifies degree-i elements.
    static ChainComplex disk(PrimeField f, int i, int trunc) {
        if (i < 0 || i > trunc) throw DimensionMismatch("cell degree out of range");
        std::vector<std::size_t> ranks(static_cast<std::size_t>(trunc) + 1, 0);
        ranks[static_cast<std::size_t>(i)] = 1;
        if (i >= 1) ranks[static_cast<std::size_t>(i) - 1] = 1;
        std::vector<Mat> diffs;
        for (int k = 1; k <= trunc; ++k) {
            Mat d = Mat::zero(f, ranks[static_cast<std::size_t>(k) - 1],
                              ranks[static_cast<std::size_t>(k)]);
            if (k == i && i >= 1) d.at(0, 0) = 1;
            diffs.push_back(std::move(d));
        }
        return ChainComplex(f, std::move(ranks), std::move(diffs));
    }

    // The boundary of the i-cell: Z/p concentrated in degree i-1 with zero
    // differential. For i = 0 this is the zero complex.
    static ChainComplex disk_boundary(PrimeField f, int i, int trunc) {
        if (i < 0 || i > trunc + 1) throw DimensionMismatch("cell degree out of range");
        std::vector<std::size_t> ranks(static_cast<std::size_t>(trunc) + 1, 0);
        if (i >= 1) ranks[static_cast<std::size_t>(i) - 1] = 1;
        std::vector<Mat> diffs;
        for (int k = 1; k <= trunc; ++k)
            diffs.push_back(Mat::zero(f, ranks[static_cast<std::size_t>(k) - 1],
                                      ranks[static_cast<std::size_t>(k)]));
        return ChainComplex(f, std::move(ranks), std::move(diffs));
    }

    PrimeField field() const { return field_; }
    int trunc() const { return static_cast<int>(ranks_.size()) - 1; }
    std::size_t rank(int dim) const { return ranks_.at(static_cast<std::size_t>(dim)); }
    const std::vector<std::size_t>& ranks() const { return ranks_; }

    // d_i for 1 <= i <= trunc.
    const Mat& diff(int i) const {
        if (i < 1 || i > trunc()) throw DimensionMismatch("differential index out of range");
        return diffs_[static_cast<std::size_t>(i) - 1];
    }

    bool operator==(const ChainComplex& o) const {
        return field_ == o.field_ && ranks_ == o.ranks_ && diffs_ == o.diffs_;
    }
    bool operator!=(const ChainComplex& o) const { return !(*this == o); }

    // --- element interface shared with the lazy complexes ---
    Elem zero_elem(int dim) const { return Vec::zero(field_, rank(dim)); }
    Elem add(const Elem& a, const Elem& b) const { return vec_add(a, b); }
    Elem scale(std::uint32_t c, const Elem& a) const { return vec_scale(c, a); }
    bool is_zero(const Elem& a) const { return a.is_zero(); }
    bool eq(const Elem& a, const Elem& b) const { return a == b; }
    // d_dim applied to an element, dim >= 1.
    Elem boundary(int dim, const Elem& e) const { return mat_apply(diff(dim), e); }
    // identity of a complex as an object; value types compare structurally
    bool is_same(const ChainComplex& o) const { return *this == o; }
    bool elem_ok(int dim, const Elem& v) const {
        return dim >= 0 && dim <= trunc() && v.field == field_ && v.size() == rank(dim);
    }
    std::string elem_key(const Elem& e) const {
        std::string k;
        for (auto x : e.entries) {
            k += std::to_string(x);
            k += ',';
        }
        return k;
    }

  private:
    PrimeField field_;
    std::vector<std::size_t> ranks_;
    std::vector<Mat> diffs_;
};

// An element together with the degree it lives in.
struct DimensionedElement {
    int dim;
    Vec vec;
};

struct ComplexIssue {
    enum class Kind { ShapeMismatch, SquareNotZero };
    Kind kind;
    int dim;
};

// d a d = 0 at every composable pair. Shape errors are caught at
// construction, so only the square condition can fail here; the first
// failing index i (meaning d_i after d_{i+1}) is reported.
inline std::optional<ComplexIssue> validate(const ChainComplex& c) {
    for (int i = 1; i + 1 <= c.trunc(); ++i)
        if (!mat_mul(c.diff(i), c.diff(i + 1)).is_zero())
            return ComplexIssue{ComplexIssue::Kind::SquareNotZero, i};
    return std::nullopt;
}

// Basis of the cycle space Z(c)_i. Every degree-0 chain is a cycle.
inline std::vector<Vec> cycles(const ChainComplex& c, int i) {
    if (i < 0 || i > c.trunc()) throw DimensionMismatch("dimension out of range");
    if (i == 0) {
        std::vector<Vec> basis;
        for (std::size_t j = 0; j < c.rank(0); ++j) {
            Vec v = Vec::zero(c.field(), c.rank(0));
            v.entries[j] = 1;
            basis.push_back(std::move(v));
        }
        return basis;
    }
    return kernel_basis(c.diff(i));
}

class ChainMap {
  public:
    ChainMap(ChainComplex source, ChainComplex target, std::vector<Mat> comps)
        : source_(std::move(source)), target_(std::move(target)), comps_(std::move(comps)) {
        check_same_field(source_.field(), target_.field());
        if (source_.trunc() != target_.trunc())
            throw DimensionMismatch("source and target truncation differ");
        if (comps_.size() != static_cast<std::size_t>(source_.trunc()) + 1)
            throw DimensionMismatch("expected one component per dimension 0..N");
        for (int i = 0; i <= source_.trunc(); ++i) {
            const Mat& fi = comps_[static_cast<std::size_t>(i)];
            check_same_field(fi.field, source_.field());
            if (fi.rows != target_.rank(i) || fi.cols != source_.rank(i))
                throw DimensionMismatch("component " + std::to_string(i) + " has shape " +
                                        std::to_string(fi.rows) + "x" + std::to_string(fi.cols));
        }
    }

    static ChainMap identity(const ChainComplex& c) {
        std::vector<Mat> comps;
        for (int i = 0; i <= c.trunc(); ++i) comps.push_back(Mat::identity(c.field(), c.rank(i)));
        return ChainMap(c, c, std::move(comps));
    }

    static ChainMap zero(const ChainComplex& source, const ChainComplex& target) {
        std::vector<Mat> comps;
        for (int i = 0; i <= source.trunc(); ++i)
            comps.push_back(Mat::zero(source.field(), target.rank(i), source.rank(i)));
        return ChainMap(source, target, std::move(comps));
    }

    const ChainComplex& source() const { return source_; }
    const ChainComplex& target() const { return target_; }
    const Mat& component(int i) const { return comps_.at(static_cast<std::size_t>(i)); }
    Vec apply(int i, const Vec& v) const { return mat_apply(component(i), v); }

    bool operator==(const ChainMap& o) const {
        return source_ == o.source_ && target_ == o.target_ && comps_ == o.comps_;
    }

  private:
    ChainComplex source_, target_;
    std::vector<Mat> comps_;
};

struct MapIssue {
    int dim;  // first i with f_{i-1} d_i != d_i f_i
};

inline std::optional<MapIssue> validate(const ChainMap& f) {
    for (int i = 1; i <= f.source().trunc(); ++i)
        if (mat_mul(f.component(i - 1), f.source().diff(i)) !=
            mat_mul(f.target().diff(i), f.component(i)))
            return MapIssue{i};
    return std::nullopt;
}

inline ChainMap compose(const ChainMap& g, const ChainMap& f) {
    if (g.source() != f.target()) throw DimensionMismatch("maps do not compose");
    std::vector<Mat> comps;
    for (int i = 0; i <= f.source().trunc(); ++i)
        comps.push_back(mat_mul(g.component(i), f.component(i)));
    return ChainMap(f.source(), g.target(), std::move(comps));
}

// Seeded random valid complex: ranks drawn in [0, max_rank], differentials
// built inside the previous kernel so d a d = 0 holds by construction.
inline ChainComplex random_complex(PrimeField f, int trunc, std::size_t max_rank,
                                   std::uint64_t seed) {
    std::mt19937 rng(static_cast<std::uint32_t>(seed));
    std::uniform_int_distribution<std::size_t> rank_dist(0, max_rank);
    std::uniform_int_distribution<std::uint32_t> res(0, f.p() - 1);
    std::vector<std::size_t> ranks;
    for (int i = 0; i <= trunc; ++i) ranks.push_back(rank_dist(rng));
    std::vector<Mat> diffs;
    for (int i = 1; i <= trunc; ++i) {
        std::size_t rows = ranks[static_cast<std::size_t>(i) - 1];
        std::size_t cols = ranks[static_cast<std::size_t>(i)];
        if (i == 1) {
            std::vector<std::uint32_t> e(rows * cols);
            for (auto& x : e) x = res(rng);
            diffs.push_back(Mat(f, rows, cols, std::move(e)));
        } else {
            // columns are random combinations of the previous kernel basis
            auto ker = kernel_basis(diffs.back());
            Mat d = Mat::zero(f, rows, cols);
            for (std::size_t j = 0; j < cols; ++j) {
                Vec col = Vec::zero(f, rows);
                for (const auto& kv : ker) col = vec_add(col, vec_scale(res(rng), kv));
                for (std::size_t r = 0; r < rows; ++r) d.at(r, j) = col.entries[r];
            }
            diffs.push_back(std::move(d));
        }
    }
    return ChainComplex(f, std::move(ranks), std::move(diffs));
}

}  // namespace qchain
