#pragma once

// The free replacement of a chain complex: a lazy, interned presentation of
// the complex whose degree-0 generators are the elements [x] of X_0 and
// whose degree-(i+1) generators are pairs [x, z] of an element x of X_{i+1}
// and a cycle z one degree down with counit value d(x). The counit sends a
// generator to its element payload, the differential to its witness cycle.
//
// Generators are created on demand and deduplicated through a canonical key,
// so structural equality of elements is equality of sorted term lists. The
// construction is parametric in the base complex, which lets it be stacked:
// QComplex<QComplex<ChainComplex>> is the replacement of a replacement, the
// home of the comultiplication's values.
//
// Registries and memo tables behave as pure caches. They are not internally
// synchronized: concurrent use requires a single-writer discipline.

#include <qchain/wfs.hpp>

#include <algorithm>
#include <cstdint>
#include <functional>
#include <limits>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace qchain {

inline constexpr std::size_t kSizeMax = std::numeric_limits<std::size_t>::max();

template <typename Base>
class QComplex;

// Formal linear combination of generator ids at a fixed dimension; terms
// sorted by id, coefficients nonzero.
template <typename Base>
struct QElem {
    int dim = 0;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> terms;

    bool is_zero() const { return terms.empty(); }
    bool operator==(const QElem&) const = default;
};

template <typename Base>
struct QGen {
    typename Base::Elem x;  // counit payload
    QElem<Base> z;          // witness cycle, meaningful for dim >= 1
};

template <typename Base>
class QComplex {
  public:
    using Elem = QElem<Base>;

    explicit QComplex(const Base& base) : base_(&base) {
        gens_.resize(static_cast<std::size_t>(base.trunc()) + 1);
        intern_.resize(gens_.size());
    }
    QComplex(const QComplex&) = delete;
    QComplex& operator=(const QComplex&) = delete;

    const Base& base() const { return *base_; }
    PrimeField field() const { return base_->field(); }
    int trunc() const { return base_->trunc(); }

    // --- generators ---

    // Intern the degree-0 generator [x].
    std::uint32_t gen0(const typename Base::Elem& x) const {
        if (!base_->elem_ok(0, x)) throw DimensionMismatch("generator payload has wrong shape");
        std::string key = base_->elem_key(x);
        auto [it, fresh] = intern_[0].try_emplace(std::move(key), 0);
        if (fresh) {
            it->second = static_cast<std::uint32_t>(gens_[0].size());
            gens_[0].push_back(QGen<Base>{x, Elem{-1, {}}});
        }
        return it->second;
    }

    // Intern the degree-(i+1) generator [x, z]; z must be a normalized cycle
    // with counit value d(x).
    std::uint32_t gen(int dim, const typename Base::Elem& x, const Elem& z) const {
        if (dim < 1 || dim > trunc()) throw DimensionMismatch("generator dimension out of range");
        if (!base_->elem_ok(dim, x)) throw DimensionMismatch("generator payload has wrong shape");
        check_elem(dim - 1, z);
        if (!is_cycle(z)) throw NotACycle("generator witness is not a cycle");
        if (!base_->eq(counit(z), base_->boundary(dim, x)))
            throw CounitMismatch("witness counit does not match the payload boundary");
        std::string key = base_->elem_key(x);
        key += '|';
        key += elem_key(z);
        auto d = static_cast<std::size_t>(dim);
        auto [it, fresh] = intern_[d].try_emplace(std::move(key), 0);
        if (fresh) {
            it->second = static_cast<std::uint32_t>(gens_[d].size());
            gens_[d].push_back(QGen<Base>{x, z});
        }
        return it->second;
    }

    std::size_t gen_count(int dim) const { return gens_.at(static_cast<std::size_t>(dim)).size(); }
    const QGen<Base>& generator(int dim, std::uint32_t id) const {
        return gens_.at(static_cast<std::size_t>(dim)).at(id);
    }

    // The element 1 * generator.
    Elem single(int dim, std::uint32_t id) const { return Elem{dim, {{id, 1}}}; }

    // --- element algebra (the complex-like interface) ---

    Elem zero_elem(int dim) const { return Elem{dim, {}}; }

    Elem add(const Elem& a, const Elem& b) const {
        if (a.dim != b.dim) throw DimensionMismatch("cannot add elements of different degree");
        Elem out{a.dim, {}};
        auto ia = a.terms.begin(), ib = b.terms.begin();
        while (ia != a.terms.end() || ib != b.terms.end()) {
            if (ib == b.terms.end() || (ia != a.terms.end() && ia->first < ib->first))
                out.terms.push_back(*ia++);
            else if (ia == a.terms.end() || ib->first < ia->first)
                out.terms.push_back(*ib++);
            else {
                std::uint32_t c = field().add(ia->second, ib->second);
                if (c != 0) out.terms.emplace_back(ia->first, c);
                ++ia, ++ib;
            }
        }
        return out;
    }

    Elem scale(std::uint32_t c, const Elem& a) const {
        c %= field().p();
        if (c == 0) return zero_elem(a.dim);
        if (c == 1) return a;
        Elem out{a.dim, {}};
        for (const auto& [id, coeff] : a.terms) out.terms.emplace_back(id, field().mul(c, coeff));
        return out;
    }

    Elem sub(const Elem& a, const Elem& b) const { return add(a, scale(field().p() - 1, b)); }

    bool is_zero(const Elem& a) const { return a.terms.empty(); }
    bool eq(const Elem& a, const Elem& b) const { return a.dim == b.dim && a.terms == b.terms; }

    // d(e): linear extension of [x, z] -> z. Degree must be >= 1.
    Elem boundary(int dim, const Elem& e) const {
        if (dim < 1) throw DimensionMismatch("differential needs degree >= 1");
        if (e.dim != dim) throw DimensionMismatch("element degree disagrees");
        Elem out = zero_elem(dim - 1);
        for (const auto& [id, coeff] : e.terms)
            out = add(out, scale(coeff, generator(dim, id).z));
        return out;
    }

    bool is_cycle(const Elem& e) const { return e.dim == 0 || is_zero(boundary(e.dim, e)); }

    // counit(e): linear extension of [x] -> x and [x, z] -> x.
    typename Base::Elem counit(const Elem& e) const {
        typename Base::Elem out = base_->zero_elem(e.dim);
        for (const auto& [id, coeff] : e.terms)
            out = base_->add(out, base_->scale(coeff, generator(e.dim, id).x));
        return out;
    }

    bool is_same(const QComplex& o) const { return this == &o; }

    bool elem_ok(int dim, const Elem& e) const {
        if (e.dim != dim || dim < 0 || dim > trunc()) return false;
        std::uint32_t prev = 0;
        bool first = true;
        for (const auto& [id, coeff] : e.terms) {
            if (!first && id <= prev) return false;
            if (coeff == 0 || coeff >= field().p()) return false;
            if (id >= gen_count(dim)) return false;
            prev = id;
            first = false;
        }
        return true;
    }

    std::string elem_key(const Elem& e) const {
        std::string k;
        for (const auto& [id, coeff] : e.terms) {
            k += std::to_string(id);
            k += ':';
            k += std::to_string(coeff);
            k += ';';
        }
        return k;
    }

  private:
    void check_elem(int dim, const Elem& e) const {
        if (!elem_ok(dim, e)) throw DimensionMismatch("malformed element");
    }

    const Base* base_;
    mutable std::vector<std::vector<QGen<Base>>> gens_;
    mutable std::vector<std::unordered_map<std::string, std::uint32_t>> intern_;
};

// The counit with its canonical liftings: fillers are the generators
// themselves, k0(x) = [x] and k(x, z) = [x, z]. The returned structure
// borrows `q`; keep it alive.
template <typename Base>
ChoiceOfLiftings<QComplex<Base>, Base> canonical_liftings(const QComplex<Base>& q) {
    ChoiceOfLiftings<QComplex<Base>, Base> L;
    L.source = &q;
    L.target = &q.base();
    L.map = [&q](int, const QElem<Base>& e) { return q.counit(e); };
    L.k0 = [&q](const typename Base::Elem& x) { return q.single(0, q.gen0(x)); };
    L.k = [&q](int dim, const typename Base::Elem& x, const QElem<Base>& z) {
        return q.single(dim, q.gen(dim, x, z));
    };
    return L;
}

// Functor action on a degreewise-linear chain map between bases:
// [x] -> [F(x)], [x, z] -> [F(x), (QF)(z)]. The image of a generator is a
// single generator; results are memoized per generator id.
template <typename B1, typename B2>
class QMap {
  public:
    using BaseMap = std::function<typename B2::Elem(int, const typename B1::Elem&)>;

    QMap(const QComplex<B1>& src, const QComplex<B2>& dst, BaseMap f)
        : src_(&src), dst_(&dst), f_(std::move(f)) {
        if (src.trunc() != dst.trunc()) throw DimensionMismatch("truncations differ");
        memo_.resize(static_cast<std::size_t>(src.trunc()) + 1);
    }

    std::uint32_t gen_image(int dim, std::uint32_t id) const {
        auto& table = memo_[static_cast<std::size_t>(dim)];
        if (auto it = table.find(id); it != table.end()) return it->second;
        const QGen<B1>& g = src_->generator(dim, id);
        std::uint32_t out = dim == 0 ? dst_->gen0(f_(0, g.x))
                                     : dst_->gen(dim, f_(dim, g.x), apply(g.z));
        table.emplace(id, out);
        return out;
    }

    QElem<B2> apply(const QElem<B1>& e) const {
        QElem<B2> out = dst_->zero_elem(e.dim);
        for (const auto& [id, coeff] : e.terms)
            out = dst_->add(out, dst_->scale(coeff, dst_->single(e.dim, gen_image(e.dim, id))));
        return out;
    }

  private:
    const QComplex<B1>* src_;
    const QComplex<B2>* dst_;
    BaseMap f_;
    mutable std::vector<std::unordered_map<std::uint32_t, std::uint32_t>> memo_;
};

// Convenience: the functor action of a concrete chain map.
template <typename B1, typename B2>
QMap<B1, B2> q_map(const QComplex<B1>& src, const QComplex<B2>& dst, const ChainMap& f) {
    return QMap<B1, B2>(src, dst, [f](int dim, const Vec& v) { return f.apply(dim, v); });
}

// The comultiplication into the one-level-deeper replacement, by the
// recursion [x] -> [[x]] and [x, z] -> [[x, z], delta(z)]. Each generator
// maps to a single generator; memoized.
template <typename Base>
class Comult {
  public:
    Comult(const QComplex<Base>& qx, const QComplex<QComplex<Base>>& qqx)
        : qx_(&qx), qqx_(&qqx) {
        if (!qqx.base().is_same(qx)) throw DimensionMismatch("outer complex must sit over the inner");
        memo_.resize(static_cast<std::size_t>(qx.trunc()) + 1);
    }

    std::uint32_t gen_image(int dim, std::uint32_t id) const {
        auto& table = memo_[static_cast<std::size_t>(dim)];
        if (auto it = table.find(id); it != table.end()) return it->second;
        std::uint32_t out;
        if (dim == 0) {
            out = qqx_->gen0(qx_->single(0, id));
        } else {
            const QGen<Base>& g = qx_->generator(dim, id);
            out = qqx_->gen(dim, qx_->single(dim, id), apply(g.z));
        }
        table.emplace(id, out);
        return out;
    }

    QElem<QComplex<Base>> apply(const QElem<Base>& e) const {
        QElem<QComplex<Base>> out = qqx_->zero_elem(e.dim);
        for (const auto& [id, coeff] : e.terms)
            out = qqx_->add(out, qqx_->scale(coeff, qqx_->single(e.dim, gen_image(e.dim, id))));
        return out;
    }

    std::function<QElem<QComplex<Base>>(int, const QElem<Base>&)> as_map() const {
        return [this](int, const QElem<Base>& e) { return apply(e); };
    }

  private:
    const QComplex<Base>* qx_;
    const QComplex<QComplex<Base>>* qqx_;
    mutable std::vector<std::unordered_map<std::uint32_t, std::uint32_t>> memo_;
};

// The initial-object map out of the replacement: given a choice of liftings
// on f : Y -> X, the chain map h with h([x]) = k0(x) and h([x, z]) =
// k(x, h(z)); it satisfies f(h(e)) = counit(e) and preserves fillers.
// Memoized per generator.
template <typename Base, typename YC>
class InitialMorphism {
  public:
    InitialMorphism(const QComplex<Base>& qx, ChoiceOfLiftings<YC, Base> into)
        : qx_(&qx), aaf_(std::move(into)) {
        if (!aaf_.target->is_same(qx.base()))
            throw DimensionMismatch("liftings must target the replaced complex");
        memo_.resize(static_cast<std::size_t>(qx.trunc()) + 1);
    }

    typename YC::Elem gen_image(int dim, std::uint32_t id) const {
        auto& table = memo_[static_cast<std::size_t>(dim)];
        if (auto it = table.find(id); it != table.end()) return it->second;
        const QGen<Base>& g = qx_->generator(dim, id);
        typename YC::Elem out = dim == 0 ? aaf_.k0(g.x) : aaf_.k(dim, g.x, apply(g.z));
        table.emplace(id, out);
        return out;
    }

    typename YC::Elem apply(const QElem<Base>& e) const {
        const YC& Y = *aaf_.source;
        typename YC::Elem out = Y.zero_elem(e.dim);
        for (const auto& [id, coeff] : e.terms)
            out = Y.add(out, Y.scale(coeff, gen_image(e.dim, id)));
        return out;
    }

  private:
    const QComplex<Base>* qx_;
    ChoiceOfLiftings<YC, Base> aaf_;
    mutable std::vector<std::unordered_map<std::uint32_t, typename YC::Elem>> memo_;
};

// Explicit free presentation of the replacement of a concrete complex:
// generator ids per dimension in canonical enumeration order, plus the
// differential and counit in those coordinates.
class MaterializedQ {
  public:
    MaterializedQ(const QComplex<ChainComplex>& q, int upto, std::size_t limit)
        : q_(&q), upto_(upto) {
        const ChainComplex& X = q.base();
        if (upto < 0 || upto > X.trunc())
            throw DimensionMismatch("materialization depth out of range");
        PrimeField f = X.field();
        gens_.resize(static_cast<std::size_t>(upto) + 1);
        index_.resize(gens_.size());
        // dimension 0: one generator per element of X_0
        for (const auto& x : enumerate_vectors(f, X.rank(0), limit, 0))
            push(0, q.gen0(x));
        std::vector<Mat> diffs, eps;
        eps.push_back(payload_matrix(0));
        for (int d = 1; d <= upto; ++d) {
            // constraints on the witness z at dimension d-1: it is a cycle
            // with counit value the payload boundary
            std::size_t m_prev = gens_[static_cast<std::size_t>(d) - 1].size();
            std::size_t drows = d - 1 >= 1 ? gens_[static_cast<std::size_t>(d) - 2].size() : 0;
            Mat stacked = Mat::zero(f, drows + X.rank(d - 1), m_prev);
            if (drows > 0) {
                const Mat& dm = diffs.back();
                for (std::size_t r = 0; r < drows; ++r)
                    for (std::size_t c = 0; c < m_prev; ++c) stacked.at(r, c) = dm.at(r, c);
            }
            const Mat& em = eps.back();
            for (std::size_t r = 0; r < X.rank(d - 1); ++r)
                for (std::size_t c = 0; c < m_prev; ++c) stacked.at(drows + r, c) = em.at(r, c);
            auto ker = kernel_basis(stacked);
            auto xs = enumerate_vectors(f, X.rank(d), limit, d);
            // exact generator count up front, for the guard report
            // (saturating: the coset size alone can overflow)
            std::vector<std::optional<Vec>> particulars;
            std::size_t coset = 1;
            for (std::size_t i = 0; i < ker.size(); ++i) {
                if (coset > kSizeMax / f.p()) { coset = kSizeMax; break; }
                coset *= f.p();
            }
            std::size_t total = 0;
            for (const auto& x : xs) {
                Vec rhs = Vec::zero(f, drows + X.rank(d - 1));
                Vec dx = X.boundary(d, x);
                for (std::size_t r = 0; r < dx.size(); ++r) rhs.entries[drows + r] = dx.entries[r];
                particulars.push_back(solve(stacked, rhs));
                if (particulars.back()) total = total > kSizeMax - coset ? kSizeMax : total + coset;
            }
            if (total > limit) throw SizeGuardExceeded(total, limit, d);
            for (std::size_t xi = 0; xi < xs.size(); ++xi) {
                if (!particulars[xi]) continue;
                for (const auto& zc : enumerate_affine(ker, *particulars[xi], limit))
                    push(d, q.gen(d, xs[xi], to_elem(d - 1, zc)));
            }
            diffs.push_back(witness_matrix(d));
            eps.push_back(payload_matrix(d));
        }
        std::vector<std::size_t> ranks;
        for (const auto& t : gens_) ranks.push_back(t.size());
        model_.emplace(f, std::move(ranks), std::move(diffs));
        eps_ = std::move(eps);
    }

    const QComplex<ChainComplex>& q() const { return *q_; }
    int upto() const { return upto_; }
    const ChainComplex& model() const { return *model_; }
    const Mat& counit_matrix(int dim) const { return eps_.at(static_cast<std::size_t>(dim)); }
    const std::vector<std::uint32_t>& generators(int dim) const {
        return gens_.at(static_cast<std::size_t>(dim));
    }

    // decode coordinates (in table order) into an element
    QElem<ChainComplex> to_elem(int dim, const Vec& coords) const {
        const auto& table = gens_.at(static_cast<std::size_t>(dim));
        if (coords.size() != table.size()) throw DimensionMismatch("coordinate length mismatch");
        std::vector<std::pair<std::uint32_t, std::uint32_t>> terms;
        for (std::size_t j = 0; j < table.size(); ++j)
            if (coords.entries[j] != 0) terms.emplace_back(table[j], coords.entries[j]);
        std::sort(terms.begin(), terms.end());
        return QElem<ChainComplex>{dim, std::move(terms)};
    }

    // encode an element into coordinates
    Vec coords_of(const QElem<ChainComplex>& e) const {
        const auto& idx = index_.at(static_cast<std::size_t>(e.dim));
        Vec out = Vec::zero(q_->field(), gens_[static_cast<std::size_t>(e.dim)].size());
        for (const auto& [id, coeff] : e.terms) out.entries[idx.at(id)] = coeff;
        return out;
    }

    // coordinate view of the counit, for square enumeration
    CoordView<QElem<ChainComplex>> view() const {
        return CoordView<QElem<ChainComplex>>{
            model(), eps_,
            [this](int dim, const Vec& coords) { return to_elem(dim, coords); }};
    }

  private:
    void push(int dim, std::uint32_t id) {
        auto d = static_cast<std::size_t>(dim);
        index_[d].emplace(id, static_cast<std::uint32_t>(gens_[d].size()));
        gens_[d].push_back(id);
    }

    Mat payload_matrix(int dim) const {
        const ChainComplex& X = q_->base();
        const auto& table = gens_[static_cast<std::size_t>(dim)];
        Mat m = Mat::zero(X.field(), X.rank(dim), table.size());
        for (std::size_t j = 0; j < table.size(); ++j) {
            const Vec& x = q_->generator(dim, table[j]).x;
            for (std::size_t r = 0; r < x.size(); ++r) m.at(r, j) = x.entries[r];
        }
        return m;
    }

    Mat witness_matrix(int dim) const {
        const auto& table = gens_[static_cast<std::size_t>(dim)];
        std::size_t rows = gens_[static_cast<std::size_t>(dim) - 1].size();
        Mat m = Mat::zero(q_->field(), rows, table.size());
        for (std::size_t j = 0; j < table.size(); ++j) {
            Vec col = coords_of(q_->generator(dim, table[j]).z);
            for (std::size_t r = 0; r < rows; ++r) m.at(r, j) = col.entries[r];
        }
        return m;
    }

    const QComplex<ChainComplex>* q_;
    int upto_;
    std::vector<std::vector<std::uint32_t>> gens_;
    std::vector<std::unordered_map<std::uint32_t, std::uint32_t>> index_;
    std::optional<ChainComplex> model_;
    std::vector<Mat> eps_;
};

// The counit eps restricted to a coordinate view, wrapped up for square
// enumeration: here eps's matrices double as the map matrices.
inline MaterializedQ materialize(const QComplex<ChainComplex>& q, int upto, std::size_t limit) {
    return MaterializedQ(q, upto, limit);
}

// Seeded pseudo-random generator of the replacement at a given dimension:
// random payload, witness assembled from a canonical lift of the payload
// boundary plus random counit-zero cycle mixers. Deterministic per seed.
inline std::uint32_t sample_generator(const QComplex<ChainComplex>& q, int dim,
                                      std::mt19937& rng) {
    const ChainComplex& X = q.base();
    PrimeField f = X.field();
    std::uniform_int_distribution<std::uint32_t> res(0, f.p() - 1);
    auto random_vec = [&](std::size_t n) {
        std::vector<std::uint32_t> e(n);
        for (auto& v : e) v = res(rng);
        return Vec(f, std::move(e));
    };
    // canonical cycle at `d` with prescribed counit value y (itself a cycle)
    std::function<QElem<ChainComplex>(int, const Vec&)> lift_cycle = [&](int d, const Vec& y) {
        if (d == 0) return q.single(0, q.gen0(y));
        return q.single(d, q.gen(d, y, q.zero_elem(d - 1)));
    };
    // random cycle with counit value zero at `d`: spans of patterns
    // [a] + [b] - [a + b] - [0], with a, b cycles of the base
    auto random_mixer = [&](int d) {
        Vec a = Vec::zero(f, X.rank(d)), b = Vec::zero(f, X.rank(d));
        for (const auto& c : cycles(X, d)) {
            a = vec_add(a, vec_scale(res(rng), c));
            b = vec_add(b, vec_scale(res(rng), c));
        }
        auto term = [&](const Vec& v) { return lift_cycle(d, v); };
        QElem<ChainComplex> m = q.add(term(a), term(b));
        m = q.sub(m, term(vec_add(a, b)));
        return q.sub(m, term(Vec::zero(f, X.rank(d))));
    };
    if (dim == 0) return q.gen0(random_vec(X.rank(0)));
    Vec x = random_vec(X.rank(dim));
    Vec dx = X.boundary(dim, x);
    QElem<ChainComplex> z = lift_cycle(dim - 1, dx);
    z = q.add(z, random_mixer(dim - 1));
    return q.gen(dim, x, z);
}

}  // namespace qchain
