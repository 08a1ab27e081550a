#pragma once

// Lifting machinery for the generating cofibrations: boundary inclusions of
// cells, one per dimension. A lifting square against dimension i presents a
// bottom element x in degree i of the target and (for i >= 1) a top cycle z
// in degree i-1 of the source; a choice of liftings equips a map with a
// filler for every such square. The pair (map, liftings) is an algebraic
// acyclic fibration.
//
// The structures are generic over the source and target complex types so the
// same code serves concrete chain maps and the lazy counit of the cofibrant
// replacement; enumeration-based checks work through a coordinate view of
// the source.

#include <qchain/complex.hpp>

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <vector>

namespace qchain {

// The boundary inclusion in dimension i, as a concrete chain map. The cell
// has Z/p in degrees i and i-1 (identity differential), the boundary just
// Z/p in degree i-1.
struct GeneratingCofibration {
    int dim;

    ChainMap inclusion(PrimeField f, int trunc) const {
        ChainComplex boundary = ChainComplex::disk_boundary(f, dim, trunc);
        ChainComplex cell = ChainComplex::disk(f, dim, trunc);
        std::vector<Mat> comps;
        for (int k = 0; k <= trunc; ++k) {
            Mat m = Mat::zero(f, cell.rank(k), boundary.rank(k));
            if (k == dim - 1) m.at(0, 0) = 1;
            comps.push_back(std::move(m));
        }
        return ChainMap(boundary, cell, std::move(comps));
    }
};

// A lifting square for a map f : Y -> X against the dimension-`dim`
// generating cofibration. `z` is absent exactly when dim == 0.
template <typename YEl, typename XEl>
struct LiftingSquare {
    int dim;
    XEl x;
    std::optional<YEl> z;
};

// A map f : Y -> X together with a filler for every lifting square: the
// section k0 of f_0 and, per dimension i >= 1, the section k of (f_i, d_i)
// on compatible pairs. Functions must be total on compatible inputs.
template <typename YC, typename XC>
struct ChoiceOfLiftings {
    using YEl = typename YC::Elem;
    using XEl = typename XC::Elem;

    const YC* source = nullptr;
    const XC* target = nullptr;
    std::function<XEl(int, const YEl&)> map;              // f, degreewise
    std::function<YEl(const XEl&)> k0;                    // section of f_0
    std::function<YEl(int, const XEl&, const YEl&)> k;    // i >= 1: (x, z) -> y
};

// Square invariants: z present iff dim >= 1, z a cycle, d(x) = f(z).
template <typename YC, typename XC>
void check_square(const ChoiceOfLiftings<YC, XC>& L,
                  const LiftingSquare<typename YC::Elem, typename XC::Elem>& sq) {
    if (sq.dim < 0 || sq.dim > L.target->trunc())
        throw IncompatibleSquare("square dimension out of range");
    if (sq.dim == 0) {
        if (sq.z) throw IncompatibleSquare("dimension-0 squares have no top cycle");
        return;
    }
    if (!sq.z) throw IncompatibleSquare("missing top cycle");
    if (sq.dim - 1 >= 1 && !L.source->is_zero(L.source->boundary(sq.dim - 1, *sq.z)))
        throw IncompatibleSquare("top element is not a cycle");
    if (!L.target->eq(L.target->boundary(sq.dim, sq.x), L.map(sq.dim - 1, *sq.z)))
        throw IncompatibleSquare("square does not commute: d(x) != f(z)");
}

// Filler for a valid square; both triangle identities hold by the section
// laws of the choice of liftings.
template <typename YC, typename XC>
typename YC::Elem solve_lifting(const ChoiceOfLiftings<YC, XC>& L,
                                const LiftingSquare<typename YC::Elem, typename XC::Elem>& sq) {
    check_square(L, sq);
    return sq.dim == 0 ? L.k0(sq.x) : L.k(sq.dim, sq.x, *sq.z);
}

// The identity map with its canonical liftings: every square's filler is its
// own bottom element.
template <typename C>
ChoiceOfLiftings<C, C> identity_liftings(const C& c) {
    ChoiceOfLiftings<C, C> L;
    L.source = &c;
    L.target = &c;
    L.map = [](int, const typename C::Elem& e) { return e; };
    L.k0 = [](const typename C::Elem& x) { return x; };
    L.k = [](int, const typename C::Elem& x, const typename C::Elem&) { return x; };
    return L;
}

// Composite liftings for g after f: lift the bottom through g's choice using
// the pushed-forward top, then lift the result through f's choice.
template <typename CC, typename DC, typename EC>
ChoiceOfLiftings<CC, EC> compose_liftings(const ChoiceOfLiftings<CC, DC>& phi,
                                          const ChoiceOfLiftings<DC, EC>& psi) {
    if (!phi.target->is_same(*psi.source))
        throw DimensionMismatch("liftings do not compose: middle objects differ");
    ChoiceOfLiftings<CC, EC> out;
    out.source = phi.source;
    out.target = psi.target;
    out.map = [phi, psi](int dim, const typename CC::Elem& e) {
        return psi.map(dim, phi.map(dim, e));
    };
    out.k0 = [phi, psi](const typename EC::Elem& x) { return phi.k0(psi.k0(x)); };
    out.k = [phi, psi](int dim, const typename EC::Elem& x, const typename CC::Elem& z) {
        return phi.k(dim, psi.k(dim, x, phi.map(dim - 1, z)), z);
    };
    return out;
}

// Matrix picture of the source of an algebraic acyclic fibration into a
// concrete complex: the source's ranks and differentials in coordinates, the
// map's matrices, and a decoder from coordinates to source elements. For a
// concrete chain map this is just the map itself; for the lazy counit it
// comes from materialization.
template <typename YEl>
struct CoordView {
    ChainComplex model;                            // coordinatized source
    std::vector<Mat> map_mats;                     // f_i as matrices into the target
    std::function<YEl(int, const Vec&)> to_elem;   // coordinates -> source element

    static CoordView of_map(const ChainMap& f) {
        std::vector<Mat> mats;
        for (int i = 0; i <= f.source().trunc(); ++i) mats.push_back(f.component(i));
        return CoordView{f.source(), std::move(mats), [](int, const Vec& v) { return v; }};
    }
};

namespace detail {

// Constraint matrix for tops compatible with bottom x at dimension i:
// rows force d(z) = 0 (when i-1 >= 1) and f(z) = d(x).
inline Mat top_constraints(const ChainComplex& model, const Mat& fmat, int i) {
    std::size_t zcols = model.rank(i - 1);
    std::size_t drows = (i - 1 >= 1) ? model.rank(i - 2) : 0;
    Mat stacked = Mat::zero(model.field(), drows + fmat.rows, zcols);
    if (drows > 0) {
        const Mat& d = model.diff(i - 1);
        for (std::size_t r = 0; r < drows; ++r)
            for (std::size_t c = 0; c < zcols; ++c) stacked.at(r, c) = d.at(r, c);
    }
    for (std::size_t r = 0; r < fmat.rows; ++r)
        for (std::size_t c = 0; c < zcols; ++c) stacked.at(drows + r, c) = fmat.at(r, c);
    return stacked;
}

inline Vec stack_rhs(const ChainComplex& model, int i, const Vec& dx) {
    std::size_t drows = (i - 1 >= 1) ? model.rank(i - 2) : 0;
    Vec rhs = Vec::zero(model.field(), drows + dx.size());
    for (std::size_t r = 0; r < dx.size(); ++r) rhs.entries[drows + r] = dx.entries[r];
    return rhs;
}

}  // namespace detail

// All lifting squares for the viewed map at dimension i, bottoms in
// lexicographic order and tops in affine enumeration order per bottom.
// Throws SizeGuardExceeded when any enumeration (or the total) passes
// `limit`.
template <typename YEl>
std::vector<LiftingSquare<YEl, Vec>> enumerate_squares(const CoordView<YEl>& view,
                                                       const ChainComplex& target, int i,
                                                       std::size_t limit) {
    std::vector<LiftingSquare<YEl, Vec>> out;
    if (i == 0) {
        for (auto& x : enumerate_vectors(target.field(), target.rank(0), limit, 0))
            out.push_back({0, std::move(x), std::nullopt});
        return out;
    }
    if (static_cast<std::size_t>(i) - 1 >= view.map_mats.size())
        throw DimensionMismatch("coordinate view too shallow for this dimension");
    Mat stacked = detail::top_constraints(view.model, view.map_mats[static_cast<std::size_t>(i) - 1], i);
    auto ker = kernel_basis(stacked);
    guarded_power(target.field().p(), ker.size(), limit, i);
    for (auto& x : enumerate_vectors(target.field(), target.rank(i), limit, i)) {
        Vec rhs = detail::stack_rhs(view.model, i, target.boundary(i, x));
        auto z0 = solve(stacked, rhs);
        if (!z0) continue;
        for (auto& z : enumerate_affine(ker, *z0, limit)) {
            if (out.size() >= limit) throw SizeGuardExceeded(out.size() + 1, limit, i);
            out.push_back({i, x, view.to_elem(i - 1, z)});
        }
    }
    return out;
}

// Deterministic pseudo-random square at dimension i, or nothing if the drawn
// bottom admits no compatible top.
template <typename YEl>
std::optional<LiftingSquare<YEl, Vec>> sample_square(const CoordView<YEl>& view,
                                                     const ChainComplex& target, int i,
                                                     std::mt19937& rng) {
    PrimeField f = target.field();
    std::uniform_int_distribution<std::uint32_t> res(0, f.p() - 1);
    std::vector<std::uint32_t> xe(target.rank(i));
    for (auto& v : xe) v = res(rng);
    Vec x(f, std::move(xe));
    if (i == 0) return LiftingSquare<YEl, Vec>{0, std::move(x), std::nullopt};
    if (static_cast<std::size_t>(i) - 1 >= view.map_mats.size())
        throw DimensionMismatch("coordinate view too shallow for this dimension");
    Mat stacked = detail::top_constraints(view.model, view.map_mats[static_cast<std::size_t>(i) - 1], i);
    auto z0 = solve(stacked, detail::stack_rhs(view.model, i, target.boundary(i, x)));
    if (!z0) return std::nullopt;
    Vec z = *z0;
    for (const auto& kv : kernel_basis(stacked)) z = vec_add(z, vec_scale(res(rng), kv));
    return LiftingSquare<YEl, Vec>{i, std::move(x), view.to_elem(i - 1, z)};
}

struct LawViolation {
    enum class Law { Section0, SectionMap, SectionDiff, NotOver, LiftingNotPreserved };
    Law law;
    int dim;
};

struct CheckReport {
    bool ok = true;
    bool sampled = false;            // some dimension fell back to sampling
    std::uint64_t seed = 0;          // seed used for sampled dimensions
    std::size_t checked = 0;         // squares actually verified
    std::optional<LawViolation> violation;

    explicit operator bool() const { return ok; }
};

inline constexpr std::size_t kSampleCount = 64;

// Section laws over every enumerable square up to max_dim; dimensions whose
// enumeration trips the guard are checked on a seeded sample instead and the
// report is flagged accordingly.
template <typename YC>
CheckReport validate_aaf(const ChoiceOfLiftings<YC, ChainComplex>& L,
                         const CoordView<typename YC::Elem>& view, int max_dim,
                         std::size_t limit, std::uint64_t seed = 20240801) {
    using YEl = typename YC::Elem;
    CheckReport rep;
    rep.seed = seed;
    std::mt19937 rng(static_cast<std::uint32_t>(seed));
    const ChainComplex& X = *L.target;
    auto check_one = [&](const LiftingSquare<YEl, Vec>& sq) -> bool {
        YEl y = sq.dim == 0 ? L.k0(sq.x) : L.k(sq.dim, sq.x, *sq.z);
        ++rep.checked;
        if (!X.eq(L.map(sq.dim, y), sq.x)) {
            rep.ok = false;
            rep.violation = LawViolation{sq.dim == 0 ? LawViolation::Law::Section0
                                                     : LawViolation::Law::SectionMap,
                                         sq.dim};
            return false;
        }
        if (sq.dim >= 1 && !L.source->eq(L.source->boundary(sq.dim, y), *sq.z)) {
            rep.ok = false;
            rep.violation = LawViolation{LawViolation::Law::SectionDiff, sq.dim};
            return false;
        }
        return true;
    };
    for (int i = 0; i <= max_dim && rep.ok; ++i) {
        try {
            for (const auto& sq : enumerate_squares(view, X, i, limit))
                if (!check_one(sq)) break;
        } catch (const SizeGuardExceeded&) {
            rep.sampled = true;
            for (std::size_t n = 0; n < kSampleCount && rep.ok; ++n)
                if (auto sq = sample_square(view, X, i, rng))
                    if (!check_one(*sq)) break;
        }
    }
    return rep;
}

// Morphism condition between two algebraic acyclic fibrations over the same
// base: u carries src's fillers to dst's fillers, u(phi(x, z)) =
// psi(x, u(z)), and u commutes with the projections to the base. Squares are
// enumerated on src's side through `view`.
template <typename YC, typename ZC>
CheckReport verify_aaf_morphism(
    const std::function<typename ZC::Elem(int, const typename YC::Elem&)>& u,
    const ChoiceOfLiftings<YC, ChainComplex>& src, const ChoiceOfLiftings<ZC, ChainComplex>& dst,
    const CoordView<typename YC::Elem>& view, int max_dim, std::size_t limit,
    std::uint64_t seed = 20240801) {
    using YEl = typename YC::Elem;
    CheckReport rep;
    rep.seed = seed;
    std::mt19937 rng(static_cast<std::uint32_t>(seed));
    const ChainComplex& X = *src.target;
    auto check_one = [&](const LiftingSquare<YEl, Vec>& sq) -> bool {
        ++rep.checked;
        YEl y = sq.dim == 0 ? src.k0(sq.x) : src.k(sq.dim, sq.x, *sq.z);
        // over the base: dst.f(u(y)) must equal src.f(y)
        if (!X.eq(dst.map(sq.dim, u(sq.dim, y)), src.map(sq.dim, y))) {
            rep.ok = false;
            rep.violation = LawViolation{LawViolation::Law::NotOver, sq.dim};
            return false;
        }
        typename ZC::Elem expected =
            sq.dim == 0 ? dst.k0(sq.x) : dst.k(sq.dim, sq.x, u(sq.dim - 1, *sq.z));
        if (!dst.source->eq(u(sq.dim, y), expected)) {
            rep.ok = false;
            rep.violation = LawViolation{LawViolation::Law::LiftingNotPreserved, sq.dim};
            return false;
        }
        return true;
    };
    for (int i = 0; i <= max_dim && rep.ok; ++i) {
        try {
            for (const auto& sq : enumerate_squares(view, X, i, limit))
                if (!check_one(sq)) break;
        } catch (const SizeGuardExceeded&) {
            rep.sampled = true;
            for (std::size_t n = 0; n < kSampleCount && rep.ok; ++n)
                if (auto sq = sample_square(view, X, i, rng))
                    if (!check_one(*sq)) break;
        }
    }
    return rep;
}

// Deterministic liftings for a concrete acyclic fibration, built from the
// canonical solver: k0 through a section matrix of f_0, higher k through
// pivot back-substitution on the stacked system (f_i, d_i). Linear in the
// square data. Throws NotSurjective if f_0 misses anything; higher
// dimensions throw IncompatibleSquare when a compatible pair has no filler
// (i.e. the map is not an acyclic fibration).
inline ChoiceOfLiftings<ChainComplex, ChainComplex> solver_liftings(const ChainMap& f) {
    auto section0 = section_of_surjection(f.component(0));
    const ChainComplex& Y = f.source();
    ChoiceOfLiftings<ChainComplex, ChainComplex> L;
    L.source = &f.source();
    L.target = &f.target();
    // the closures copy the map; source/target pointers follow the caller's
    // ChainMap lifetime
    L.map = [f](int dim, const Vec& v) { return f.apply(dim, v); };
    L.k0 = [section0](const Vec& x) { return mat_apply(section0, x); };
    L.k = [f, Y](int dim, const Vec& x, const Vec& z) {
        const Mat& fi = f.component(dim);
        const Mat& di = Y.diff(dim);
        Mat stacked = Mat::zero(Y.field(), fi.rows + di.rows, Y.rank(dim));
        for (std::size_t r = 0; r < fi.rows; ++r)
            for (std::size_t c = 0; c < fi.cols; ++c) stacked.at(r, c) = fi.at(r, c);
        for (std::size_t r = 0; r < di.rows; ++r)
            for (std::size_t c = 0; c < di.cols; ++c) stacked.at(fi.rows + r, c) = di.at(r, c);
        Vec rhs = Vec::zero(Y.field(), fi.rows + di.rows);
        for (std::size_t r = 0; r < x.size(); ++r) rhs.entries[r] = x.entries[r];
        for (std::size_t r = 0; r < z.size(); ++r) rhs.entries[fi.rows + r] = z.entries[r];
        auto y = solve(stacked, rhs);
        if (!y) throw IncompatibleSquare("no filler: map is not an acyclic fibration here");
        return *y;
    };
    return L;
}

}  // namespace qchain
