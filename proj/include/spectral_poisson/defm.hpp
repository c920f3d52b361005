#ifndef SPECTRAL_POISSON_DEFM_HPP
#define SPECTRAL_POISSON_DEFM_HPP

#include "spectral_poisson/exact/matrix.hpp"
#include "spectral_poisson/exact/polymatrix.hpp"
#include "spectral_poisson/hitchin.hpp"
#include "spectral_poisson/p1sheaf.hpp"
#include "spectral_poisson/spectral.hpp"

#include <algorithm>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

/**
 * Two-term complexes of split bundles on the projective line and their
 * Cech hypercohomology.
 *
 * Conventions (one global choice, all in z-form, see p1sheaf.hpp):
 *   - a hypercochain of degree 1 is (a, b) with a an overlap section of A^0
 *     and b = (b0, b1) chart sections of A^1;
 *   - D(c) = (delta c, d c) for c in C^0(A^0), where delta c = c1 - c0;
 *   - (a, b) is a cocycle iff d(a) = delta(b) = b1 - b0.
 */
namespace sp::defm {

using exact::LaurentPoly;
using exact::PolyMatrix;
using exact::Rational;
using exact::RatMatrix;
using exact::RatVector;
using hitchin::BundleP1;
using hitchin::HitchinPair;

/// A^0 --d--> A^1 in degrees 0 and 1; d(l, k) : O(source[k]) -> O(target[l]).
struct TwoTermComplex {
    BundleP1 source;
    BundleP1 target;
    PolyMatrix d;

    void validate() const {
        if (d.rows() != target.rank() || d.cols() != source.rank())
            throw std::invalid_argument("TwoTermComplex: differential has the wrong shape");
        for (std::size_t l = 0; l < target.rank(); ++l)
            for (std::size_t k = 0; k < source.rank(); ++k)
                if (!p1::is_global_section(d(l, k), target[l] - source[k]))
                    throw std::invalid_argument("TwoTermComplex: entry (" + std::to_string(l) + "," + std::to_string(k) +
                                                ") is not a bundle map");
    }

    /// Largest |degree| among summands and nonzero differential entries.
    int max_abs_degree() const {
        int m = 0;
        for (int a : source.splitting) m = std::max(m, std::abs(a));
        for (int a : target.splitting) m = std::max(m, std::abs(a));
        for (std::size_t l = 0; l < target.rank(); ++l)
            for (std::size_t k = 0; k < source.rank(); ++k)
                if (!d(l, k).is_zero()) m = std::max(m, std::abs(target[l] - source[k]));
        return m;
    }

    /// Largest degree shift of a nonzero differential entry.
    int max_shift() const {
        int m = 0;
        for (std::size_t l = 0; l < target.rank(); ++l)
            for (std::size_t k = 0; k < source.rank(); ++k)
                if (!d(l, k).is_zero()) m = std::max(m, target[l] - source[k]);
        return m;
    }
};

inline int euler_characteristic(const BundleP1& b) {
    int chi = 0;
    for (int a : b.splitting) chi += p1::h0_dim(a) - p1::h1_dim(a);
    return chi;
}

/// Applies a matrix of sections to a vector of local sections.
inline std::vector<LaurentPoly> apply_matrix(const PolyMatrix& m, const std::vector<LaurentPoly>& v) {
    if (v.size() != m.cols()) throw std::invalid_argument("apply: dimension mismatch");
    std::vector<LaurentPoly> out(m.rows());
    for (std::size_t l = 0; l < m.rows(); ++l)
        for (std::size_t k = 0; k < m.cols(); ++k)
            if (!m(l, k).is_zero() && !v[k].is_zero()) out[l] += m(l, k) * v[k];
    return out;
}

/// Degree-0 Cech cochain of a split bundle.
struct Cochain0 {
    std::vector<LaurentPoly> chart0;
    std::vector<LaurentPoly> chart1;
};

/// Degree-1 hypercochain (a, b).
struct HyperCochain {
    std::vector<LaurentPoly> a;
    std::vector<LaurentPoly> b0;
    std::vector<LaurentPoly> b1;

    static HyperCochain zero(const TwoTermComplex& c) {
        return {std::vector<LaurentPoly>(c.source.rank()), std::vector<LaurentPoly>(c.target.rank()),
                std::vector<LaurentPoly>(c.target.rank())};
    }

    HyperCochain& operator+=(const HyperCochain& o) {
        for (std::size_t i = 0; i < a.size(); ++i) a[i] += o.a[i];
        for (std::size_t i = 0; i < b0.size(); ++i) b0[i] += o.b0[i];
        for (std::size_t i = 0; i < b1.size(); ++i) b1[i] += o.b1[i];
        return *this;
    }
    HyperCochain& operator*=(const Rational& s) {
        for (auto& p : a) p *= s;
        for (auto& p : b0) p *= s;
        for (auto& p : b1) p *= s;
        return *this;
    }
    friend HyperCochain operator+(HyperCochain x, const HyperCochain& y) { return x += y; }
    friend HyperCochain operator*(const Rational& s, HyperCochain x) { return x *= s; }
    friend bool operator==(const HyperCochain&, const HyperCochain&) = default;
};

/// True iff every component lies in the right chart for its summand.
inline bool well_formed(const TwoTermComplex& c, const HyperCochain& x) {
    if (x.a.size() != c.source.rank() || x.b0.size() != c.target.rank() || x.b1.size() != c.target.rank()) return false;
    for (std::size_t l = 0; l < c.target.rank(); ++l)
        if (!p1::is_chart0_section(x.b0[l]) || !p1::is_chart1_section(x.b1[l], c.target[l])) return false;
    return true;
}

inline bool is_cocycle(const TwoTermComplex& c, const HyperCochain& x) {
    if (!well_formed(c, x)) return false;
    const auto da = apply_matrix(c.d, x.a);
    for (std::size_t l = 0; l < c.target.rank(); ++l)
        if (da[l] != x.b1[l] - x.b0[l]) return false;
    return true;
}

/// D(c) = (delta c, d c).
inline HyperCochain coboundary(const TwoTermComplex& c, const Cochain0& x) {
    HyperCochain out;
    for (std::size_t k = 0; k < c.source.rank(); ++k) out.a.push_back(x.chart1[k] - x.chart0[k]);
    out.b0 = apply_matrix(c.d, x.chart0);
    out.b1 = apply_matrix(c.d, x.chart1);
    return out;
}

/// A chain map between two-term complexes; f0 : A^0 -> B^0, f1 : A^1 -> B^1.
struct ChainMap {
    PolyMatrix f0;
    PolyMatrix f1;

    HyperCochain apply_to(const HyperCochain& x) const { return {apply_matrix(f0, x.a), apply_matrix(f1, x.b0), apply_matrix(f1, x.b1)}; }

    bool commutes(const TwoTermComplex& from, const TwoTermComplex& to) const { return to.d * f0 == f1 * from.d; }
};

/// A basis element of H^1 with the degree window its cochains live in.
struct HyperClass {
    HyperCochain cochain;
    int window = 0;
};

/**
 * Degree-1 hypercohomology of a two-term complex, with explicit cochain
 * representatives built from the long exact sequence
 *
 *   0 -> H0 -> H^0(A^0) -> H^0(A^1) -> H1 -> H^1(A^0) -> H^1(A^1) -> H2 -> 0.
 *
 * Basis order: first the cokernel of H^0(A^0) -> H^0(A^1) (classes (0, s)
 * for global sections s), then the kernel of H^1(A^0) -> H^1(A^1) (classes
 * (a, b) with a a Laurent monomial combination); inside each segment by
 * summand index and then monomial exponent.
 */
class HyperCohomology {
public:
    explicit HyperCohomology(TwoTermComplex complex, int window_extra = 0)
        : c_(std::move(complex)), window_extra_(window_extra) {
        c_.validate();
        build_h0();
        build_h1();
        build_basis();
    }

    const TwoTermComplex& complex() const noexcept { return c_; }
    std::size_t h0() const noexcept { return h0_dim_; }
    std::size_t h1() const noexcept { return basis_.size(); }
    std::size_t h2() const noexcept { return h2_dim_; }
    std::size_t coker_part() const noexcept { return coker_cols_.size(); }
    const std::vector<HyperClass>& basis() const noexcept { return basis_; }

    /// Default Cech window: max |degree| + max differential shift + 2 + extra.
    int window() const { return c_.max_abs_degree() + c_.max_shift() + 2 + window_extra_; }

    /**
     * Coordinates of the class of a cocycle in basis(). Exact and window-free:
     * peel off the H^1(A^0) part, split the remaining overlap component as a
     * Cech coboundary, and read off the leftover global section of A^1.
     */
    RatVector coordinates(const HyperCochain& x) const {
        if (!is_cocycle(c_, x)) throw std::invalid_argument("coordinates: not a hypercocycle");
        const std::size_t q = coker_cols_.size();
        RatVector coords(basis_.size());

        // Kernel part: the H^1(A^0) class of a.
        RatVector kappa;
        for (std::size_t k = 0; k < c_.source.rank(); ++k) {
            const auto v = p1::h1_class(x.a[k], c_.source[k]);
            kappa.insert(kappa.end(), v.begin(), v.end());
        }
        HyperCochain rest = x;
        for (std::size_t i = 0; i < kernel_free_.size(); ++i) {
            coords[q + i] = kappa[kernel_free_[i]];
            if (coords[q + i] != 0) rest += Rational(-coords[q + i]) * basis_[q + i].cochain;
        }
        for (std::size_t k = 0; k < c_.source.rank(); ++k)
            for (const auto& e : p1::h1_class(rest.a[k], c_.source[k]))
                if (e != 0) throw std::logic_error("coordinates: H^1 class outside the kernel (cocycle data inconsistent)");

        // rest.a is a Cech coboundary; remove D(c).
        Cochain0 c;
        for (std::size_t k = 0; k < c_.source.rank(); ++k) {
            auto s = p1::split_coboundary(rest.a[k], c_.source[k]);
            c.chart0.push_back(std::move(s.chart0));
            c.chart1.push_back(std::move(s.chart1));
        }
        const auto dc0 = apply_matrix(c_.d, c.chart0);
        const auto dc1 = apply_matrix(c_.d, c.chart1);
        RatVector sigma;
        for (std::size_t l = 0; l < c_.target.rank(); ++l) {
            const LaurentPoly g0 = rest.b0[l] - dc0[l];
            const LaurentPoly g1 = rest.b1[l] - dc1[l];
            if (g0 != g1) throw std::logic_error("coordinates: residual is not a global section");
            const auto v = p1::h0_coords(g0, c_.target[l]);
            sigma.insert(sigma.end(), v.begin(), v.end());
        }
        // Reduce modulo the image of H^0(A^0); the remainder lives on the cokernel columns.
        for (std::size_t i = 0; i < image_.pivots.size(); ++i) {
            const Rational f = sigma[image_.pivots[i]];
            if (f == 0) continue;
            for (std::size_t j = 0; j < sigma.size(); ++j)
                if (image_.reduced(i, j) != 0) sigma[j] -= f * image_.reduced(i, j);
        }
        for (std::size_t i = 0; i < q; ++i) coords[i] = sigma[coker_cols_[i]];
        return coords;
    }

    /// Matrix of a chain map on H^1, columns indexed by this basis, rows by target's.
    RatMatrix induced(const ChainMap& f, const HyperCohomology& target) const {
        if (!f.commutes(c_, target.complex())) throw std::invalid_argument("induced: not a chain map");
        RatMatrix m(target.h1(), h1());
        for (std::size_t j = 0; j < h1(); ++j) {
            const auto col = target.coordinates(f.apply_to(basis_[j].cochain));
            for (std::size_t i = 0; i < col.size(); ++i) m(i, j) = col[i];
        }
        return m;
    }

private:
    void build_h0() {
        // H^0(A^0) -> H^0(A^1), monomial bases ordered by (summand, exponent).
        std::vector<std::size_t> tgt_off{0};
        for (int e : c_.target.splitting) tgt_off.push_back(tgt_off.back() + static_cast<std::size_t>(p1::h0_dim(e)));
        h0_target_dim_ = tgt_off.back();
        std::vector<RatVector> images;
        for (std::size_t k = 0; k < c_.source.rank(); ++k)
            for (const auto& mono : p1::h0_basis(c_.source[k])) {
                RatVector img(h0_target_dim_);
                for (std::size_t l = 0; l < c_.target.rank(); ++l) {
                    const LaurentPoly s = c_.d(l, k) * mono;
                    for (int m = 0; m <= c_.target[l]; ++m) img[tgt_off[l] + static_cast<std::size_t>(m)] = s.coeff(m);
                }
                images.push_back(std::move(img));
            }
        image_ = exact::rref(RatMatrix::from_rows(images, h0_target_dim_));
        h0_dim_ = images.size() - image_.pivots.size();
        std::vector<bool> is_pivot(h0_target_dim_, false);
        for (auto p : image_.pivots) is_pivot[p] = true;
        for (std::size_t i = 0; i < h0_target_dim_; ++i)
            if (!is_pivot[i]) coker_cols_.push_back(i);
        for (std::size_t l = 0; l < c_.target.rank(); ++l)
            for (int m = 0; m <= c_.target[l]; ++m) h0_target_index_.emplace_back(l, m);
    }

    void build_h1() {
        // H^1(A^0) -> H^1(A^1) on the monomial bases z^k, d+1 <= k <= -1.
        for (std::size_t k = 0; k < c_.source.rank(); ++k)
            for (int e = c_.source[k] + 1; e <= -1; ++e) h1_source_index_.emplace_back(k, e);
        std::size_t tgt_dim = 0;
        for (int e : c_.target.splitting) tgt_dim += static_cast<std::size_t>(p1::h1_dim(e));
        RatMatrix m(tgt_dim, h1_source_index_.size());
        for (std::size_t col = 0; col < h1_source_index_.size(); ++col) {
            const auto [k, e] = h1_source_index_[col];
            std::size_t row = 0;
            for (std::size_t l = 0; l < c_.target.rank(); ++l) {
                const auto cls = p1::h1_class(c_.d(l, k).shifted(e), c_.target[l]);
                for (const auto& v : cls) m(row++, col) = v;
            }
        }
        kernel_ = exact::kernel_basis(m);
        const auto echelon = exact::rref(m);
        h2_dim_ = tgt_dim - echelon.pivots.size();
        // kernel_basis emits one vector per free column, with a unit there and zeros at the other free columns
        std::vector<bool> is_pivot(h1_source_index_.size(), false);
        for (auto p : echelon.pivots) is_pivot[p] = true;
        for (std::size_t f = 0; f < is_pivot.size(); ++f)
            if (!is_pivot[f]) kernel_free_.push_back(f);
    }

    void build_basis() {
        const int w = window();
        for (std::size_t col : coker_cols_) {
            auto [l, m] = h0_target_index_[col];
            HyperCochain x = HyperCochain::zero(c_);
            x.b0[l] = LaurentPoly::monomial(m);
            x.b1[l] = LaurentPoly::monomial(m);
            basis_.push_back({std::move(x), w});
        }
        for (const auto& v : kernel_) {
            HyperCochain x = HyperCochain::zero(c_);
            for (std::size_t i = 0; i < v.size(); ++i)
                if (v[i] != 0) x.a[h1_source_index_[i].first].add_term(h1_source_index_[i].second, v[i]);
            // d(a) has zero H^1 class in every target summand; split it as delta(b).
            const auto da = apply_matrix(c_.d, x.a);
            for (std::size_t l = 0; l < c_.target.rank(); ++l) {
                const auto s = p1::split_coboundary(da[l], c_.target[l]);
                x.b0[l] = s.chart0;
                x.b1[l] = s.chart1;
            }
            basis_.push_back({std::move(x), w});
        }
    }

    TwoTermComplex c_;
    int window_extra_ = 0;
    std::size_t h0_dim_ = 0, h2_dim_ = 0, h0_target_dim_ = 0;
    exact::Echelon image_;
    std::vector<std::size_t> coker_cols_;
    std::vector<std::pair<std::size_t, int>> h0_target_index_;
    std::vector<std::pair<std::size_t, int>> h1_source_index_;
    std::vector<RatVector> kernel_;
    std::vector<std::size_t> kernel_free_;
    std::vector<HyperClass> basis_;
};

/**
 * The total Cech complex truncated to a finite window M.
 *
 * For a summand O(e) the window keeps overlap exponents in [-M, e + M],
 * chart-0 exponents in [0, e + M] and chart-1 exponents in [-M, e]. Both
 * Cech differentials and multiplication by global sections preserve these
 * ranges, so this is a subcomplex; once M >= |e| + 1 for all summands it
 * computes the same hypercohomology. Used as an independent check of the
 * long-exact-sequence computation.
 */
class WindowedComplex {
public:
    WindowedComplex(const TwoTermComplex& c, int window) : c_(c), m_(window) {
        std::size_t pos = 0;
        for (int e : c_.source.splitting) {
            src_overlap_.push_back(pos);
            pos += static_cast<std::size_t>(e + 2 * m_ + 1);
        }
        for (int e : c_.target.splitting) {
            tgt_chart0_.push_back(pos);
            pos += static_cast<std::size_t>(std::max(e + m_ + 1, 0));
            tgt_chart1_.push_back(pos);
            pos += static_cast<std::size_t>(std::max(e + m_ + 1, 0));
        }
        dim1_ = pos;
        std::size_t pos0 = 0;
        for (int e : c_.source.splitting) {
            pos0 += 2 * static_cast<std::size_t>(std::max(e + m_ + 1, 0));
        }
        dim0_ = pos0;
        std::size_t pos2 = 0;
        for (int e : c_.target.splitting) {
            tgt_overlap_.push_back(pos2);
            pos2 += static_cast<std::size_t>(e + 2 * m_ + 1);
        }
        dim2_ = pos2;
        build();
    }

    int window() const noexcept { return m_; }
    std::size_t h0() const { return dim0_ - image0_.rank(); }
    std::size_t h1() const { return dim1_ - rank1_ - image0_.rank(); }
    std::size_t h2() const { return dim2_ - rank1_; }

    bool in_window(const HyperCochain& x) const {
        for (std::size_t k = 0; k < c_.source.rank(); ++k)
            if (!x.a[k].support_within(-m_, c_.source[k] + m_)) return false;
        for (std::size_t l = 0; l < c_.target.rank(); ++l)
            if (!x.b0[l].support_within(0, c_.target[l] + m_) || !x.b1[l].support_within(-m_, c_.target[l]))
                return false;
        return true;
    }

    exact::SparseEchelon::Row encode(const HyperCochain& x) const {
        if (!in_window(x)) throw std::out_of_range("WindowedComplex::encode: cochain outside window");
        exact::SparseEchelon::Row row;
        auto put = [&](std::size_t base, int lo, const LaurentPoly& p) {
            for (const auto& [e, q] : p.terms()) row.emplace(base + static_cast<std::size_t>(e - lo), q);
        };
        for (std::size_t k = 0; k < c_.source.rank(); ++k) put(src_overlap_[k], -m_, x.a[k]);
        for (std::size_t l = 0; l < c_.target.rank(); ++l) {
            put(tgt_chart0_[l], 0, x.b0[l]);
            put(tgt_chart1_[l], -m_, x.b1[l]);
        }
        return row;
    }

    bool is_coboundary(const HyperCochain& x) const { return image0_.contains(encode(x)); }

    /// True iff the classes are linearly independent modulo coboundaries.
    bool independent_mod_coboundaries(const std::vector<HyperClass>& classes) const {
        exact::SparseEchelon e = image0_;
        for (const auto& c : classes)
            if (!e.insert(encode(c.cochain))) return false;
        return true;
    }

private:
    void build() {
        // Image of D^0 on every monomial 0-cochain.
        for (std::size_t k = 0; k < c_.source.rank(); ++k) {
            const int e = c_.source[k];
            for (int chart = 0; chart < 2; ++chart) {
                const int lo = chart == 0 ? 0 : -m_;
                const int hi = chart == 0 ? e + m_ : e;
                for (int x = lo; x <= hi; ++x) {
                    Cochain0 c{std::vector<LaurentPoly>(c_.source.rank()), std::vector<LaurentPoly>(c_.source.rank())};
                    (chart == 0 ? c.chart0 : c.chart1)[k] = LaurentPoly::monomial(x);
                    image0_.insert(encode(coboundary(c_, c)));
                }
            }
        }
        // Rank of D^1(a, b) = d(a) - (b1 - b0) on every monomial 1-cochain.
        exact::SparseEchelon image1;
        auto encode2 = [&](const std::vector<LaurentPoly>& v) {
            exact::SparseEchelon::Row row;
            for (std::size_t l = 0; l < v.size(); ++l)
                for (const auto& [e, q] : v[l].terms()) {
                    if (e < -m_ || e > c_.target[l] + m_) throw std::logic_error("WindowedComplex: D^1 left the window");
                    row.emplace(tgt_overlap_[l] + static_cast<std::size_t>(e + m_), q);
                }
            return row;
        };
        for (std::size_t k = 0; k < c_.source.rank(); ++k)
            for (int x = -m_; x <= c_.source[k] + m_; ++x) {
                std::vector<LaurentPoly> a(c_.source.rank());
                a[k] = LaurentPoly::monomial(x);
                image1.insert(encode2(apply_matrix(c_.d, a)));
            }
        for (std::size_t l = 0; l < c_.target.rank(); ++l) {
            for (int x = 0; x <= c_.target[l] + m_; ++x) {
                std::vector<LaurentPoly> v(c_.target.rank());
                v[l] = LaurentPoly::monomial(x);  // D(0, (b0, 0)) = +b0
                image1.insert(encode2(v));
            }
            for (int x = -m_; x <= c_.target[l]; ++x) {
                std::vector<LaurentPoly> v(c_.target.rank());
                v[l] = LaurentPoly::monomial(x, Rational(-1));  // D(0, (0, b1)) = -b1
                image1.insert(encode2(v));
            }
        }
        rank1_ = image1.rank();
    }

    TwoTermComplex c_;
    int m_;
    std::size_t dim0_ = 0, dim1_ = 0, dim2_ = 0;
    std::vector<std::size_t> src_overlap_, tgt_chart0_, tgt_chart1_, tgt_overlap_;
    exact::SparseEchelon image0_;
    std::size_t rank1_ = 0;
};

struct HyperDims {
    std::size_t h0 = 0, h1 = 0, h2 = 0;
    friend bool operator==(const HyperDims&, const HyperDims&) = default;
};

inline HyperDims windowed_dims(const TwoTermComplex& c, int window) {
    WindowedComplex w(c, window);
    return {w.h0(), w.h1(), w.h2()};
}

inline HyperCohomology hyper_h1_basis(const TwoTermComplex& c, int window_extra = 0) {
    return HyperCohomology(c, window_extra);
}
inline std::size_t hyper_h0_dim(const TwoTermComplex& c) { return HyperCohomology(c).h0(); }
inline std::size_t hyper_h2_dim(const TwoTermComplex& c) { return HyperCohomology(c).h2(); }

// ---------------------------------------------------------------------------
// Complexes attached to a Hitchin pair. End E is flattened with index
// (i, j) -> i r + j, entry (i, j) being the component O(a_j) -> O(a_i).

inline std::size_t flat(std::size_t i, std::size_t j, std::size_t r) { return i * r + j; }

/// PolyMatrix of X -> X theta - theta X on flattened End E.
inline PolyMatrix bracket_with(const PolyMatrix& theta) {
    const std::size_t r = theta.rows();
    PolyMatrix d(r * r, r * r);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < r; ++j)
            for (std::size_t k = 0; k < r; ++k) {
                d(flat(i, j, r), flat(i, k, r)) += theta(k, j);  // X(i,k) theta(k,j)
                d(flat(i, j, r), flat(k, j, r)) -= theta(i, k);  // theta(i,k) X(k,j)
            }
    return d;
}

/// End E (x) O(t) with the given splitting.
inline BundleP1 end_bundle(const BundleP1& e, int t) {
    BundleP1 out;
    for (std::size_t i = 0; i < e.rank(); ++i)
        for (std::size_t j = 0; j < e.rank(); ++j) out.splitting.push_back(e[i] - e[j] + t);
    return out;
}

/// Deformation complex End E --[., theta]--> End E (x) N.
inline TwoTermComplex end_complex(const HitchinPair& p) {
    return {end_bundle(p.bundle, 0), end_bundle(p.bundle, p.n), bracket_with(p.theta)};
}

/// Its shifted twisted dual End E (x) N^v (x) K --[., theta]--> End E (x) K, with K = O(-2).
inline TwoTermComplex cotangent_complex(const HitchinPair& p) {
    return {end_bundle(p.bundle, -p.n - 2), end_bundle(p.bundle, -2), bracket_with(p.theta)};
}

/**
 * Perfect pairing between the terms of a complex C and of its dual C':
 * summand k of C'^0 pairs with summand degree0_partner[k] of C^1, and
 * summand l of C'^1 with summand degree1_partner[l] of C^0; each pair of
 * degrees sums to -2.
 */
struct DualityData {
    std::vector<std::size_t> degree0_partner;
    std::vector<std::size_t> degree1_partner;

    void validate(const TwoTermComplex& dual, const TwoTermComplex& c) const {
        if (degree0_partner.size() != dual.source.rank() || degree1_partner.size() != dual.target.rank())
            throw std::invalid_argument("DualityData: wrong sizes");
        for (std::size_t k = 0; k < degree0_partner.size(); ++k)
            if (dual.source[k] + c.target[degree0_partner[k]] != -2)
                throw std::invalid_argument("DualityData: degree-0 partner degrees do not sum to -2");
        for (std::size_t l = 0; l < degree1_partner.size(); ++l)
            if (dual.target[l] + c.source[degree1_partner[l]] != -2)
                throw std::invalid_argument("DualityData: degree-1 partner degrees do not sum to -2");
    }
};

/// Trace pairing on flattened End E: (i, j) pairs with (j, i).
inline DualityData trace_duality(std::size_t r) {
    DualityData d;
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < r; ++j) {
            d.degree0_partner.push_back(flat(j, i, r));
            d.degree1_partner.push_back(flat(j, i, r));
        }
    return d;
}

/// Sign of the second term of the residue pairing, fixed by well-definedness on classes.
inline constexpr int kSerreSign = -1;

/**
 * Serre duality pairing H^1(C') x H^1(C) -> Q at cochain level:
 *
 *   <xi, v> = Res sum_k a_xi[k] b1_v[partner0(k)] - Res sum_l b0_xi[l] a_v[partner1(l)].
 *
 * With the chart choices above (b1 of v, b0 of xi) the value depends only on
 * the classes; any other sign fails the coboundary test.
 */
inline Rational serre_pairing(const DualityData& duality, const HyperCochain& xi, const HyperCochain& v) {
    LaurentPoly first, second;
    for (std::size_t k = 0; k < xi.a.size(); ++k) first += xi.a[k] * v.b1[duality.degree0_partner[k]];
    for (std::size_t l = 0; l < xi.b0.size(); ++l) second += xi.b0[l] * v.a[duality.degree1_partner[l]];
    return p1::residue(first) + Rational(kSerreSign) * p1::residue(second);
}

/// Gram matrix (rows: basis of the dual complex, columns: basis of the complex).
inline RatMatrix serre_pairing_matrix(const DualityData& duality, const HyperCohomology& dual, const HyperCohomology& c) {
    duality.validate(dual.complex(), c.complex());
    RatMatrix g(dual.h1(), c.h1());
    for (std::size_t i = 0; i < dual.h1(); ++i)
        for (std::size_t j = 0; j < c.h1(); ++j) g(i, j) = serre_pairing(duality, dual.basis()[i].cochain, c.basis()[j].cochain);
    return g;
}

/// Random coboundary D(c) with c drawn inside the window, coefficients in [-bound, bound].
inline HyperCochain random_coboundary(const TwoTermComplex& c, int window, hitchin::Rng& rng, int bound = 3) {
    Cochain0 x;
    for (int e : c.source.splitting) {
        LaurentPoly c0, c1;
        for (int k = 0; k <= e + window; ++k) c0.set(k, Rational(static_cast<long>(rng.uniform(-bound, bound))));
        for (int k = -window; k <= e; ++k) c1.set(k, Rational(static_cast<long>(rng.uniform(-bound, bound))));
        x.chart0.push_back(std::move(c0));
        x.chart1.push_back(std::move(c1));
    }
    return coboundary(c, x);
}

// ---------------------------------------------------------------------------
// Complexes computing Ext^1(L, W) on the base.

/// A coefficient sheaf W on S given by its pushforward (P, psi), twisted by p^*O(t).
struct CoefficientSheaf {
    BundleP1 pushforward;
    PolyMatrix psi;
    int twist = 0;

    static CoefficientSheaf of(const spectral::SpectralSheafRep& s, int twist = 0) {
        return {s.pushforward, s.psi, twist};
    }
};

/**
 * E^v (x) P(t) --f_W--> E^v (x) P(t) (x) N with f_W = theta^v (x) 1 - 1 (x) psi.
 *
 * Index layout is (j, k) -> j rP + k for e_j^v (x) f_k, so an element u is an
 * r x rP array and f_W(u) = theta^T u - u psi^T.
 */
inline TwoTermComplex phi_W(const HitchinPair& p, const CoefficientSheaf& w) {
    const std::size_t r = p.rank();
    const std::size_t rp = w.pushforward.rank();
    BundleP1 src, tgt;
    for (std::size_t j = 0; j < r; ++j)
        for (std::size_t k = 0; k < rp; ++k) {
            src.splitting.push_back(-p.bundle[j] + w.pushforward[k] + w.twist);
            tgt.splitting.push_back(-p.bundle[j] + w.pushforward[k] + w.twist + p.n);
        }
    PolyMatrix d(r * rp, r * rp);
    for (std::size_t j = 0; j < r; ++j)
        for (std::size_t k = 0; k < rp; ++k) {
            for (std::size_t i = 0; i < r; ++i) d(i * rp + k, j * rp + k) += p.theta(j, i);
            for (std::size_t m = 0; m < rp; ++m) d(j * rp + m, j * rp + k) -= w.psi(m, k);
        }
    TwoTermComplex c{std::move(src), std::move(tgt), std::move(d)};
    c.validate();
    return c;
}

/// A morphism W -> W' of coefficient sheaves: mu : P(t) -> P'(t') with mu psi = psi' mu.
struct CoefficientMorphism {
    CoefficientSheaf from;
    CoefficientSheaf to;
    PolyMatrix mu;
};

/// The chain map 1 (x) mu between the phi_W complexes; rejects maps not commuting with psi.
inline ChainMap functoriality_chain_map(const HitchinPair& p, const CoefficientMorphism& m) {
    const std::size_t r = p.rank();
    const std::size_t rs = m.from.pushforward.rank(), rt = m.to.pushforward.rank();
    if (m.mu.rows() != rt || m.mu.cols() != rs) throw std::invalid_argument("functoriality: mu has the wrong shape");
    for (std::size_t a = 0; a < rt; ++a)
        for (std::size_t b = 0; b < rs; ++b)
            if (!p1::is_global_section(m.mu(a, b), m.to.pushforward[a] + m.to.twist - m.from.pushforward[b] - m.from.twist))
                throw std::invalid_argument("functoriality: mu is not a bundle map");
    if (m.mu * m.from.psi != m.to.psi * m.mu) throw std::invalid_argument("functoriality: mu does not commute with psi");
    PolyMatrix f(r * rt, r * rs);
    for (std::size_t j = 0; j < r; ++j)
        for (std::size_t a = 0; a < rt; ++a)
            for (std::size_t b = 0; b < rs; ++b) f(j * rt + a, j * rs + b) = m.mu(a, b);
    return {f, f};
}

/// Matrix of the map Ext^1(L, W) -> Ext^1(L, W') in the hyper_h1 bases.
inline RatMatrix functoriality_map(const HitchinPair& p, const CoefficientMorphism& m, const HyperCohomology& from,
                                   const HyperCohomology& to) {
    return from.induced(functoriality_chain_map(p, m), to);
}

/// Permutation identifying E^v (x) E (layout (j, k)) with End E (layout (k, j)).
inline PolyMatrix factor_switch(std::size_t r) {
    PolyMatrix s(r * r, r * r);
    for (std::size_t j = 0; j < r; ++j)
        for (std::size_t k = 0; k < r; ++k) s(flat(k, j, r), j * r + k) = LaurentPoly(Rational(1));
    return s;
}

}  // namespace sp::defm

#endif
