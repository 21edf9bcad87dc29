#pragma once

#include <map>
#include <vector>

#include "monodrome/rational.hpp"

namespace monodrome {

/// Laurent polynomial in the local parameter z with exact Gaussian-rational
/// coefficients. Zero coefficients are never stored.
class LaurentPoly {
  public:
    LaurentPoly() = default;
    LaurentPoly(int exponent, RatComplex coeff) {
        if (!coeff.is_zero()) c_[exponent] = std::move(coeff);
    }

    static LaurentPoly zero() { return {}; }
    static LaurentPoly one() { return {0, RatComplex(Rational(1))}; }
    static LaurentPoly monomial(int e, Rational q = Rational(1)) {
        return {e, RatComplex(std::move(q))};
    }

    bool is_zero() const { return c_.empty(); }
    /// z-adic valuation; only defined for nonzero polynomials.
    int ord() const {
        if (c_.empty()) throw std::domain_error("valuation of the zero polynomial");
        return c_.begin()->first;
    }
    int top() const {
        if (c_.empty()) throw std::domain_error("degree of the zero polynomial");
        return c_.rbegin()->first;
    }
    const std::map<int, RatComplex>& terms() const { return c_; }
    RatComplex coeff(int e) const {
        auto it = c_.find(e);
        return it == c_.end() ? RatComplex() : it->second;
    }
    void set(int e, RatComplex v) {
        if (v.is_zero()) c_.erase(e);
        else c_[e] = std::move(v);
    }

    LaurentPoly operator-() const;
    friend LaurentPoly operator+(const LaurentPoly& a, const LaurentPoly& b);
    friend LaurentPoly operator-(const LaurentPoly& a, const LaurentPoly& b);
    friend LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b);
    friend bool operator==(const LaurentPoly& a, const LaurentPoly& b) { return a.c_ == b.c_; }

    /// Drop every term with exponent >= bound.
    LaurentPoly truncated(int bound) const;

    /// Multiplicative inverse as a Laurent series, truncated so that
    /// `terms_kept` coefficients starting at -ord() are retained.
    LaurentPoly inverse_series(int terms_kept) const;

  private:
    std::map<int, RatComplex> c_;
};

/// Square matrix over Laurent polynomials; the change-of-basis data between
/// consecutive local lattices. The matrix of a chain step maps coordinates
/// with respect to the previous lattice basis to coordinates with respect to
/// the next one, so ord det equals the signed length difference of the pair.
class LaurentMatrix {
  public:
    LaurentMatrix() = default;
    explicit LaurentMatrix(int r) : r_(r), a_(static_cast<size_t>(r) * r) {}

    static LaurentMatrix identity(int r);
    static LaurentMatrix diagonal(const std::vector<int>& exponents);
    static LaurentMatrix scalar(int r, const LaurentPoly& p);

    int size() const { return r_; }
    const LaurentPoly& at(int i, int j) const { return a_[static_cast<size_t>(i) * r_ + j]; }
    LaurentPoly& at(int i, int j) { return a_[static_cast<size_t>(i) * r_ + j]; }

    friend LaurentMatrix operator*(const LaurentMatrix& a, const LaurentMatrix& b);
    friend LaurentMatrix operator+(const LaurentMatrix& a, const LaurentMatrix& b);
    friend bool operator==(const LaurentMatrix& a, const LaurentMatrix& b) {
        return a.r_ == b.r_ && a.a_ == b.a_;
    }

    /// Largest |exponent| appearing in any entry (0 for the zero matrix).
    int max_abs_exponent() const;

    LaurentMatrix submatrix(const std::vector<int>& rows, const std::vector<int>& cols) const;

  private:
    int r_ = 0;
    std::vector<LaurentPoly> a_;
};

/// Chain of change-of-basis matrices M_1, ..., M_m(P) attached to one
/// puncture; step i carries lattice i-1 to lattice i.
using LatticeChain = std::vector<LaurentMatrix>;

LaurentPoly determinant(const LaurentMatrix& m);

/// ord_z det(M). Throws "degenerate lattice step" when det vanishes.
int det_valuation(const LaurentMatrix& m);

/// deg(L_i, L_{i-1}) for the step matrix M carrying L_{i-1}-coordinates to
/// L_i-coordinates: the signed length difference
/// length(L_i / L_{i-1} ∩ L_i) - length(L_{i-1} / L_{i-1} ∩ L_i),
/// computed as ord_z det(M). Agreement with the coset-length count is
/// established by the test-suite oracle, not assumed.
int lattice_pair_degree(const LaurentMatrix& m);

/// Elementary-divisor exponents d_1 <= ... <= d_r of M over the local ring,
/// by pivot-on-minimal-valuation elimination. Series inverses are truncated
/// at size * max|exponent| + 1 terms, enough for exact valuations.
std::vector<int> smith_valuations(const LaurentMatrix& m);

LaurentMatrix block_diagonal(const LaurentMatrix& a, const LaurentMatrix& b);

}  // namespace monodrome
