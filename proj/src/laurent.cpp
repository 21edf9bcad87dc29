#include "monodrome/laurent.hpp"

#include <algorithm>
#include <stdexcept>

namespace monodrome {

LaurentPoly LaurentPoly::operator-() const {
    LaurentPoly out;
    for (const auto& [e, v] : c_) out.c_[e] = -v;
    return out;
}

LaurentPoly operator+(const LaurentPoly& a, const LaurentPoly& b) {
    LaurentPoly out = a;
    for (const auto& [e, v] : b.c_) {
        auto it = out.c_.find(e);
        if (it == out.c_.end()) {
            out.c_[e] = v;
        } else {
            it->second += v;
            if (it->second.is_zero()) out.c_.erase(it);
        }
    }
    return out;
}

LaurentPoly operator-(const LaurentPoly& a, const LaurentPoly& b) { return a + (-b); }

LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b) {
    LaurentPoly out;
    for (const auto& [ea, va] : a.c_)
        for (const auto& [eb, vb] : b.c_) {
            int e = ea + eb;
            auto it = out.c_.find(e);
            if (it == out.c_.end()) {
                RatComplex v = va * vb;
                if (!v.is_zero()) out.c_[e] = std::move(v);
            } else {
                it->second += va * vb;
                if (it->second.is_zero()) out.c_.erase(it);
            }
        }
    return out;
}

LaurentPoly LaurentPoly::truncated(int bound) const {
    LaurentPoly out;
    for (const auto& [e, v] : c_) {
        if (e >= bound) break;
        out.c_[e] = v;
    }
    return out;
}

LaurentPoly LaurentPoly::inverse_series(int terms_kept) const {
    if (is_zero()) throw std::domain_error("inverse of the zero polynomial");
    int v = ord();
    RatComplex lead = coeff(v);
    // p = z^v * lead * (1 + q) with ord(q) >= 1; invert the unit by the
    // geometric series truncated past terms_kept coefficients.
    LaurentPoly unit_tail;
    for (const auto& [e, cv] : c_) {
        if (e == v) continue;
        unit_tail.set(e - v, cv / lead);
    }
    LaurentPoly acc = LaurentPoly::one();
    LaurentPoly power = LaurentPoly::one();
    for (int n = 1; n < terms_kept; ++n) {
        power = (power * unit_tail).truncated(terms_kept);
        if (power.is_zero()) break;
        acc = (n % 2 ? acc - power : acc + power);
    }
    LaurentPoly out;
    for (const auto& [e, cv] : acc.terms())
        out.set(e - v, cv / lead);
    return out;
}

LaurentMatrix LaurentMatrix::identity(int r) {
    LaurentMatrix m(r);
    for (int i = 0; i < r; ++i) m.at(i, i) = LaurentPoly::one();
    return m;
}

LaurentMatrix LaurentMatrix::diagonal(const std::vector<int>& exponents) {
    LaurentMatrix m(static_cast<int>(exponents.size()));
    for (int i = 0; i < m.size(); ++i) m.at(i, i) = LaurentPoly::monomial(exponents[i]);
    return m;
}

LaurentMatrix LaurentMatrix::scalar(int r, const LaurentPoly& p) {
    LaurentMatrix m(r);
    for (int i = 0; i < r; ++i) m.at(i, i) = p;
    return m;
}

LaurentMatrix operator*(const LaurentMatrix& a, const LaurentMatrix& b) {
    if (a.r_ != b.r_) throw std::invalid_argument("matrix size mismatch");
    LaurentMatrix out(a.r_);
    for (int i = 0; i < a.r_; ++i)
        for (int j = 0; j < a.r_; ++j) {
            LaurentPoly s;
            for (int k = 0; k < a.r_; ++k) s = s + a.at(i, k) * b.at(k, j);
            out.at(i, j) = std::move(s);
        }
    return out;
}

LaurentMatrix operator+(const LaurentMatrix& a, const LaurentMatrix& b) {
    if (a.r_ != b.r_) throw std::invalid_argument("matrix size mismatch");
    LaurentMatrix out(a.r_);
    for (int i = 0; i < a.r_; ++i)
        for (int j = 0; j < a.r_; ++j) out.at(i, j) = a.at(i, j) + b.at(i, j);
    return out;
}

int LaurentMatrix::max_abs_exponent() const {
    int m = 0;
    for (const auto& p : a_)
        if (!p.is_zero()) m = std::max({m, std::abs(p.ord()), std::abs(p.top())});
    return m;
}

LaurentMatrix LaurentMatrix::submatrix(const std::vector<int>& rows,
                                       const std::vector<int>& cols) const {
    if (rows.size() != cols.size()) throw std::invalid_argument("submatrix must be square");
    LaurentMatrix out(static_cast<int>(rows.size()));
    for (size_t i = 0; i < rows.size(); ++i)
        for (size_t j = 0; j < cols.size(); ++j) out.at(int(i), int(j)) = at(rows[i], cols[j]);
    return out;
}

LaurentPoly determinant(const LaurentMatrix& m) {
    int r = m.size();
    if (r == 0) return LaurentPoly::one();
    if (r == 1) return m.at(0, 0);
    // Cofactor expansion along the first row; ranks here are small.
    LaurentPoly det;
    std::vector<int> rows(r - 1), cols;
    for (int i = 1; i < r; ++i) rows[i - 1] = i;
    for (int j = 0; j < r; ++j) {
        if (m.at(0, j).is_zero()) continue;
        cols.clear();
        for (int k = 0; k < r; ++k)
            if (k != j) cols.push_back(k);
        LaurentPoly minor_det = determinant(m.submatrix(rows, cols));
        LaurentPoly term = m.at(0, j) * minor_det;
        det = (j % 2 == 0) ? det + term : det - term;
    }
    return det;
}

int det_valuation(const LaurentMatrix& m) {
    LaurentPoly d = determinant(m);
    if (d.is_zero()) throw std::domain_error("degenerate lattice step");
    return d.ord();
}

int lattice_pair_degree(const LaurentMatrix& m) { return det_valuation(m); }

namespace {

// One elimination pass with all series arithmetic truncated at the absolute
// exponent cap. Returns pivot valuations in elimination order.
std::vector<int> smith_pass(const LaurentMatrix& m, int cap) {
    int r = m.size();
    LaurentMatrix w = m;
    std::vector<int> divisors;

    auto truncate_all = [&] {
        for (int i = 0; i < r; ++i)
            for (int j = 0; j < r; ++j) w.at(i, j) = w.at(i, j).truncated(cap);
    };
    truncate_all();

    for (int k = 0; k < r; ++k) {
        // Pivot: the entry of minimal valuation in the remaining block.
        int pi = -1, pj = -1, pv = 0;
        for (int i = k; i < r; ++i)
            for (int j = k; j < r; ++j) {
                if (w.at(i, j).is_zero()) continue;
                if (pi < 0 || w.at(i, j).ord() < pv) {
                    pi = i;
                    pj = j;
                    pv = w.at(i, j).ord();
                }
            }
        if (pi < 0) throw std::domain_error("degenerate lattice step");
        if (pi != k)
            for (int j = 0; j < r; ++j) std::swap(w.at(pi, j), w.at(k, j));
        if (pj != k)
            for (int i = 0; i < r; ++i) std::swap(w.at(i, pj), w.at(i, k));

        LaurentPoly inv = w.at(k, k).inverse_series(cap - pv);
        for (int i = k + 1; i < r; ++i) {
            if (w.at(i, k).is_zero()) continue;
            LaurentPoly f = (w.at(i, k) * inv).truncated(cap);
            for (int j = k; j < r; ++j) w.at(i, j) = w.at(i, j) - f * w.at(k, j);
        }
        for (int j = k + 1; j < r; ++j) {
            if (w.at(k, j).is_zero()) continue;
            LaurentPoly f = (w.at(k, j) * inv).truncated(cap);
            for (int i = k; i < r; ++i) w.at(i, j) = w.at(i, j) - w.at(i, k) * f;
        }
        truncate_all();
        divisors.push_back(pv);
    }
    return divisors;
}

}  // namespace

std::vector<int> smith_valuations(const LaurentMatrix& m) {
    int r = m.size();
    if (r == 0) return {};
    int target = det_valuation(m);
    // Truncation per the pivot scheme: size * max|exponent| + 1 terms beyond
    // the deepest valuation. If the divisor spread exhausts the window the
    // sum check fails and the window doubles.
    int base = r * m.max_abs_exponent() + 1;
    for (int window = base; window <= 64 * base + 64; window *= 2) {
        int cap = target + window + 1;
        std::vector<int> d;
        try {
            d = smith_pass(m, cap);
        } catch (const std::domain_error&) {
            continue;  // a pivot fell below the truncation cap; widen
        }
        int sum = 0;
        for (int x : d) sum += x;
        if (sum == target) {
            std::sort(d.begin(), d.end());
            return d;
        }
    }
    throw std::runtime_error("smith elimination did not stabilize");
}

LaurentMatrix block_diagonal(const LaurentMatrix& a, const LaurentMatrix& b) {
    LaurentMatrix out(a.size() + b.size());
    for (int i = 0; i < a.size(); ++i)
        for (int j = 0; j < a.size(); ++j) out.at(i, j) = a.at(i, j);
    for (int i = 0; i < b.size(); ++i)
        for (int j = 0; j < b.size(); ++j) out.at(a.size() + i, a.size() + j) = b.at(i, j);
    return out;
}

}  // namespace monodrome
