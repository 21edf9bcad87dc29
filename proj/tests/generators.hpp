#pragma once

// Shared random-data builders for the property and acceptance suites.

#include <random>
#include <set>

#include "monodrome/difference_module.hpp"

namespace monodrome::testing {

inline RatComplex rand_coeff(std::mt19937_64& gen, bool allow_zero = true) {
    std::uniform_int_distribution<int> num(-3, 3);
    std::uniform_int_distribution<int> den(1, 3);
    RatComplex c(Rational(num(gen), den(gen)), Rational(num(gen), den(gen)));
    if (!allow_zero && c.is_zero()) return RatComplex(Rational(1));
    return c;
}

inline LaurentMatrix rand_step(std::mt19937_64& gen, int r, int maxexp, int nops) {
    std::uniform_int_distribution<int> exp(-maxexp, maxexp);
    std::vector<int> diag(r);
    for (int& d : diag) d = exp(gen);
    LaurentMatrix m = LaurentMatrix::diagonal(diag);
    std::uniform_int_distribution<int> pick(0, r - 1);
    for (int k = 0; k < nops; ++k) {
        int i = pick(gen), j = pick(gen);
        if (i == j) continue;
        LaurentMatrix e = LaurentMatrix::identity(r);
        e.at(i, j) = LaurentPoly(exp(gen), rand_coeff(gen, false));
        m = (k % 2 == 0) ? e * m : m * e;
    }
    return m;
}

inline std::vector<Rational> rand_tau_list(std::mt19937_64& gen, int count) {
    std::uniform_int_distribution<int> num(0, 30);
    std::set<Rational> set;
    while (int(set.size()) < count) set.insert(Rational(num(gen), 31));
    return {set.begin(), set.end()};
}

/// Random module with exact rational weights satisfying every invariant:
/// the final weight-0 step at a fresh puncture closes the telescoping sum.
inline ParabolicDifferenceModule rand_module(std::mt19937_64& gen, int max_rank, int maxexp) {
    std::uniform_int_distribution<int> rdist(1, max_rank);
    std::uniform_int_distribution<int> np(0, 2);
    std::uniform_int_distribution<int> nm(1, 3);
    std::uniform_int_distribution<int> degv(-5, 5);

    ParabolicDifferenceModule v;
    v.rank = rdist(gen);
    v.deg_V = degv(gen);

    long long total = 0;
    int label = 1;
    for (int p = np(gen); p > 0; --p) {
        PuncturePart part;
        part.point = RatComplex(Rational(label++), Rational(0));
        int m = nm(gen);
        for (const auto& tau : rand_tau_list(gen, m)) part.taus.push_back(TauValue::exact(tau));
        for (int i = 0; i < m; ++i) {
            LaurentMatrix step = rand_step(gen, v.rank, maxexp, 2);
            total += lattice_pair_degree(step);
            part.chain.push_back(std::move(step));
        }
        v.punctures.push_back(std::move(part));
    }
    // Closing puncture: a single weight-0 monomial step balancing the sum.
    std::vector<int> diag(v.rank, 0);
    long long rem = -total;
    for (int i = 0; i < v.rank; ++i) {
        long long share = rem / (v.rank - i);
        diag[i] = int(share);
        rem -= share;
    }
    PuncturePart closing;
    closing.point = RatComplex(Rational(label), Rational(0));
    closing.taus.push_back(TauValue::exact(Rational(0)));
    closing.chain.push_back(LaurentMatrix::diagonal(diag));
    v.punctures.push_back(std::move(closing));
    return v;
}

}  // namespace monodrome::testing
