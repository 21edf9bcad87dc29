#include "monodrome/difference_module.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>

namespace monodrome {

void validate(const ParabolicDifferenceModule& v) {
    if (v.rank < 1) throw std::invalid_argument("module rank must be positive");
    long long telescope = 0;
    for (const auto& p : v.punctures) {
        if (p.taus.empty()) throw std::invalid_argument("empty weight table at a puncture");
        if (p.taus.size() != p.chain.size())
            throw std::invalid_argument("chain length differs from weight count at a puncture");
        Rational prev(-1);
        for (const auto& t : p.taus) {
            if (t.value < 0 || t.value >= 1)
                throw std::invalid_argument("weight outside [0, 1) at a puncture");
            if (t.value <= prev)
                throw std::invalid_argument("weights not strictly increasing at a puncture");
            prev = t.value;
        }
        for (const auto& m : p.chain) {
            if (m.size() != v.rank)
                throw std::invalid_argument("chain step size differs from module rank");
            telescope += lattice_pair_degree(m);  // throws on a degenerate step
        }
    }
    if (telescope != 0)
        throw std::invalid_argument(
            "telescoping identity violated: chain degree jumps sum to " +
            std::to_string(telescope) + ", expected 0");
}

namespace {

DegreeValue degree_with_weight(const ParabolicDifferenceModule& v, bool one_minus_tau) {
    validate(v);
    DegreeValue out{Rational(v.deg_V), true};
    for (const auto& p : v.punctures)
        for (size_t i = 0; i < p.chain.size(); ++i) {
            Rational jump(lattice_pair_degree(p.chain[i]));
            const TauValue& t = p.taus[i];
            Rational weight = one_minus_tau ? Rational(1 - t.value) : Rational(-t.value);
            out.value += weight * jump;
            out.exact = out.exact && !t.from_float;
        }
    return out;
}

}  // namespace

DegreeValue parabolic_degree(const ParabolicDifferenceModule& v) {
    return degree_with_weight(v, true);
}

DegreeValue parabolic_degree_tau_form(const ParabolicDifferenceModule& v) {
    return degree_with_weight(v, false);
}

DegreeValue slope(const ParabolicDifferenceModule& v) {
    DegreeValue d = parabolic_degree(v);
    d.value /= v.rank;
    return d;
}

ParabolicDifferenceModule induce_submodule(const ParabolicDifferenceModule& v,
                                           const SubmoduleDescriptor& s) {
    ParabolicDifferenceModule out;
    out.rank = s.rank;
    out.deg_V = s.deg_V;
    out.twist = v.twist;
    out.frak_a = v.frak_a;

    if (s.chains) {
        out.punctures = *s.chains;
        validate(out);
        return out;
    }

    if (s.frame_columns.empty())
        throw std::invalid_argument("submodule descriptor carries neither columns nor chains");
    std::set<int> sel(s.frame_columns.begin(), s.frame_columns.end());
    if (int(sel.size()) != s.rank || *sel.begin() < 0 || *sel.rbegin() >= v.rank)
        throw std::invalid_argument("frame columns do not define a rank-" +
                                    std::to_string(s.rank) + " selection");
    std::vector<int> cols(sel.begin(), sel.end());

    for (const auto& p : v.punctures) {
        PuncturePart q;
        q.point = p.point;
        q.taus = p.taus;
        for (const auto& m : p.chain) {
            // Difference stability of the span of the selected columns: no
            // chain step may carry it into the complement.
            for (int i = 0; i < v.rank; ++i)
                for (int j = 0; j < v.rank; ++j)
                    if (!sel.count(i) && sel.count(j) && !m.at(i, j).is_zero())
                        throw std::invalid_argument(
                            "selected columns are not difference-stable: a chain step carries "
                            "the summand out of itself");
            q.chain.push_back(m.submatrix(cols, cols));
        }
        out.punctures.push_back(std::move(q));
    }
    validate(out);  // a stable selection must still close its own chains
    return out;
}

std::string to_string(StabilityVerdict v) {
    switch (v) {
        case StabilityVerdict::Stable: return "stable";
        case StabilityVerdict::Semistable: return "semistable";
        case StabilityVerdict::Polystable: return "polystable";
        case StabilityVerdict::Unstable: return "unstable";
        case StabilityVerdict::Inconclusive: return "inconclusive";
    }
    return "?";
}

StabilityReport check_stability(const ParabolicDifferenceModule& v,
                                const std::vector<SubmoduleDescriptor>& candidates,
                                bool family_exhaustive) {
    validate(v);
    if (v.rank == 1)
        return {StabilityVerdict::Stable, std::nullopt, "rank one: no proper nonzero submodules"};
    if (candidates.empty())
        throw std::invalid_argument("stability of rank >= 2 needs a nonempty candidate family");

    Rational mu = slope(v).value;
    std::optional<int> worst;          // maximal-slope violator
    Rational worst_mu;
    std::vector<int> equalizers;
    for (size_t i = 0; i < candidates.size(); ++i) {
        const auto& c = candidates[i];
        if (c.rank <= 0 || c.rank >= v.rank)
            throw std::invalid_argument("malformed candidate: rank must be strictly between 0 and rank V");
        ParabolicDifferenceModule sub = induce_submodule(v, c);
        Rational mu_sub = slope(sub).value;
        if (mu_sub > mu && (!worst || mu_sub > worst_mu)) {
            worst = int(i);
            worst_mu = mu_sub;
        } else if (mu_sub == mu) {
            equalizers.push_back(int(i));
        }
    }

    if (worst)
        return {StabilityVerdict::Unstable, worst,
                "candidate slope exceeds the module slope"};
    if (!family_exhaustive)
        return {StabilityVerdict::Inconclusive, std::nullopt,
                "no violation found, but the candidate family is not exhaustive"};
    if (equalizers.empty())
        return {StabilityVerdict::Stable, std::nullopt,
                "every candidate slope is strictly below the module slope"};

    // Semistable. Polystable when the equal-slope candidates assemble a
    // column partition of V into summands.
    std::set<int> covered;
    int covered_rank = 0;
    bool partition = true;
    for (int idx : equalizers) {
        const auto& c = candidates[idx];
        if (c.frame_columns.empty()) continue;
        for (int col : c.frame_columns) {
            if (!covered.insert(col).second) partition = false;
        }
        covered_rank += c.rank;
    }
    if (partition && covered_rank == v.rank && int(covered.size()) == v.rank)
        return {StabilityVerdict::Polystable, equalizers.front(),
                "equal-slope summands decompose the module"};
    return {StabilityVerdict::Semistable, equalizers.front(),
            "an equal-slope submodule exists"};
}

namespace {

bool same_point(const RatComplex& a, const RatComplex& b) {
    if (a == b) return true;
    std::complex<double> d = a.to_std() - b.to_std();
    return std::abs(d) < 1e-9;
}

}  // namespace

ParabolicDifferenceModule direct_sum(const ParabolicDifferenceModule& a,
                                     const ParabolicDifferenceModule& b) {
    if (std::abs(a.twist.parameter - b.twist.parameter) > 1e-12 ||
        std::abs(a.frak_a - b.frak_a) > 1e-12)
        throw std::invalid_argument("direct sum needs matching twist and translation data");

    ParabolicDifferenceModule out;
    out.rank = a.rank + b.rank;
    out.deg_V = a.deg_V + b.deg_V;
    out.twist = a.twist;
    out.frak_a = a.frak_a;

    // Collect the union of puncture points.
    std::vector<RatComplex> points;
    auto add_point = [&](const RatComplex& p) {
        for (const auto& q : points)
            if (same_point(p, q)) return;
        points.push_back(p);
    };
    for (const auto& p : a.punctures) add_point(p.point);
    for (const auto& p : b.punctures) add_point(p.point);

    for (const auto& pt : points) {
        const PuncturePart* pa = nullptr;
        const PuncturePart* pb = nullptr;
        for (const auto& p : a.punctures)
            if (same_point(p.point, pt)) pa = &p;
        for (const auto& p : b.punctures)
            if (same_point(p.point, pt)) pb = &p;

        // Merged strictly-increasing weight list.
        std::vector<TauValue> taus;
        auto merge_from = [&](const PuncturePart* p) {
            if (!p) return;
            for (const auto& t : p->taus) {
                bool found = false;
                for (const auto& u : taus) found = found || u.value == t.value;
                if (!found) taus.push_back(t);
            }
        };
        merge_from(pa);
        merge_from(pb);
        std::sort(taus.begin(), taus.end(),
                  [](const TauValue& x, const TauValue& y) { return x.value < y.value; });

        PuncturePart merged;
        merged.point = pt;
        merged.taus = taus;
        for (const auto& t : taus) {
            auto pick = [&](const PuncturePart* p, int rank) {
                if (p)
                    for (size_t i = 0; i < p->taus.size(); ++i)
                        if (p->taus[i].value == t.value) return p->chain[i];
                return LaurentMatrix::identity(rank);
            };
            merged.chain.push_back(block_diagonal(pick(pa, a.rank), pick(pb, b.rank)));
        }
        out.punctures.push_back(std::move(merged));
    }
    return out;
}

ParabolicDifferenceModule rank_one_construct(
    const std::vector<std::pair<RatComplex, long long>>& l_data, const RatComplex& p0,
    long long l, const Rational& tau1, const Rational& tau2) {
    if (!(0 <= tau1 && tau1 < tau2 && tau2 < 1))
        throw std::invalid_argument("weights must satisfy 0 <= tau1 < tau2 < 1");
    long long lsum = 0;
    for (const auto& [p, li] : l_data) {
        lsum += li;
        if (same_point(p, p0))
            throw std::invalid_argument("P0 must be distinct from the twist divisor points");
    }
    if (lsum != 0) throw std::invalid_argument("twist divisor degrees must sum to zero");

    ParabolicDifferenceModule out;
    out.rank = 1;
    out.deg_V = 0;
    out.twist = TwistLineBundle{{0.0, 0.0}, TwistLineBundle::Provenance::Explicit};

    for (const auto& [p, li] : l_data) {
        PuncturePart part;
        part.point = p;
        part.taus = {TauValue::exact(Rational(0))};
        part.chain = {LaurentMatrix::diagonal({int(li)})};
        out.punctures.push_back(std::move(part));
    }
    PuncturePart part0;
    part0.point = p0;
    part0.taus = {TauValue::exact(tau1), TauValue::exact(tau2)};
    part0.chain = {LaurentMatrix::diagonal({int(l)}), LaurentMatrix::diagonal({int(-l)})};
    out.punctures.push_back(std::move(part0));
    validate(out);
    return out;
}

}  // namespace monodrome
