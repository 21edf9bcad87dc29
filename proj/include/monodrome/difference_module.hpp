#pragma once

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "monodrome/laurent.hpp"
#include "monodrome/rational.hpp"

namespace monodrome {

/// Degree-0 twisting line bundle on T, tracked by the coefficient of its
/// (0,1)-connection form. It never enters degree arithmetic.
struct TwistLineBundle {
    std::complex<double> parameter{0.0, 0.0};
    enum class Provenance { RhoConstant, Explicit } provenance = Provenance::Explicit;

    static TwistLineBundle from_rho(std::complex<double> rho0, double frak_t) {
        return {rho0 * frak_t, Provenance::RhoConstant};
    }
};

/// Parabolic weight. Weights coming from float data keep an exact dyadic
/// value internally but mark the module's degree as approximate.
struct TauValue {
    Rational value;
    bool from_float = false;

    static TauValue exact(Rational q) { return {std::move(q), false}; }
    static TauValue approx(double x) { return {rational_from_double(x), true}; }
};

/// Rational degree that remembers whether every weight feeding it was exact.
struct DegreeValue {
    Rational value;
    bool exact = true;

    double as_double() const { return to_double(value); }
};

struct PuncturePart {
    RatComplex point;
    std::vector<TauValue> taus;
    LatticeChain chain;  // chain[i] carries lattice i to lattice i+1
};

struct ParabolicDifferenceModule {
    int rank = 1;
    long long deg_V = 0;
    TwistLineBundle twist;
    std::complex<double> frak_a{0.0, 0.0};
    std::vector<PuncturePart> punctures;
};

/// Throws std::invalid_argument naming the violated invariant: weight
/// monotonicity, chain shape, step invertibility, or the telescoping
/// identity sum deg(L_i, L_{i-1}) = 0.
void validate(const ParabolicDifferenceModule& v);

/// deg(V_*) = deg V + sum_P sum_i (1 - tau_{P,i}) deg(L_{P,i}, L_{P,i-1}).
DegreeValue parabolic_degree(const ParabolicDifferenceModule& v);

/// The same number computed as deg V - sum tau * deg-jump; equal to
/// parabolic_degree exactly when the telescoping identity holds.
DegreeValue parabolic_degree_tau_form(const ParabolicDifferenceModule& v);

DegreeValue slope(const ParabolicDifferenceModule& v);

struct SubmoduleDescriptor {
    int rank = 1;
    long long deg_V = 0;
    std::vector<int> frame_columns;                   // split case
    std::optional<std::vector<PuncturePart>> chains;  // general case: caller-supplied
    std::string label;
};

/// Split case: frame_columns must select a block that every chain step
/// preserves; the induced chain is the corresponding diagonal block.
ParabolicDifferenceModule induce_submodule(const ParabolicDifferenceModule& v,
                                           const SubmoduleDescriptor& s);

enum class StabilityVerdict { Stable, Semistable, Polystable, Unstable, Inconclusive };

std::string to_string(StabilityVerdict v);

struct StabilityReport {
    StabilityVerdict verdict;
    std::optional<int> witness;  // index into the candidate family
    std::string detail;
};

/// Verdict of V against the supplied candidate family. A family that is not
/// marked exhaustive can only certify instability; otherwise the verdict is
/// Inconclusive.
StabilityReport check_stability(const ParabolicDifferenceModule& v,
                                const std::vector<SubmoduleDescriptor>& candidates,
                                bool family_exhaustive);

/// Direct sum with weight tables merged per puncture; missing weights are
/// padded with identity steps.
ParabolicDifferenceModule direct_sum(const ParabolicDifferenceModule& a,
                                     const ParabolicDifferenceModule& b);

/// The rank-one module with V = O_T, a length-one chain [z^{l_i}] of weight 0
/// at each P_i, and the two-step chain [z^l], [z^-l] of weights (tau1, tau2)
/// at P0. Its parabolic degree is (tau2 - tau1) * l.
ParabolicDifferenceModule rank_one_construct(
    const std::vector<std::pair<RatComplex, long long>>& l_data, const RatComplex& p0,
    long long l, const Rational& tau1, const Rational& tau2);

}  // namespace monodrome
