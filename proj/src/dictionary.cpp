#include "monodrome/dictionary.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace monodrome {

std::complex<double> scattering_twist(const TwistForm& rho, double b1, double b2) {
    if (b1 > b2) throw std::invalid_argument("scattering interval must have b1 <= b2");
    return rho.rho0 * (b2 - b1);
}

ParabolicDifferenceModule upsilon_rank_one(const RankOneMiniData& data) {
    const TorusGeometry& g = data.geometry;

    ParabolicDifferenceModule out;
    out.rank = 1;
    out.deg_V = data.base_degree;
    out.frak_a = g.frak_a_d();
    out.twist = TwistLineBundle::from_rho(data.rho.rho0, g.frak_t_d());

    if (data.singularities.empty()) return out;

    auto groups = project_singular_hits(g, data.singularities);
    long long total_charge = 0;
    for (const auto& grp : groups) {
        PuncturePart part;
        part.point = grp.table.point;
        for (size_t i = 0; i < grp.charges.size(); ++i) {
            part.taus.push_back(TauValue::exact(grp.table.tau_values[i]));
            part.chain.push_back(LaurentMatrix::diagonal({grp.charges[i]}));
            total_charge += grp.charges[i];
        }
        out.punctures.push_back(std::move(part));
    }

    if (total_charge != 0) {
        // Close the chain with a weight-0 step on the first puncture; this is
        // the implied c1 correction for a net-charge configuration.
        PuncturePart& first = out.punctures.front();
        if (first.taus.front().value == 0)
            throw std::invalid_argument(
                "cannot close the chain: puncture at the canonical origin slice already has a "
                "weight-0 crossing");
        first.taus.insert(first.taus.begin(), TauValue::exact(Rational(0)));
        first.chain.insert(first.chain.begin(),
                           LaurentMatrix::diagonal({int(-total_charge)}));
    }
    validate(out);
    return out;
}

KSDegreeVector ks_degree(double deg_an, int rank, const TwistForm& rho) {
    if (rank < 1) throw std::invalid_argument("rank must be >= 1");
    KSDegreeVector v;
    v.c_t = deg_an / std::numbers::pi;
    v.c_w = -(double(rank) / std::numbers::pi) * rho.integral_rho0;
    v.c_wbar = std::conj(v.c_w);
    return v;
}

double degree_comparison(const ParabolicDifferenceModule& v, const TorusGeometry& geom,
                         const TwistForm& rho) {
    if (std::abs(v.frak_a - geom.frak_a_d()) > 1e-9)
        throw std::invalid_argument("geometry mismatch: module and torus disagree on frak_a");
    double vol = geom.volume_d();
    if (std::abs(rho.integral_rho0 - rho.rho0 * vol) > 1e-9 * (1.0 + std::abs(rho.rho0) * vol))
        throw std::invalid_argument("geometry mismatch: twist integral disagrees with volume");
    double mu = slope(v).as_double();
    return geom.frak_t_d() * std::numbers::pi * mu +
           2.0 * vol * (geom.gamma_d() * rho.rho0).real();
}

}  // namespace monodrome
