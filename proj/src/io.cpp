#include "monodrome/io.hpp"

#include <fstream>
#include <stdexcept>

namespace monodrome {

namespace {

bool fits_int64(const BigInt& v) {
    static const BigInt lo = BigInt(std::numeric_limits<long long>::min());
    static const BigInt hi = BigInt(std::numeric_limits<long long>::max());
    return lo <= v && v <= hi;
}

std::complex<double> complex_from_json(const Json& j) {
    if (j.is_number()) return {j.get<double>(), 0.0};
    if (j.is_array() && j.size() == 2) return {j[0].get<double>(), j[1].get<double>()};
    throw std::invalid_argument("expected a complex number as [re, im]");
}

Json complex_to_json(std::complex<double> z) { return Json::array({z.real(), z.imag()}); }

RatComplex rat_complex_from_json(const Json& j) {
    if (j.is_array() && j.size() == 2)
        return {rational_from_json(j[0]), rational_from_json(j[1])};
    if (j.is_number() || j.is_string()) return RatComplex(rational_from_json(j));
    throw std::invalid_argument("expected a complex number as [re, im]");
}

}  // namespace

Rational rational_from_json(const Json& j) {
    if (j.is_number_integer()) return Rational(j.get<long long>());
    if (j.is_number()) return rational_from_double(j.get<double>());
    if (j.is_string()) return rational_from_string(j.get<std::string>());
    if (j.is_array() && j.size() == 2) {
        Rational num = rational_from_json(j[0]);
        Rational den = rational_from_json(j[1]);
        if (den == 0) throw std::invalid_argument("rational with zero denominator");
        return num / den;
    }
    throw std::invalid_argument("expected a rational as number, \"p/q\", or [num, den]");
}

Json rational_to_json(const Rational& q) {
    const BigInt& num = numerator(q);
    const BigInt& den = denominator(q);
    if (den == 1 && fits_int64(num)) return Json(num.convert_to<long long>());
    if (fits_int64(num) && fits_int64(den))
        return Json::array({num.convert_to<long long>(), den.convert_to<long long>()});
    return Json(rational_to_string(q));
}

Json rational_pair_json(const Rational& q) {
    auto leg = [](const BigInt& v) {
        return fits_int64(v) ? Json(v.convert_to<long long>()) : Json(v.str());
    };
    return Json::array({leg(numerator(q)), leg(denominator(q))});
}

ProblemSpec parse_problem(const Json& j) {
    ProblemSpec spec;
    if (!j.contains("basis") || !j["basis"].is_array() || j["basis"].size() != 3)
        throw std::invalid_argument("problem schema: \"basis\" must list three generators");
    for (int i = 0; i < 3; ++i) {
        const Json& gen = j["basis"][i];
        if (!gen.is_array() || gen.size() != 2)
            throw std::invalid_argument("problem schema: generator must be [a, [re, im]]");
        spec.basis.e[i].a = rational_from_json(gen[0]);
        spec.basis.e[i].alpha = rat_complex_from_json(gen[1]);
    }
    if (j.contains("singular"))
        for (const Json& s : j["singular"]) {
            SingularPoint p;
            p.t = rational_from_json(s.at("t"));
            p.w = rat_complex_from_json(s.at("w"));
            p.charge = s.value("charge", 0);
            spec.singular.push_back(std::move(p));
        }
    if (j.contains("rho0")) spec.rho0 = complex_from_json(j["rho0"]);
    if (j.contains("B") && j["B"].contains("c")) spec.b_c = j["B"]["c"].get<double>();
    spec.base_degree = j.value("base_degree", 0LL);
    if (j.contains("resolution")) {
        const Json& r = j["resolution"];
        if (!r.is_array() || r.size() != 3)
            throw std::invalid_argument("problem schema: \"resolution\" must be [N1, N2, N3]");
        for (int i = 0; i < 3; ++i) spec.resolution[i] = r[i].get<int>();
    }
    spec.tolerance = j.value("tolerance", 0.01);
    if (j.contains("candidates"))
        spec.candidates = candidates_from_json(j["candidates"], spec.candidates_exhaustive);
    return spec;
}

ProblemSpec load_problem(const std::filesystem::path& file) {
    return parse_problem(load_json(file));
}

Json geometry_report(const TorusGeometry& g, const std::vector<PunctureHits>& punctures) {
    Json out;
    out["gamma"] = complex_to_json(g.gamma_d());
    out["gamma_exact"] = Json::array({rational_to_json(g.gamma.re), rational_to_json(g.gamma.im)});
    out["frak_t"] = g.frak_t_d();
    out["frak_t_exact"] = rational_to_json(g.frak_t);
    out["frak_a"] = complex_to_json(g.frak_a_d());
    out["area"] = g.area_d();
    out["volume"] = g.volume_d();
    Json plist = Json::array();
    for (const auto& grp : punctures) {
        Json p;
        p["P"] = complex_to_json(grp.table.point.to_std());
        Json s = Json::array(), tau = Json::array(), tau_exact = Json::array();
        for (const auto& sv : grp.table.s_values) s.push_back(to_double(sv));
        for (const auto& tv : grp.table.tau_values) {
            tau.push_back(to_double(tv));
            tau_exact.push_back(rational_to_json(tv));
        }
        p["s"] = s;
        p["tau"] = tau;
        p["tau_exact"] = tau_exact;
        p["charges"] = grp.charges;
        plist.push_back(std::move(p));
    }
    out["punctures"] = plist;
    return out;
}

Json laurent_matrix_to_json(const LaurentMatrix& m) {
    Json entries = Json::array();
    for (int i = 0; i < m.size(); ++i)
        for (int j = 0; j < m.size(); ++j) {
            if (m.at(i, j).is_zero()) continue;
            Json terms = Json::array();
            for (const auto& [e, c] : m.at(i, j).terms()) {
                Json coeff = Json::array({rational_to_json(Rational(numerator(c.re))),
                                          rational_to_json(Rational(denominator(c.re))),
                                          rational_to_json(Rational(numerator(c.im))),
                                          rational_to_json(Rational(denominator(c.im)))});
                terms.push_back(Json::array({e, coeff}));
            }
            entries.push_back(Json::array({i, j, terms}));
        }
    return Json{{"r", m.size()}, {"entries", entries}};
}

LaurentMatrix laurent_matrix_from_json(const Json& j) {
    LaurentMatrix m(j.at("r").get<int>());
    for (const Json& entry : j.at("entries")) {
        int i = entry.at(0).get<int>();
        int jj = entry.at(1).get<int>();
        LaurentPoly p;
        for (const Json& term : entry.at(2)) {
            int e = term.at(0).get<int>();
            const Json& c = term.at(1);
            Rational re = rational_from_json(c.at(0)) / rational_from_json(c.at(1));
            Rational im = rational_from_json(c.at(2)) / rational_from_json(c.at(3));
            p.set(e, RatComplex(re, im));
        }
        m.at(i, jj) = std::move(p);
    }
    return m;
}

Json module_to_json(const ParabolicDifferenceModule& v) {
    Json out;
    out["rank"] = v.rank;
    out["deg_V"] = v.deg_V;
    out["twist"] = Json{{"parameter", complex_to_json(v.twist.parameter)},
                        {"provenance", v.twist.provenance == TwistLineBundle::Provenance::RhoConstant
                                           ? "rho_constant"
                                           : "explicit"}};
    out["frak_a"] = complex_to_json(v.frak_a);
    Json punctures = Json::array();
    for (const auto& p : v.punctures) {
        Json q;
        q["P"] = complex_to_json(p.point.to_std());
        Json taus = Json::array();
        for (const auto& t : p.taus) {
            if (t.from_float)
                taus.push_back(to_double(t.value));
            else
                taus.push_back(rational_to_json(t.value));
        }
        q["tau"] = taus;
        Json chain = Json::array();
        for (const auto& m : p.chain) chain.push_back(laurent_matrix_to_json(m));
        q["chain"] = chain;
        punctures.push_back(std::move(q));
    }
    out["punctures"] = punctures;
    return out;
}

ParabolicDifferenceModule module_from_json(const Json& j) {
    ParabolicDifferenceModule v;
    v.rank = j.at("rank").get<int>();
    v.deg_V = j.at("deg_V").get<long long>();
    if (j.contains("twist")) {
        v.twist.parameter = complex_from_json(j["twist"].at("parameter"));
        v.twist.provenance = j["twist"].value("provenance", "explicit") == std::string("rho_constant")
                                 ? TwistLineBundle::Provenance::RhoConstant
                                 : TwistLineBundle::Provenance::Explicit;
    }
    if (j.contains("frak_a")) v.frak_a = complex_from_json(j["frak_a"]);
    for (const Json& q : j.at("punctures")) {
        PuncturePart p;
        p.point = rat_complex_from_json(q.at("P"));
        for (const Json& t : q.at("tau")) {
            if (t.is_number() && !t.is_number_integer())
                p.taus.push_back(TauValue::approx(t.get<double>()));
            else
                p.taus.push_back(TauValue::exact(rational_from_json(t)));
        }
        for (const Json& m : q.at("chain")) p.chain.push_back(laurent_matrix_from_json(m));
        v.punctures.push_back(std::move(p));
    }
    validate(v);
    return v;
}

std::vector<SubmoduleDescriptor> candidates_from_json(const Json& j, bool& exhaustive) {
    const Json& list = j.is_array() ? j : j.at("candidates");
    exhaustive = j.is_object() ? j.value("exhaustive", false) : false;
    std::vector<SubmoduleDescriptor> out;
    for (const Json& c : list) {
        SubmoduleDescriptor d;
        d.rank = c.at("rank").get<int>();
        d.deg_V = c.value("deg_V", 0LL);
        if (c.contains("frame_columns"))
            d.frame_columns = c["frame_columns"].get<std::vector<int>>();
        if (c.contains("chains")) {
            std::vector<PuncturePart> parts;
            for (const Json& q : c["chains"]) {
                PuncturePart p;
                p.point = rat_complex_from_json(q.at("P"));
                for (const Json& t : q.at("tau")) {
                    if (t.is_number() && !t.is_number_integer())
                        p.taus.push_back(TauValue::approx(t.get<double>()));
                    else
                        p.taus.push_back(TauValue::exact(rational_from_json(t)));
                }
                for (const Json& m : q.at("chain")) p.chain.push_back(laurent_matrix_from_json(m));
                parts.push_back(std::move(p));
            }
            d.chains = std::move(parts);
        }
        d.label = c.value("label", "");
        out.push_back(std::move(d));
    }
    return out;
}

Json solution_report(const MonopoleSolution& sol, std::optional<double> predicted_mu_an) {
    Json out;
    out["deg_an"] = sol.deg_an;
    Json nf = Json::array();
    for (const auto& f : sol.near_field)
        nf.push_back(Json{{"k", f.k}, {"fit", f.fit}, {"residual", f.residual}});
    out["near_field"] = nf;
    out["c"] = sol.c;
    out["c_derived"] = sol.c_derived;
    out["slice_flux"] = sol.slice_flux;
    out["slice_index"] = sol.slice_index;
    out["bogomolny_residual"] = sol.bogomolny_residual;
    out["masked_cells"] = sol.masked_cells;
    out["mask_radius"] = sol.mask_radius;
    out["resolution"] =
        Json::array({sol.chi.grid.n[0], sol.chi.grid.n[1], sol.chi.grid.n[2]});
    if (predicted_mu_an) {
        out["predicted_mu_an"] = *predicted_mu_an;
        double scale = std::max(std::abs(*predicted_mu_an), 1e-12);
        out["discrepancy"] = std::abs(sol.deg_an - *predicted_mu_an) / scale;
    } else {
        out["predicted_mu_an"] = nullptr;
        out["discrepancy"] = nullptr;
    }
    return out;
}

void write_fields_csv(const std::filesystem::path& file, const MonopoleSolution& sol) {
    std::ofstream out(file);
    if (!out) throw std::runtime_error("cannot open " + file.string());
    out << "x1,x2,x3,chi,G\n";
    out.precision(17);
    const TorusGrid& g = sol.chi.grid;
    for (int i = 0; i < g.n[0]; ++i)
        for (int j = 0; j < g.n[1]; ++j)
            for (int k = 0; k < g.n[2]; ++k) {
                auto x = g.point(i, j, k);
                out << x[0] << ',' << x[1] << ',' << x[2] << ',' << sol.chi.at(i, j, k) << ','
                    << sol.G.at(i, j, k) << '\n';
            }
}

Json load_json(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw std::runtime_error("cannot open " + file.string());
    Json j;
    in >> j;
    return j;
}

void save_json(const std::filesystem::path& file, const Json& j) {
    std::ofstream out(file);
    if (!out) throw std::runtime_error("cannot open " + file.string());
    out << j.dump(2) << '\n';
}

}  // namespace monodrome
