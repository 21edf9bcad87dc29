#pragma once

#include <array>
#include <filesystem>
#include <optional>
#include <string>

#include "monodrome/monopole.hpp"

// vendored single-header nlohmann/json
#include <json.hpp>

namespace monodrome {

using Json = nlohmann::json;

/// One problem description shared by every subcommand.
struct ProblemSpec {
    LatticeBasis basis;
    std::vector<SingularPoint> singular;
    std::complex<double> rho0{0.0, 0.0};
    std::optional<double> b_c;  // (1,1) harmonic coefficient of B
    long long base_degree = 0;
    std::array<int, 3> resolution{64, 64, 64};
    double tolerance = 0.01;
    std::vector<SubmoduleDescriptor> candidates;
    bool candidates_exhaustive = false;
};

Rational rational_from_json(const Json& j);
Json rational_to_json(const Rational& q);
/// Always [num, den]; entries fall back to strings past the int64 range.
Json rational_pair_json(const Rational& q);

ProblemSpec parse_problem(const Json& j);
ProblemSpec load_problem(const std::filesystem::path& file);

Json geometry_report(const TorusGeometry& g, const std::vector<PunctureHits>& punctures);

Json module_to_json(const ParabolicDifferenceModule& v);
ParabolicDifferenceModule module_from_json(const Json& j);

Json laurent_matrix_to_json(const LaurentMatrix& m);
LaurentMatrix laurent_matrix_from_json(const Json& j);

std::vector<SubmoduleDescriptor> candidates_from_json(const Json& j, bool& exhaustive);

Json solution_report(const MonopoleSolution& sol, std::optional<double> predicted_mu_an);

void write_fields_csv(const std::filesystem::path& file, const MonopoleSolution& sol);

Json load_json(const std::filesystem::path& file);
void save_json(const std::filesystem::path& file, const Json& j);

}  // namespace monodrome
