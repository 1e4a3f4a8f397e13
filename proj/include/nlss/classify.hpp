#pragma once

#include <optional>
#include <string>
#include <vector>

#include "nlss/system_model.hpp"

namespace nlss {

using Mat3 = std::array<std::array<double, 3>, 3>;
using Vec3 = std::array<double, 3>;

struct RankKernel {
    int rank = 0;
    std::vector<Vec3> kernel;       // orthonormal basis of ker C
    std::optional<Vec3> coercive;   // (a,b,c) in ker C with b^2 < ac, a > 0
    std::vector<Vec3> criterion_kernel;  // kernel of the full 6x3 criterion matrix
    std::optional<Vec3> admissible;      // coercive vector of the criterion kernel
};

RankKernel rank_and_kernel(const Mat3& C, double tol = 1e-10);
RankKernel rank_and_kernel(const MatrixVectorForm& mv, double tol = 1e-10);

struct Match {
    FormTag tag = FormTag::Custom;
    FormParams params;
    Mat2 M{};  // v = M u carries the input system to the standard form
    double residual = 0;
};

struct SearchBudget {
    int grid_angle = 24;  // samples of each rotation angle on [0, pi)
    int grid_ratio = 21;  // samples of log(s/t) on [-log 100, log 100]
    int refine = 8;       // local refinements from the best grid cells
    double tol = 1e-8;
};

// nullopt: no match within budget (not a proof of non-membership).
// Throws ValidationError when no coercive (a,b,c) exists.
std::optional<Match> match_standard_form(const SystemSpec& spec, const SearchBudget& budget = {});

// Params of the standard form with the given tag read off a lambda vector in the NLS1-5 family, if the tag's
// constraints hold up to a positive rescaling. `scale` receives k with k*l equal to the form's lambdas.
std::optional<FormParams> interpret_as(FormTag tag, const Lambdas& l, double* scale = nullptr, double tol = 1e-9);

GForm standard_form(FormTag tag, const FormParams& q);

struct StructureSignature {
    double g_min = 0;
    int orbits = 0;
    std::vector<double> angles;  // sorted pairwise unitary angles of T0 generators
};

StructureSignature structure_signature(const GForm& g);
bool same_structure(const StructureSignature& a, const StructureSignature& b, double tol = 1e-6);

}  // namespace nlss
