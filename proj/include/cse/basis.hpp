#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace cse {

inline constexpr double kBohrPerAngstrom = 1.8897261254578281;

struct Geometry {
    std::vector<Eigen::Vector3d> centers;  // bohr
    std::vector<double> charges;
    std::string label;
};

// s-type contracted Gaussian; coefficients weight normalized primitives.
struct ContractedShell {
    int center = 0;
    std::vector<double> exponents;     // bohr^-2, strictly decreasing
    std::vector<double> coefficients;  // rescaled so <chi|chi> = 1
};

struct IntegralSet {
    int n_ao = 0;
    Eigen::MatrixXd S, T, Vne;  // AO one-electron matrices, hartree units
    std::vector<double> eri;    // dense (pq|rs), chemist convention
    double e_nuc = 0.0;

    double& eri_at(int p, int q, int r, int s) {
        return eri[((p * n_ao + q) * std::size_t(n_ao) + r) * n_ao + s];
    }
    double eri_at(int p, int q, int r, int s) const {
        return eri[((p * n_ao + q) * std::size_t(n_ao) + r) * n_ao + s];
    }
};

// F0(x) = (1/2) sqrt(pi/x) erf(sqrt(x)); short series below the branch point.
double boys_f0(double x);

Geometry hydrogen_chain(int n, double r_angstrom);

// Basis data file: "exponent coefficient" per primitive, blank line between
// shells. Returns unnormalized shells with center unset.
std::vector<ContractedShell> load_basis_file(const std::string& path);

// Normalize contraction so the contracted self-overlap is 1.
void normalize_shell(ContractedShell& shell);

// One copy of each template shell per geometry center, normalized.
std::vector<ContractedShell> shells_for_geometry(const Geometry& geom,
                                                 const std::vector<ContractedShell>& templates);

IntegralSet build_integral_set(const Geometry& geom,
                               const std::vector<ContractedShell>& shells);

}  // namespace cse
