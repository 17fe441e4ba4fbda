#pragma once

#include <json.hpp>
#include <string>
#include <vector>

#include "cse/ansatz.hpp"
#include "cse/dl.hpp"
#include "cse/fci.hpp"
#include "cse/scf.hpp"

namespace cse {

inline constexpr const char* kVersion = "0.1.0";

struct RunConfig {
    int chain = 4;
    std::vector<double> r_list = {0.6, 1.0, 1.4, 1.8, 2.2, 2.6};
    std::string basis_file = "data/sto-6g.h.dat";
    std::string reference_file;  // literature coupled-cluster columns, optional
    int m = 2;
    unsigned seed = 12345;
    std::string format = "json";
    std::string out;
    std::string plot_out;
    OptimizerOptions optimizer;
};

RunConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const RunConfig& c);

// Everything downstream of the integrals for one geometry. Even chains get an
// RHF reference; odd chains get Loewdin orbitals and an Sz = +1/2 sector.
struct SystemSolution {
    Geometry geometry;
    IntegralSet integrals;
    ScfResult scf;
    SpinOrbitalHamiltonian hamiltonian;
    DeterminantBasis basis;
    Spectrum spectrum;
    Det hf_reference = 0;
    int n_electrons = 0;

    // The eigenvectors point back at `basis`, so moves must re-seat them;
    // copies are forbidden to keep that the only aliasing to worry about.
    SystemSolution() = default;
    SystemSolution(const SystemSolution&) = delete;
    SystemSolution& operator=(const SystemSolution&) = delete;
    SystemSolution(SystemSolution&& other) noexcept { *this = std::move(other); }
    SystemSolution& operator=(SystemSolution&& other) noexcept {
        geometry = std::move(other.geometry);
        integrals = std::move(other.integrals);
        scf = std::move(other.scf);
        hamiltonian = std::move(other.hamiltonian);
        basis = std::move(other.basis);
        spectrum = std::move(other.spectrum);
        hf_reference = other.hf_reference;
        n_electrons = other.n_electrons;
        for (StateVector& v : spectrum.eigenvectors) v.basis = &basis;
        return *this;
    }
};

SystemSolution prepare_system(const RunConfig& config, double r, int n_states);

// The diagonal canonical Fock operator and its complement V = H - H_HF.
PerturbationSplit hf_perturbation_split(const SystemSolution& sys);

nlohmann::json run_scf_fci(const RunConfig& config);
nlohmann::json run_dl_table(const RunConfig& config);
nlohmann::json run_cse_scan(const RunConfig& config);
nlohmann::json run_excited(const RunConfig& config);

std::string report_to_csv(const nlohmann::json& report);
void write_report(const nlohmann::json& report, const RunConfig& config);

std::string file_checksum(const std::string& path);  // FNV-1a, hex

}  // namespace cse
