// Timing comparison of the OpenMP kernels against their serial references.

#include <chrono>
#include <cstdio>
#include <random>

#include "cse/fockspace.hpp"
#include "cse/report.hpp"

namespace {

template <typename F>
double time_ms(F&& fn, int reps) {
    const auto t0 = std::chrono::steady_clock::now();
    for (int i = 0; i < reps; ++i) fn();
    const auto t1 = std::chrono::steady_clock::now();
    return std::chrono::duration<double, std::milli>(t1 - t0).count() / reps;
}

}  // namespace

int main() {
    using namespace cse;
    RunConfig config;
    config.basis_file = "data/sto-6g.h.dat";
    config.chain = 5;  // largest sector at desk scale
    SystemSolution sys = prepare_system(config, 1.0, 0);

    std::mt19937 rng(7);
    std::normal_distribution<double> dist;
    StateVector x = StateVector::zero(sys.basis), y = StateVector::zero(sys.basis);
    for (int i = 0; i < sys.basis.size(); ++i) {
        x.c[i] = dist(rng);
        y.c[i] = dist(rng);
    }

    const int reps = 20;
    const double t_contract_par = time_ms([&] { kernels::contract_pairs(x, y); }, reps);
    const double t_contract_ser = time_ms([&] { kernels::contract_pairs_serial(x, y); }, reps);
    const double t_dense_par =
        time_ms([&] { kernels::dense_hamiltonian(sys.hamiltonian, sys.basis); }, reps);
    const double t_dense_ser =
        time_ms([&] { kernels::dense_hamiltonian_serial(sys.hamiltonian, sys.basis); }, reps);

    std::printf("%-28s %10s %10s %8s\n", "kernel", "serial/ms", "openmp/ms", "speedup");
    std::printf("%-28s %10.3f %10.3f %8.2f\n", "contract_pairs", t_contract_ser, t_contract_par,
                t_contract_ser / t_contract_par);
    std::printf("%-28s %10.3f %10.3f %8.2f\n", "dense_hamiltonian", t_dense_ser, t_dense_par,
                t_dense_ser / t_dense_par);
    return 0;
}
