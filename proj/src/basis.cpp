#include "cse/basis.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace cse {

namespace {

constexpr double kPi = std::numbers::pi;

double primitive_norm(double a) { return std::pow(2.0 * a / kPi, 0.75); }

// Gaussian product theorem prefactor and combined center.
struct GaussPair {
    double p;          // a + b
    double pre;        // exp(-a b |AB|^2 / p)
    Eigen::Vector3d P; // (aA + bB)/p
};

GaussPair combine(double a, const Eigen::Vector3d& A, double b, const Eigen::Vector3d& B) {
    GaussPair g;
    g.p = a + b;
    const double ab2 = (A - B).squaredNorm();
    g.pre = std::exp(-a * b / g.p * ab2);
    g.P = (a * A + b * B) / g.p;
    return g;
}

double prim_overlap(double a, const Eigen::Vector3d& A, double b, const Eigen::Vector3d& B) {
    const GaussPair g = combine(a, A, b, B);
    return std::pow(kPi / g.p, 1.5) * g.pre;
}

double prim_kinetic(double a, const Eigen::Vector3d& A, double b, const Eigen::Vector3d& B) {
    const double mu = a * b / (a + b);
    const double ab2 = (A - B).squaredNorm();
    return mu * (3.0 - 2.0 * mu * ab2) * prim_overlap(a, A, b, B);
}

double prim_nuclear(double a, const Eigen::Vector3d& A, double b, const Eigen::Vector3d& B,
                    const Eigen::Vector3d& C) {
    const GaussPair g = combine(a, A, b, B);
    const double pc2 = (g.P - C).squaredNorm();
    return -2.0 * kPi / g.p * g.pre * boys_f0(g.p * pc2);
}

double prim_eri(double a, const Eigen::Vector3d& A, double b, const Eigen::Vector3d& B,
                double c, const Eigen::Vector3d& C, double d, const Eigen::Vector3d& D) {
    const GaussPair gab = combine(a, A, b, B);
    const GaussPair gcd = combine(c, C, d, D);
    const double p = gab.p, q = gcd.p;
    const double pq2 = (gab.P - gcd.P).squaredNorm();
    return 2.0 * std::pow(kPi, 2.5) / (p * q * std::sqrt(p + q)) * gab.pre * gcd.pre *
           boys_f0(p * q / (p + q) * pq2);
}

}  // namespace

double boys_f0(double x) {
    if (x < 0.0) throw std::domain_error("boys_f0: negative argument");
    if (x < 1e-6) {
        // 4-term series, both branches agree well below 1e-14 at the cut
        return 1.0 - x / 3.0 + x * x / 10.0 - x * x * x / 42.0;
    }
    const double sx = std::sqrt(x);
    return 0.5 * std::sqrt(kPi / x) * std::erf(sx);
}

Geometry hydrogen_chain(int n, double r_angstrom) {
    if (n < 2) throw std::domain_error("hydrogen_chain: n must be >= 2");
    if (r_angstrom <= 0.0) throw std::domain_error("hydrogen_chain: spacing must be positive");
    Geometry g;
    const double r = r_angstrom * kBohrPerAngstrom;
    for (int i = 0; i < n; ++i) {
        g.centers.emplace_back(0.0, 0.0, i * r);
        g.charges.push_back(1.0);
    }
    std::ostringstream label;
    label << "H" << n << "_R" << r_angstrom;
    g.label = label.str();
    return g;
}

std::vector<ContractedShell> load_basis_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open basis file: " + path);
    std::vector<ContractedShell> shells;
    ContractedShell cur;
    std::string line;
    auto flush = [&] {
        if (!cur.exponents.empty()) {
            shells.push_back(cur);
            cur = ContractedShell{};
        }
    };
    while (std::getline(in, line)) {
        const auto h = line.find('#');
        if (h != std::string::npos) line.erase(h);
        std::istringstream ls(line);
        double e, c;
        if (ls >> e >> c) {
            cur.exponents.push_back(e);
            cur.coefficients.push_back(c);
        } else if (line.find_first_not_of(" \t\r") == std::string::npos) {
            flush();
        }
    }
    flush();
    if (shells.empty()) throw std::runtime_error("basis file has no shells: " + path);
    for (const auto& s : shells) {
        for (std::size_t i = 0; i < s.exponents.size(); ++i) {
            if (s.exponents[i] <= 0.0)
                throw std::runtime_error("basis file: non-positive exponent");
            if (i > 0 && s.exponents[i] >= s.exponents[i - 1])
                throw std::runtime_error("basis file: exponents must be strictly decreasing");
        }
    }
    return shells;
}

void normalize_shell(ContractedShell& shell) {
    const Eigen::Vector3d O = Eigen::Vector3d::Zero();
    double self = 0.0;
    const auto n = shell.exponents.size();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            self += shell.coefficients[i] * shell.coefficients[j] *
                    primitive_norm(shell.exponents[i]) * primitive_norm(shell.exponents[j]) *
                    prim_overlap(shell.exponents[i], O, shell.exponents[j], O);
    const double scale = 1.0 / std::sqrt(self);
    for (auto& c : shell.coefficients) c *= scale;
}

std::vector<ContractedShell> shells_for_geometry(const Geometry& geom,
                                                 const std::vector<ContractedShell>& templates) {
    std::vector<ContractedShell> out;
    for (std::size_t a = 0; a < geom.centers.size(); ++a) {
        for (const auto& t : templates) {
            ContractedShell s = t;
            s.center = static_cast<int>(a);
            normalize_shell(s);
            out.push_back(s);
        }
    }
    return out;
}

IntegralSet build_integral_set(const Geometry& geom, const std::vector<ContractedShell>& shells) {
    const auto natom = geom.centers.size();
    for (std::size_t a = 0; a < natom; ++a) {
        if (geom.charges[a] <= 0.0) throw std::runtime_error("geometry: non-positive charge");
        for (std::size_t b = a + 1; b < natom; ++b)
            if ((geom.centers[a] - geom.centers[b]).norm() < 1e-10)
                throw std::runtime_error("geometry: coincident centers");
    }
    for (const auto& s : shells)
        if (s.center < 0 || s.center >= static_cast<int>(natom))
            throw std::runtime_error("shell references invalid center");

    IntegralSet ints;
    const int n = static_cast<int>(shells.size());
    ints.n_ao = n;
    ints.S = Eigen::MatrixXd::Zero(n, n);
    ints.T = Eigen::MatrixXd::Zero(n, n);
    ints.Vne = Eigen::MatrixXd::Zero(n, n);
    ints.eri.assign(static_cast<std::size_t>(n) * n * n * n, 0.0);

    // weight = contraction coefficient times primitive normalization
    std::vector<std::vector<double>> w(n);
    for (int p = 0; p < n; ++p)
        for (std::size_t i = 0; i < shells[p].exponents.size(); ++i)
            w[p].push_back(shells[p].coefficients[i] * primitive_norm(shells[p].exponents[i]));

    auto center = [&](int p) -> const Eigen::Vector3d& { return geom.centers[shells[p].center]; };

    for (int p = 0; p < n; ++p)
        for (int q = 0; q <= p; ++q) {
            double s = 0.0, t = 0.0, v = 0.0;
            for (std::size_t i = 0; i < shells[p].exponents.size(); ++i)
                for (std::size_t j = 0; j < shells[q].exponents.size(); ++j) {
                    const double wij = w[p][i] * w[q][j];
                    const double a = shells[p].exponents[i], b = shells[q].exponents[j];
                    s += wij * prim_overlap(a, center(p), b, center(q));
                    t += wij * prim_kinetic(a, center(p), b, center(q));
                    for (std::size_t A = 0; A < natom; ++A)
                        v += wij * geom.charges[A] *
                             prim_nuclear(a, center(p), b, center(q), geom.centers[A]);
                }
            ints.S(p, q) = ints.S(q, p) = s;
            ints.T(p, q) = ints.T(q, p) = t;
            ints.Vne(p, q) = ints.Vne(q, p) = v;
        }

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(ints.S);
    if (es.eigenvalues().minCoeff() < 1e-10)
        throw std::runtime_error("overlap matrix not positive definite; smallest eigenvalue " +
                                 std::to_string(es.eigenvalues().minCoeff()));

#pragma omp parallel for schedule(dynamic) collapse(2)
    for (int p = 0; p < n; ++p)
        for (int q = 0; q < n; ++q) {
            if (q > p) continue;
            for (int r = 0; r < n; ++r)
                for (int s = 0; s <= r; ++s) {
                    if (r * n + s > p * n + q) continue;
                    double val = 0.0;
                    for (std::size_t i = 0; i < shells[p].exponents.size(); ++i)
                        for (std::size_t j = 0; j < shells[q].exponents.size(); ++j)
                            for (std::size_t k = 0; k < shells[r].exponents.size(); ++k)
                                for (std::size_t l = 0; l < shells[s].exponents.size(); ++l)
                                    val += w[p][i] * w[q][j] * w[r][k] * w[s][l] *
                                           prim_eri(shells[p].exponents[i], center(p),
                                                    shells[q].exponents[j], center(q),
                                                    shells[r].exponents[k], center(r),
                                                    shells[s].exponents[l], center(s));
                    // 8-fold symmetry, exact by construction
                    ints.eri_at(p, q, r, s) = val;
                    ints.eri_at(q, p, r, s) = val;
                    ints.eri_at(p, q, s, r) = val;
                    ints.eri_at(q, p, s, r) = val;
                    ints.eri_at(r, s, p, q) = val;
                    ints.eri_at(s, r, p, q) = val;
                    ints.eri_at(r, s, q, p) = val;
                    ints.eri_at(s, r, q, p) = val;
                }
        }

    ints.e_nuc = 0.0;
    for (std::size_t a = 0; a < natom; ++a)
        for (std::size_t b = a + 1; b < natom; ++b)
            ints.e_nuc += geom.charges[a] * geom.charges[b] /
                          (geom.centers[a] - geom.centers[b]).norm();
    return ints;
}

}  // namespace cse
