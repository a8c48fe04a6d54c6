#include "page_entropy/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <stdexcept>
#include <string>
#include <unordered_map>

#include "page_entropy/entropy.hpp"
#include "page_entropy/haar_sampler.hpp"
#include "page_entropy/parallel.hpp"

namespace page_entropy {

namespace {

constexpr double kDegeneracyTolerance = 1e-10;

std::uint64_t encode(const Configuration& c, std::size_t cap, std::size_t begin, std::size_t end) {
    std::uint64_t key = 0;
    for (std::size_t i = begin; i < end; ++i) key = key * (cap + 1) + c[i];
    return key;
}

class ConfigurationIndex {
public:
    ConfigurationIndex(const std::vector<Configuration>& configs, std::size_t cap) : cap_(cap) {
        for (std::size_t i = 0; i < configs.size(); ++i) index_.emplace(encode(configs[i], cap, 0, configs[i].size()), i);
    }
    std::size_t at(const Configuration& c) const { return index_.at(encode(c, cap_, 0, c.size())); }

private:
    std::size_t cap_;
    std::unordered_map<std::uint64_t, std::size_t> index_;
};

void check_dimension(std::size_t dim) {
    if (dim == 0) throw std::domain_error("empty sector");
    if (dim > kMaxDenseDimension)
        throw InfeasibleError("sector dimension " + std::to_string(dim) + " exceeds the dense limit of " +
                              std::to_string(kMaxDenseDimension));
}

// Two-site operator on |a, b> (a, b in {0,1,2}, S^z = k - 1), index 3a + b.
Eigen::Matrix<double, 9, 9> spin1_bond(double lambda, double Delta) {
    using M3 = Eigen::Matrix3d;
    M3 sz = M3::Zero(), sp = M3::Zero();
    sz.diagonal() << -1.0, 0.0, 1.0;
    sp(1, 0) = sp(2, 1) = std::sqrt(2.0);
    const M3 sm = sp.transpose();
    const M3 id = M3::Identity();
    auto kron = [](const M3& a, const M3& b) {
        Eigen::Matrix<double, 9, 9> k;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) k.block<3, 3>(3 * i, 3 * j) = a(i, j) * b;
        return k;
    };
    const Eigen::Matrix<double, 9, 9> xy = 0.5 * (kron(sp, sm) + kron(sm, sp));
    const Eigen::Matrix<double, 9, 9> zz = kron(sz, sz);
    const Eigen::Matrix<double, 9, 9> h0 = -(xy + Delta * zz);
    const double mu = Delta - 1.0;
    const double nu = 2.0 - std::sqrt(2.0 * (1.0 + Delta));
    const Eigen::Matrix<double, 9, 9> ss = xy + zz;
    const Eigen::Matrix<double, 9, 9> mixed = xy * zz;
    const Eigen::Matrix<double, 9, 9> h1 =
        ss * ss - mu * (2.0 * kron(sz * sz, id) - zz * zz) - nu * (mixed + mixed.transpose());
    return h0 + lambda * h1;
}

}  // namespace

std::vector<Configuration> enumerate_configurations(std::size_t sites, std::size_t cap, std::size_t N) {
    std::vector<Configuration> out;
    if (sites == 0) {
        if (N == 0) out.emplace_back();
        return out;
    }
    Configuration c(sites, 0);
    // Depth-first fill; remaining capacity prunes impossible prefixes.
    auto rec = [&](auto&& self, std::size_t site, std::size_t left) -> void {
        if (site + 1 == sites) {
            if (left <= cap) {
                c[site] = static_cast<std::uint8_t>(left);
                out.push_back(c);
            }
            return;
        }
        const std::size_t rest = (sites - site - 1) * cap;
        for (std::size_t k = 0; k <= std::min(cap, left); ++k) {
            if (left - k > rest) continue;
            c[site] = static_cast<std::uint8_t>(k);
            self(self, site + 1, left - k);
        }
    };
    rec(rec, 0, N);
    return out;
}

std::size_t SectorHamiltonian::cap() const {
    if (kind == HamiltonianKind::spin1_xxz) return 2;
    return n_max ? std::min(*n_max, N) : N;
}

LocalModel SectorHamiltonian::local_model() const {
    if (kind == HamiltonianKind::spin1_xxz) return catalog("spin_j", 1.0);
    if (n_max) return catalog("capped_bosons", static_cast<double>(*n_max));
    return catalog("bosons");
}

SectorHamiltonian build_spin1_xxz(std::size_t V, long M, double lambda, double Delta) {
    if (V < 3) throw std::invalid_argument("spin-1 chain needs V >= 3");
    if (std::labs(M) > static_cast<long>(V)) throw std::invalid_argument("|M| must not exceed V");
    if (Delta < -1.0) throw std::invalid_argument("Delta must be >= -1 so that nu is real");
    SectorHamiltonian H;
    H.kind = HamiltonianKind::spin1_xxz;
    H.V = V;
    H.M = M;
    H.N = static_cast<std::size_t>(M + static_cast<long>(V));
    H.lambda = lambda;
    H.Delta = Delta;
    H.basis = enumerate_configurations(V, 2, H.N);
    const std::size_t dim = H.basis.size();
    check_dimension(dim);

    const auto bond = spin1_bond(lambda, Delta);
    const ConfigurationIndex index(H.basis, 2);
    H.matrix = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
    for (std::size_t col = 0; col < dim; ++col) {
        const Configuration& c = H.basis[col];
        for (std::size_t i = 0; i < V; ++i) {
            const std::size_t j = (i + 1) % V;
            const int p = 3 * c[i] + c[j];
            for (int q = 0; q < 9; ++q) {
                const double amp = bond(q, p);
                if (amp == 0.0) continue;
                Configuration d = c;
                d[i] = static_cast<std::uint8_t>(q / 3);
                d[j] = static_cast<std::uint8_t>(q % 3);
                H.matrix(static_cast<Eigen::Index>(index.at(d)), static_cast<Eigen::Index>(col)) += amp;
            }
        }
    }
    return H;
}

SectorHamiltonian build_bose_hubbard(std::size_t V, std::size_t N, double U, std::optional<std::size_t> n_max) {
    if (V < 3) throw std::invalid_argument("Bose-Hubbard chain needs V >= 3");
    if (n_max && *n_max == 0) throw std::invalid_argument("occupancy cap must be >= 1");
    SectorHamiltonian H;
    H.kind = HamiltonianKind::bose_hubbard;
    H.V = V;
    H.N = N;
    H.U = U;
    H.n_max = n_max;
    const std::size_t cap = H.cap();
    if (cap > 255) throw InfeasibleError("site occupancy above 255 is not supported");
    H.basis = enumerate_configurations(V, cap, N);
    const std::size_t dim = H.basis.size();
    check_dimension(dim);

    const ConfigurationIndex index(H.basis, cap);
    H.matrix = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
    for (std::size_t col = 0; col < dim; ++col) {
        const Configuration& c = H.basis[col];
        const auto e = static_cast<Eigen::Index>(col);
        double diag = 0.0;
        for (std::size_t i = 0; i < V; ++i) diag += 0.5 * U * c[i] * (c[i] - 1.0);
        H.matrix(e, e) += diag;
        for (std::size_t i = 0; i < V; ++i) {
            const std::size_t j = (i + 1) % V;
            // b_i^dag b_j and b_j^dag b_i
            for (const auto& [to, from] : {std::pair{i, j}, std::pair{j, i}}) {
                if (c[from] == 0 || c[to] >= cap) continue;
                Configuration d = c;
                const double amp = -std::sqrt((c[to] + 1.0) * c[from]);
                ++d[to];
                --d[from];
                H.matrix(static_cast<Eigen::Index>(index.at(d)), e) += amp;
            }
        }
    }
    return H;
}

MidSpectrumReport mid_spectrum_entropies(const SectorHamiltonian& H, std::size_t window,
                                         const std::vector<std::size_t>& V_A_list, unsigned threads) {
    const std::size_t dim = H.dimension();
    if (window == 0 || window > dim)
        throw std::invalid_argument("window " + std::to_string(window) + " must lie in 1.." + std::to_string(dim));
    for (const auto V_A : V_A_list)
        if (V_A > H.V) throw std::invalid_argument("V_A = " + std::to_string(V_A) + " exceeds V");

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H.matrix);
    if (es.info() != Eigen::Success) throw NumericalError("eigensolver failed");
    const Eigen::VectorXd& E = es.eigenvalues();

    std::size_t first = (dim - window) / 2;
    std::size_t last = first + window;  // exclusive
    while (first > 0 && std::abs(E[static_cast<Eigen::Index>(first)] - E[static_cast<Eigen::Index>(first - 1)]) < kDegeneracyTolerance)
        --first;
    while (last < dim && std::abs(E[static_cast<Eigen::Index>(last)] - E[static_cast<Eigen::Index>(last - 1)]) < kDegeneracyTolerance)
        ++last;

    MidSpectrumReport report;
    report.window = last - first;
    report.first = first;
    report.energies = E;

    const LocalModel model = H.local_model();
    const std::size_t cap = H.cap();
    for (const auto V_A : V_A_list) {
        const BipartitionSpec spec{H.V, H.N, V_A};
        const SectorBasis basis = build_sector_basis(model, spec);

        // Position of every configuration inside the block layout of `basis`.
        std::vector<std::size_t> position(dim);
        std::vector<std::unique_ptr<ConfigurationIndex>> a_index(H.N + 1), b_index(H.N + 1);
        std::vector<std::size_t> block_of(H.N + 1, basis.blocks.size());
        for (std::size_t k = 0; k < basis.blocks.size(); ++k) {
            const auto N_A = basis.blocks[k].N_A;
            block_of[N_A] = k;
            a_index[N_A] = std::make_unique<ConfigurationIndex>(enumerate_configurations(V_A, cap, N_A), cap);
            b_index[N_A] = std::make_unique<ConfigurationIndex>(enumerate_configurations(H.V - V_A, cap, H.N - N_A), cap);
        }
        for (std::size_t c = 0; c < dim; ++c) {
            const Configuration& cfg = H.basis[c];
            std::size_t N_A = 0;
            for (std::size_t i = 0; i < V_A; ++i) N_A += cfg[i];
            const SectorBlock& blk = basis.blocks.at(block_of[N_A]);
            const Configuration a(cfg.begin(), cfg.begin() + static_cast<long>(V_A));
            const Configuration b(cfg.begin() + static_cast<long>(V_A), cfg.end());
            position[c] = blk.offset + a_index[N_A]->at(a) * blk.d_B + b_index[N_A]->at(b);
        }

        std::vector<double> S(report.window);
        parallel_for(report.window, threads, [&](std::size_t w) {
            const auto col = es.eigenvectors().col(static_cast<Eigen::Index>(first + w));
            Eigen::VectorXd psi(static_cast<Eigen::Index>(dim));
            for (std::size_t c = 0; c < dim; ++c) psi[static_cast<Eigen::Index>(position[c])] = col[static_cast<Eigen::Index>(c)];
            S[w] = von_neumann(reduced_spectrum(basis, psi));
        });
        MidSpectrumRow row;
        row.V_A = V_A;
        row.f = static_cast<double>(V_A) / static_cast<double>(H.V);
        for (const double s : S) row.mean += s;
        row.mean /= static_cast<double>(S.size());
        for (const double s : S) row.std += (s - row.mean) * (s - row.mean);
        row.std = std::sqrt(row.std / static_cast<double>(S.size()));
        report.rows.push_back(row);
    }
    return report;
}

double beta_spin1(double n) {
    if (!(n > 0.0 && n < 2.0)) throw std::domain_error("beta_spin1 needs 0 < n < 2");
    const double s = std::sqrt(1.0 - 3.0 * n * (n - 2.0));
    return (n - 2.0) * std::log(2.0 - n) + (n - 1.0) * std::log(2.0) + std::log(7.0 - 3.0 * n + s) -
           n * std::log(n - 1.0 + s);
}

}  // namespace page_entropy
