// Copyright 2026 the qdlaser authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "reduction.hpp"

#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>
#include <sstream>

#include "errors.hpp"

namespace qdl {

namespace {

// Positions of the diagonal components in the vectorized basis, and the
// coherences in scan order after them.
struct Partition {
    std::vector<long> diag;          // m entries: vec index of (i, i)
    std::vector<long> coh;           // n - m entries
    std::vector<long> slot;          // vec index -> position in its class
    std::vector<bool> is_diag;
};

Partition partition_basis(int d) {
    const long n = static_cast<long>(d) * d;
    Partition p;
    p.slot.assign(n, -1);
    p.is_diag.assign(n, false);
    for (int i = 0; i < d; ++i) {
        const long v = static_cast<long>(i) * d + i;
        p.is_diag[v] = true;
        p.slot[v] = static_cast<long>(p.diag.size());
        p.diag.push_back(v);
    }
    for (long v = 0; v < n; ++v) {
        if (p.is_diag[v]) continue;
        p.slot[v] = static_cast<long>(p.coh.size());
        p.coh.push_back(v);
    }
    return p;
}

}  // namespace

PhotonRateModel reduce(const Superoperator& gen, double kappa, int m_max) {
    const HilbertLayout& lay = gen.layout;
    const int d = lay.dim;
    const int f = lay.fock_dim();
    if (kappa <= 0.0) throw InvalidArgError("reduce: kappa must be positive");
    if (m_max < 1 || m_max > lay.n_max)
        throw InvalidArgError("reduce: m_max must lie in [1, n_max]");

    const Partition part = partition_basis(d);
    const long nc = static_cast<long>(part.coh.size());

    Matrix l_dd = Matrix::Zero(d, d);
    Matrix l_dc = Matrix::Zero(d, nc);
    Matrix l_cd = Matrix::Zero(nc, d);
    std::vector<Eigen::Triplet<Cplx>> cc_trips;
    for (int k = 0; k < gen.matrix.outerSize(); ++k)
        for (SparseMatrix::InnerIterator it(gen.matrix, k); it; ++it) {
            const long r = it.row(), c = it.col();
            if (part.is_diag[r] && part.is_diag[c])
                l_dd(part.slot[r], part.slot[c]) = it.value();
            else if (part.is_diag[r])
                l_dc(part.slot[r], part.slot[c]) = it.value();
            else if (part.is_diag[c])
                l_cd(part.slot[r], part.slot[c]) = it.value();
            else
                cc_trips.emplace_back(static_cast<int>(part.slot[r]),
                                      static_cast<int>(part.slot[c]),
                                      it.value());
        }
    SparseMatrix l_cc(nc, nc);
    l_cc.setFromTriplets(cc_trips.begin(), cc_trips.end());
    l_cc.makeCompressed();

    Eigen::SparseLU<SparseMatrix, Eigen::COLAMDOrdering<int>> lu;
    lu.analyzePattern(l_cc);
    lu.factorize(l_cc);
    if (lu.info() != Eigen::Success)
        throw SingularError(
            "reduce: coherence block is singular; damping does not reach "
            "every coherence");
    const Matrix x = lu.solve(l_cd);
    const Matrix l_eff = l_dd - l_dc * x;

    PhotonRateModel m;
    m.n_max = lay.n_max;
    m.m_max = m_max;
    m.kappa = kappa;
    m.reduced_generator = l_eff.real();
    m.max_imag = l_eff.imag().cwiseAbs().maxCoeff();
    m.column_defect = m.reduced_generator.colwise()
                          .sum()
                          .cwiseAbs()
                          .maxCoeff();

    for (int p = 0; p < 4; ++p) {
        m.alpha[p].assign(f, 0.0);
        m.overflow_out[p].assign(f, 0.0);
        m.redist_out[p].assign(f, 0.0);
        m.emission[p] = Eigen::MatrixXd::Zero(f, m_max);
        m.absorption[p] = Eigen::MatrixXd::Zero(f, m_max);
    }

    // Cavity decay acts on diagonals as -kappa n P_n + kappa (n+1) P_{n+1};
    // peel it off so it is not classified as one-photon flow.
    Eigen::MatrixXd cls = m.reduced_generator;
    for (int p = 0; p < 4; ++p)
        for (int n = 0; n < f; ++n) {
            const int col = p * f + n;
            cls(col, col) += kappa * n;
            if (n > 0) cls(p * f + n - 1, col) -= kappa * n;
        }

    for (int col = 0; col < d; ++col) {
        const int pc = col / f, n_c = col % f;
        double redist = 0.0, overflow = 0.0;
        for (int row = 0; row < d; ++row) {
            if (row == col) continue;
            const double e = cls(row, col);
            if (e == 0.0) continue;
            const int shift = row % f - n_c;
            if (shift == 0)
                redist += e;
            else if (shift >= 1 && shift <= m_max)
                m.emission[pc](n_c, shift - 1) += e;
            else if (shift <= -1 && shift >= -m_max)
                m.absorption[pc](n_c, -shift - 1) += e;
            else
                overflow += e;
        }
        m.redist_out[pc][n_c] = redist;
        m.overflow_out[pc][n_c] = overflow;
        m.alpha[pc][n_c] = -cls(col, col) - redist;
    }

    for (int p = 0; p < 4; ++p)
        for (int n = 0; n < f; ++n)
            for (int k = 0; k < m_max; ++k)
                for (Eigen::MatrixXd* arr : {&m.emission[p], &m.absorption[p]}) {
                    double& v = (*arr)(n, k);
                    if (v < -1e-10) {
                        ++m.negative_cells;
                        m.most_negative = std::min(m.most_negative, v);
                    } else if (v < 0.0) {
                        v = 0.0;
                    }
                }

    // Null vector of the full reduced generator, pinned by the trace row.
    Eigen::MatrixXd a = m.reduced_generator;
    a.row(0).setOnes();
    Eigen::VectorXd b = Eigen::VectorXd::Zero(d);
    b(0) = 1.0;
    const Eigen::PartialPivLU<Eigen::MatrixXd> plu(a);
    Eigen::VectorXd ds = plu.solve(b);
    ds += plu.solve(b - a * ds);
    m.diag_steady = ds / ds.sum();
    return m;
}

void require_nonnegative(const PhotonRateModel& m, double tolerance) {
    if (tolerance < 0.0)
        throw InvalidArgError("require_nonnegative: tolerance must be >= 0");
    const int f = m.n_max + 1;
    std::ostringstream bad;
    for (int p = 0; p < 4; ++p)
        for (int n = 0; n < f; ++n)
            for (int k = 0; k < m.m_max; ++k) {
                if (m.emission[p](n, k) < -tolerance)
                    bad << " emission(pair " << p << ", n " << n << ", k "
                        << k + 1 << "): " << m.emission[p](n, k);
                if (m.absorption[p](n, k) < -tolerance)
                    bad << " absorption(pair " << p << ", n " << n << ", k "
                        << k + 1 << "): " << m.absorption[p](n, k);
            }
    if (bad.tellp() > 0)
        throw NegativeRateError("materially negative rates:" + bad.str());
}

double balance_defect(const PhotonRateModel& m) {
    const int f = m.n_max + 1;
    double worst = 0.0;
    double scale = 0.0;
    for (int n = 0; n < f; ++n) {
        double out = 0.0, classified = 0.0;
        for (int p = 0; p < 4; ++p) {
            const double pw = m.diag_steady(p * f + n);
            out += m.alpha[p][n] * pw;
            scale += std::abs(m.alpha[p][n] * pw);
            double ch = m.overflow_out[p][n];
            for (int k = 0; k < m.m_max; ++k)
                ch += m.emission[p](n, k) + m.absorption[p](n, k);
            classified += ch * pw;
        }
        worst = std::max(worst, std::abs(out - classified));
    }
    return worst / std::max(scale, 1e-300);
}

EmissionReport excess_emission(const PhotonRateModel& m, double kappa) {
    if (kappa <= 0.0)
        throw InvalidArgError("excess_emission: kappa must be positive");
    const int f = m.n_max + 1;
    EmissionReport r;
    r.excess.assign(m.m_max, 0.0);
    double nbar = 0.0;
    for (int p = 0; p < 4; ++p)
        for (int n = 0; n < f; ++n) {
            const double pw = m.diag_steady(p * f + n);
            nbar += n * pw;
            for (int k = 1; k <= m.m_max; ++k)
                r.excess[k - 1] += k *
                                   (m.emission[p](n, k - 1) -
                                    m.absorption[p](n, k - 1)) *
                                   pw / kappa;
        }
    for (double e : r.excess) r.mean_n_rate_eq += e;
    r.mean_n_sme = nbar;
    r.discrepancy = std::abs(r.mean_n_rate_eq - r.mean_n_sme) /
                    std::max(std::abs(r.mean_n_sme), 1e-300);
    return r;
}

double dressed_resonance(double delta_p, double eta) {
    return std::sqrt(delta_p * delta_p + 4.0 * eta * eta);
}

}  // namespace qdl
