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

#include "generator.hpp"

#include <unsupported/Eigen/KroneckerProduct>

#include <array>
#include <cmath>
#include <utility>

#include "errors.hpp"

namespace qdl {

namespace {

SparseMatrix to_sparse(const Matrix& m) {
    SparseMatrix out(m.rows(), m.cols());
    std::vector<Eigen::Triplet<Cplx>> trips;
    for (int c = 0; c < m.cols(); ++c)
        for (int r = 0; r < m.rows(); ++r)
            if (m(r, c) != 0.0) trips.emplace_back(r, c, m(r, c));
    out.setFromTriplets(trips.begin(), trips.end());
    return out;
}

SparseMatrix sp_identity(int dim) {
    SparseMatrix id(dim, dim);
    id.setIdentity();
    return id;
}

SparseMatrix spkron(const SparseMatrix& a, const SparseMatrix& b) {
    SparseMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    out = Eigen::kroneckerProduct(a, b);
    return out;
}

// vec(op rho) = (I kron op) vec(rho)
SparseMatrix spre(const SparseMatrix& op, const SparseMatrix& id) {
    return spkron(id, op);
}

// vec(rho op) = (op^T kron I) vec(rho)
SparseMatrix spost(const SparseMatrix& op, const SparseMatrix& id) {
    return spkron(SparseMatrix(op.transpose()), id);
}

// vec(x rho y) = (y^T kron x) vec(rho)
SparseMatrix sandwich(const SparseMatrix& x, const SparseMatrix& y) {
    return spkron(SparseMatrix(y.transpose()), x);
}

SparseMatrix adjoint_sp(const SparseMatrix& m) {
    return SparseMatrix(m.adjoint());
}

// rho' -= coef (P Q rho - Q rho P) + coef* (rho Q'P' - P' rho Q')
void subtract_pair_term(SparseMatrix& gen, Cplx coef, const SparseMatrix& p,
                        const SparseMatrix& q, const SparseMatrix& id) {
    if (coef == Cplx(0.0)) return;
    const SparseMatrix pd = adjoint_sp(p);
    const SparseMatrix qd = adjoint_sp(q);
    gen -= coef * (spre(SparseMatrix(p * q), id) - sandwich(q, p));
    gen -= std::conj(coef) *
           (spost(SparseMatrix(qd * pd), id) - sandwich(pd, qd));
}

// The second-order phonon terms for one coupling sector: operators A_i that
// rotate as e^{+i d_i tau}, couplings c_i. For each ordered pair the four
// kernel combinations enter with their hermitian conjugates; the commutator
// form keeps every term exactly trace-null.
void subtract_sector(SparseMatrix& gen, const std::array<SparseMatrix, 2>& a,
                     const std::array<double, 2>& c,
                     const std::array<double, 2>& d, const PhononKernel& k,
                     const SparseMatrix& id) {
    std::array<SparseMatrix, 2> ad{adjoint_sp(a[0]), adjoint_sp(a[1])};
    auto kp = [&](double x) { return k.half_fourier(Greens::plus, x); };
    auto km = [&](double x) { return k.half_fourier(Greens::minus, x); };
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            const double cc = c[i] * c[j];
            if (cc == 0.0) continue;
            subtract_pair_term(gen, cc * kp(d[j]), ad[i], a[j], id);
            subtract_pair_term(gen, cc * kp(-d[j]), a[i], ad[j], id);
            subtract_pair_term(gen, cc * km(d[j]), a[i], a[j], id);
            subtract_pair_term(gen, cc * km(-d[j]), ad[i], ad[j], id);
        }
}

void subtract_lindblad(SparseMatrix& gen, const SparseMatrix& op, double rate,
                       const SparseMatrix& id) {
    if (rate == 0.0) return;
    const SparseMatrix od = adjoint_sp(op);
    const SparseMatrix odo(od * op);
    gen -= 0.5 * rate * (spre(odo, id) + spost(odo, id));
    gen += rate * sandwich(op, od);
}

// -i[H, rho] plus every non-phonon dissipator; shared by both generators so
// the phonons-off paths coincide exactly.
SparseMatrix bare_generator(const ModelConfig& config,
                            const HilbertLayout& lay, const Matrix& h,
                            const SparseMatrix& id) {
    const SparseMatrix hs = to_sparse(h);
    SparseMatrix gen =
        Cplx(0.0, -1.0) * (spre(hs, id) - spost(hs, id));
    const SparseMatrix a = to_sparse(annihilation(lay));
    subtract_lindblad(gen, a, config.kappa, id);
    for (int i = 0; i < 2; ++i) {
        const SparseMatrix sm =
            to_sparse(qd_sigma(lay, i + 1, Ladder::lower));
        const SparseMatrix sp = adjoint_sp(sm);
        subtract_lindblad(gen, sm, i == 0 ? config.gamma1 : config.gamma2, id);
        subtract_lindblad(gen, SparseMatrix(sp * sm),
                          i == 0 ? config.gamma1p : config.gamma2p, id);
        if (config.pump_mode == PumpMode::incoherent)
            subtract_lindblad(gen, sp, i == 0 ? config.eta1 : config.eta2, id);
    }
    return gen;
}

double franck_condon_for(const ModelConfig& config,
                         const PhononKernel& kernel) {
    return config.phonons_enabled ? kernel.franck_condon() : 1.0;
}

}  // namespace

void validate(const ModelConfig& config) {
    if (!(config.kappa > 0.0)) throw ConfigError("kappa must be positive");
    if (config.n_max < 4) throw ConfigError("n_max must be at least 4");
    if (config.gamma1 < 0.0 || config.gamma2 < 0.0 || config.gamma1p < 0.0 ||
        config.gamma2p < 0.0)
        throw ConfigError("decay rates must be non-negative");
    if (config.pump_mode == PumpMode::incoherent) {
        if (config.eta1 < 0.0 || config.eta2 < 0.0)
            throw ConfigError("incoherent pump rates must be non-negative");
        if (config.delta1p != 0.0 || config.delta2p != 0.0 ||
            config.delta_cp != 0.0)
            throw ConfigError(
                "coherent detunings must be zero in incoherent mode");
    } else {
        if (config.delta1 != 0.0 || config.delta2 != 0.0)
            throw ConfigError(
                "incoherent detunings must be zero in coherent mode");
    }
    if (!(config.bath.alpha_p >= 0.0) || !(config.bath.omega_b > 0.0) ||
        !(config.bath.temperature >= 0.0) || !(config.bath.g1_abs > 0.0))
        throw ConfigError("bath parameters out of range");
}

Matrix apply_superop(const Superoperator& op, const Matrix& rho) {
    const int d = op.layout.dim;
    Vector v(Eigen::Map<const Vector>(rho.data(), d * d));
    Vector w = op.matrix * v;
    return Matrix(Eigen::Map<const Matrix>(w.data(), d, d));
}

double max_trace_violation(const Superoperator& op) {
    const int d = op.layout.dim;
    double worst = 0.0;
    for (int col = 0; col < d * d; ++col) {
        Cplx sum = 0.0;
        for (SparseMatrix::InnerIterator it(op.matrix, col); it; ++it)
            if (it.row() % (d + 1) == 0) sum += it.value();
        worst = std::max(worst, std::abs(sum));
    }
    return worst;
}

Matrix system_hamiltonian(const ModelConfig& config,
                          const PhononKernel& kernel) {
    const HilbertLayout lay(config.n_max);
    const double b = franck_condon_for(config, kernel);
    const Matrix a = annihilation(lay);
    Matrix h = Matrix::Zero(lay.dim, lay.dim);
    for (int i = 0; i < 2; ++i) {
        const Matrix sp = qd_sigma(lay, i + 1, Ladder::raise);
        const Matrix sm = qd_sigma(lay, i + 1, Ladder::lower);
        const double g = i == 0 ? config.g1 : config.g2;
        const double detuning = config.pump_mode == PumpMode::incoherent
                                    ? (i == 0 ? config.delta1 : config.delta2)
                                    : (i == 0 ? config.delta1p : config.delta2p);
        h += detuning * sp * sm;
        h += b * g * (sp * a + a.adjoint() * sm);
        if (config.pump_mode == PumpMode::coherent) {
            const double eta = i == 0 ? config.eta1 : config.eta2;
            h += b * eta * (sp + sm);
        }
    }
    if (config.pump_mode == PumpMode::coherent)
        h += config.delta_cp * number_operator(lay);
    return h;
}

Superoperator lindblad_dissipator(const HilbertLayout& layout, const Matrix& op,
                                  double rate) {
    if (rate < 0.0) throw InvalidArgError("lindblad_dissipator: negative rate");
    const SparseMatrix id = sp_identity(layout.dim);
    SparseMatrix gen(layout.dim * layout.dim, layout.dim * layout.dim);
    subtract_lindblad(gen, to_sparse(op), rate, id);
    return {layout, std::move(gen)};
}

Superoperator cross_dissipator(const HilbertLayout& layout, const Matrix& o1,
                               const Matrix& o2, Cplx rate) {
    const SparseMatrix id = sp_identity(layout.dim);
    const SparseMatrix s1 = to_sparse(o1);
    const SparseMatrix s2 = to_sparse(o2);
    SparseMatrix gen(layout.dim * layout.dim, layout.dim * layout.dim);
    gen -= 0.5 * rate *
           (spre(SparseMatrix(s2 * s1), id) + spost(SparseMatrix(s2 * s1), id));
    gen += rate * sandwich(s1, s2);
    return {layout, std::move(gen)};
}

RateSet rates_for(const ModelConfig& config,
                  std::shared_ptr<const PhononKernel> kernel) {
    if (config.pump_mode == PumpMode::incoherent)
        return rates_incoherent(config.g1, config.g2, config.delta1,
                                config.delta2, std::move(kernel));
    return rates_coherent(config.g1, config.g2, config.eta1, config.eta2,
                          config.delta1p, config.delta2p, config.delta_cp,
                          std::move(kernel));
}

Superoperator sme_generator(const ModelConfig& config,
                            std::shared_ptr<const PhononKernel> kernel,
                            const RateSet& rates) {
    validate(config);
    if (!kernel) throw InvalidArgError("sme_generator: null kernel");
    if (rates.mode != config.pump_mode ||
        rates.g != std::array<double, 2>{config.g1, config.g2})
        throw InvalidArgError("sme_generator: rates do not match config");
    const HilbertLayout lay(config.n_max);
    const SparseMatrix id = sp_identity(lay.dim);
    SparseMatrix gen =
        bare_generator(config, lay, system_hamiltonian(config, *kernel), id);
    if (config.phonons_enabled && config.bath.alpha_p > 0.0) {
        const Matrix a = annihilation(lay);
        std::array<SparseMatrix, 2> cav{
            to_sparse(qd_sigma(lay, 1, Ladder::raise) * a),
            to_sparse(qd_sigma(lay, 2, Ladder::raise) * a)};
        subtract_sector(gen, cav, rates.g, rates.d_cav, *kernel, id);
        if (config.pump_mode == PumpMode::coherent) {
            std::array<SparseMatrix, 2> pump{
                to_sparse(qd_sigma(lay, 1, Ladder::raise)),
                to_sparse(qd_sigma(lay, 2, Ladder::raise))};
            subtract_sector(gen, pump, rates.eta, rates.d_pump, *kernel, id);
        }
    }
    return {lay, std::move(gen)};
}

Superoperator full_polaron_generator(
    const ModelConfig& config, std::shared_ptr<const PhononKernel> kernel) {
    validate(config);
    if (!kernel) throw InvalidArgError("full_polaron_generator: null kernel");
    const HilbertLayout lay(config.n_max);
    const SparseMatrix id = sp_identity(lay.dim);
    const Matrix h = system_hamiltonian(config, *kernel);
    SparseMatrix gen = bare_generator(config, lay, h, id);
    if (config.phonons_enabled && config.bath.alpha_p > 0.0) {
        const Matrix a = annihilation(lay);
        Matrix p = Matrix::Zero(lay.dim, lay.dim);
        p += config.g1 * qd_sigma(lay, 1, Ladder::raise) * a;
        p += config.g2 * qd_sigma(lay, 2, Ladder::raise) * a;
        if (config.pump_mode == PumpMode::coherent) {
            p += config.eta1 * qd_sigma(lay, 1, Ladder::raise);
            p += config.eta2 * qd_sigma(lay, 2, Ladder::raise);
        }
        const Matrix xg = p + p.adjoint().eval();
        const Matrix xu = Cplx(0.0, 1.0) * (p - p.adjoint().eval());

        Eigen::SelfAdjointEigenSolver<Matrix> es(h);
        if (es.info() != Eigen::Success)
            throw InternalError("hamiltonian eigendecomposition failed");
        const Matrix& v = es.eigenvectors();
        const Eigen::VectorXd& lam = es.eigenvalues();

        const std::array<std::pair<const Matrix*, Greens>, 2> parts{
            std::make_pair(&xg, Greens::g), std::make_pair(&xu, Greens::u)};
        for (const auto& [x, which] : parts) {
            Matrix y = v.adjoint() * (*x) * v;
            for (int a_i = 0; a_i < lay.dim; ++a_i)
                for (int b_i = 0; b_i < lay.dim; ++b_i)
                    y(a_i, b_i) *=
                        kernel->half_fourier(which, lam(a_i) - lam(b_i));
            const Matrix w = v * y * v.adjoint();
            const SparseMatrix xs = to_sparse(*x);
            const SparseMatrix ws = to_sparse(w);
            const SparseMatrix wd = adjoint_sp(ws);
            gen -= spre(SparseMatrix(xs * ws), id);
            gen += sandwich(ws, xs);
            gen += sandwich(xs, wd);
            gen -= spost(SparseMatrix(wd * xs), id);
        }
    }
    return {lay, std::move(gen)};
}

}  // namespace qdl
