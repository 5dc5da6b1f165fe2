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

#include "steady.hpp"

#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <unsupported/Eigen/MatrixFunctions>
#include <utility>

#include "errors.hpp"

namespace qdl {

namespace {

double max_abs(const SparseMatrix& m) {
    double r = 0.0;
    for (int k = 0; k < m.outerSize(); ++k)
        for (SparseMatrix::InnerIterator it(m, k); it; ++it)
            r = std::max(r, std::abs(it.value()));
    return r;
}

Vector vec_of(const Matrix& m) {
    return Eigen::Map<const Vector>(m.data(), m.size());
}

Matrix unvec(const Vector& v, int d) {
    return Eigen::Map<const Matrix>(v.data(), d, d);
}

[[noreturn]] void throw_degenerate(const SparseMatrix& generator,
                                   double residual) {
    std::ostringstream msg;
    msg << "steady state not unique: residual " << residual;
    // The null-space estimate is a failure diagnostic, so the dense SVD cost
    // is acceptable; skip it only when the system is too large to afford one.
    if (generator.rows() <= 2500) {
        Eigen::BDCSVD<Matrix> svd((Matrix(generator)));
        const auto& s = svd.singularValues();
        const double cut = 1e-10 * s(0);
        const int null_dim = static_cast<int>((s.array() < cut).count());
        msg << ", null-space dimension estimate " << null_dim;
    }
    throw SingularError(msg.str());
}

SteadyState make_state(const Superoperator& gen, Matrix rho,
                       double herm_defect) {
    SteadyState s;
    s.herm_defect = herm_defect;
    Observables o = observables(rho, gen.layout);
    s.populations = o.populations;
    s.mean_n = o.mean_n;
    s.pn = std::move(o.pn);
    s.pn_ab = std::move(o.pn_ab);
    s.residual = apply_superop(gen, rho).cwiseAbs().maxCoeff();
    Eigen::SelfAdjointEigenSolver<Matrix> es(rho, Eigen::EigenvaluesOnly);
    s.min_eig = es.eigenvalues()(0);
    s.rho = std::move(rho);
    return s;
}

Matrix hermitized(const Vector& v, int d, double* defect) {
    Matrix rho = unvec(v, d);
    *defect = (rho - rho.adjoint().eval()).cwiseAbs().maxCoeff();
    rho = 0.5 * (rho + rho.adjoint().eval());
    const double tr = rho.trace().real();
    if (tr != 0.0) rho /= tr;
    return rho;
}

// Arnoldi factorization of the Krylov space of `a` at `v0`; one
// reorthogonalization pass keeps the basis usable at large step sizes.
struct Krylov {
    Matrix v;  // n x (m+1) orthonormal columns
    Matrix h;  // (m+1) x m upper Hessenberg
    int m_eff = 0;
    double beta = 0.0;
    bool invariant = false;  // hit an invariant subspace (propagation exact)
};

Krylov arnoldi(const SparseMatrix& a, const Vector& v0, int m) {
    Krylov k;
    k.beta = v0.norm();
    k.v = Matrix::Zero(v0.size(), m + 1);
    k.h = Matrix::Zero(m + 1, m);
    if (k.beta == 0.0) {
        k.invariant = true;
        return k;
    }
    k.v.col(0) = v0 / k.beta;
    for (int j = 0; j < m; ++j) {
        Vector w = a * k.v.col(j);
        for (int pass = 0; pass < 2; ++pass)
            for (int i = 0; i <= j; ++i) {
                const Cplx c = k.v.col(i).dot(w);
                k.h(i, j) += c;
                w -= c * k.v.col(i);
            }
        const double hn = w.norm();
        k.h(j + 1, j) = hn;
        k.m_eff = j + 1;
        if (hn < 1e-12 * k.beta) {
            k.invariant = true;
            return k;
        }
        k.v.col(j + 1) = w / hn;
    }
    return k;
}

// exp(dt a) v0 within the Krylov basis, with the generalized-residual
// local error estimate beta |h_{m+1,m}| |y_m|.
std::pair<Vector, double> krylov_apply(const Krylov& k, double dt) {
    const int me = k.m_eff;
    if (me == 0) return {Vector::Zero(k.v.rows()), 0.0};
    const Matrix em = (dt * k.h.topLeftCorner(me, me)).exp();
    const Vector y = em.col(0);
    const double err =
        k.invariant ? 0.0 : k.beta * std::abs(k.h(me, me - 1)) *
                                std::abs(y(me - 1));
    Vector out = k.beta * (k.v.leftCols(me) * y);
    return {std::move(out), err};
}

}  // namespace

Observables observables(const Matrix& rho, const HilbertLayout& lay) {
    Observables o;
    const int f = lay.fock_dim();
    o.pn.assign(f, 0.0);
    for (auto& v : o.pn_ab) v.assign(f, 0.0);
    double nbar = 0.0;
    for (int i = 0; i < lay.dim; ++i) {
        const auto lab = lay.label(i);
        const double p = rho(i, i).real();
        o.pn_ab[lab.dot1 * 2 + lab.dot2][lab.n] += p;
        o.pn[lab.n] += p;
        nbar += lab.n * p;
    }
    o.mean_n = nbar;
    const CollectiveProjectors proj = collective_projectors(lay);
    o.populations.ee = (proj.ee * rho).trace().real();
    o.populations.plus = (proj.plus * rho).trace().real();
    o.populations.minus = (proj.minus * rho).trace().real();
    o.populations.gg = (proj.gg * rho).trace().real();
    return o;
}

SteadyState solve_steady(const Superoperator& gen) {
    const int d = gen.layout.dim;
    const long n = static_cast<long>(d) * d;

    // Row 0 is the vacuum-diagonal component, always structurally present;
    // replacing it with the trace constraint pins the normalization.
    std::vector<Eigen::Triplet<Cplx>> trips;
    trips.reserve(gen.matrix.nonZeros() + d);
    for (int k = 0; k < gen.matrix.outerSize(); ++k)
        for (SparseMatrix::InnerIterator it(gen.matrix, k); it; ++it)
            if (it.row() != 0)
                trips.emplace_back(it.row(), it.col(), it.value());
    for (int j = 0; j < d; ++j) trips.emplace_back(0, j * d + j, Cplx(1.0));
    SparseMatrix a(n, n);
    a.setFromTriplets(trips.begin(), trips.end());
    a.makeCompressed();

    Vector b = Vector::Zero(n);
    b(0) = 1.0;

    const double density =
        static_cast<double>(a.nonZeros()) / (static_cast<double>(n) * n);
    const double lmax = max_abs(gen.matrix);
    Vector x;
    if (density > 0.05) {
        const Matrix ad(a);
        const Eigen::PartialPivLU<Matrix> lu(ad);
        x = lu.solve(b);
        x += lu.solve(b - ad * x);
    } else {
        Eigen::SparseLU<SparseMatrix, Eigen::COLAMDOrdering<int>> lu;
        lu.analyzePattern(a);
        lu.factorize(a);
        if (lu.info() != Eigen::Success)
            throw_degenerate(gen.matrix, std::numeric_limits<double>::quiet_NaN());
        x = lu.solve(b);
        x += lu.solve(b - a * x);
    }

    double defect = 0.0;
    Matrix rho = hermitized(x, d, &defect);
    SteadyState s = make_state(gen, std::move(rho), defect);
    if (!(s.residual < 1e-9 * std::max(lmax, 1.0)))
        throw_degenerate(gen.matrix, s.residual);
    return s;
}

std::vector<SteadyState> evolve(const Superoperator& gen, const Matrix& rho0,
                                double t_final, double dt_control) {
    if (t_final < 0.0) throw InvalidArgError("evolve: negative t_final");
    const int d = gen.layout.dim;
    if (rho0.rows() != d || rho0.cols() != d)
        throw InvalidArgError("evolve: rho0 dimension mismatch");

    std::vector<SteadyState> out;
    Vector v = vec_of(rho0);
    auto snapshot = [&](const Vector& vv) {
        double defect = 0.0;
        Matrix rho = hermitized(vv, d, &defect);
        out.push_back(make_state(gen, std::move(rho), defect));
    };
    snapshot(v);
    if (t_final == 0.0) return out;

    const long n = static_cast<long>(d) * d;
    const int m = static_cast<int>(std::min<long>(40, n - 1));
    const double tol = 1e-11;
    const double dt_min = 1e-12 * std::max(t_final, 1.0);

    double t = 0.0;
    double dt = std::clamp(t_final / 1000.0, 1e-6, 1.0);
    double next_snap = dt_control > 0.0 ? dt_control : t_final;
    while (t < t_final) {
        const double bound = std::min(next_snap, t_final) - t;
        const Krylov k = arnoldi(gen.matrix, v, m);
        double step = std::min(dt, bound);
        for (;;) {
            auto [w, err] = krylov_apply(k, step);
            if (err <= tol * std::max(k.beta, 1e-300)) {
                v = std::move(w);
                t += step;
                const double grow =
                    err > 0.0 ? 0.9 * std::pow(tol * k.beta / err, 1.0 / m)
                              : 5.0;
                dt = step * std::clamp(grow, 0.2, 5.0);
                break;
            }
            step *= 0.5;
            if (step < dt_min)
                throw NoConvergenceError("evolve: step size collapsed at t=" +
                                         std::to_string(t));
        }
        if (t >= next_snap - 1e-12 * t_final) {
            snapshot(v);
            next_snap =
                dt_control > 0.0 ? next_snap + dt_control : t_final;
            if (t >= t_final) break;
        }
    }
    return out;
}

ConvergedSolve converge_n_max(const ModelConfig& config,
                              std::shared_ptr<const PhononKernel> kernel,
                              double tolerance, GeneratorKind kind,
                              int n_max_cap) {
    if (tolerance <= 0.0)
        throw InvalidArgError("converge_n_max: tolerance must be positive");
    ModelConfig c = config;
    auto solve_at = [&](int nm) {
        c.n_max = nm;
        Superoperator g = kind == GeneratorKind::sme
                              ? sme_generator(c, kernel, rates_for(c, kernel))
                              : full_polaron_generator(c, kernel);
        return solve_steady(g);
    };
    SteadyState prev = solve_at(config.n_max);
    std::ostringstream trend;
    trend << config.n_max << ":" << prev.mean_n;
    for (int nm = config.n_max + 4; nm <= n_max_cap; nm += 4) {
        SteadyState cur = solve_at(nm);
        trend << " " << nm << ":" << cur.mean_n;
        const double rel = std::abs(cur.mean_n - prev.mean_n) /
                           std::max(std::abs(cur.mean_n), 1e-12);
        const double dpop = std::max(
            {std::abs(cur.populations.ee - prev.populations.ee),
             std::abs(cur.populations.plus - prev.populations.plus),
             std::abs(cur.populations.minus - prev.populations.minus),
             std::abs(cur.populations.gg - prev.populations.gg)});
        if (rel < tolerance && dpop < tolerance)
            return {nm, std::move(cur)};
        prev = std::move(cur);
    }
    throw NoConvergenceError("converge_n_max: cap " +
                             std::to_string(n_max_cap) +
                             " reached; mean_n trend " + trend.str());
}

}  // namespace qdl
