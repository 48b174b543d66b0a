// Copyright 2026 The edp-search Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Dense state-vector model of the protocol for small n. A state of 2n qudits
// shared by Alice and Bob is stored as the p^n x p^n matrix Psi with
// |Psi> = sum_ij Psi(i, j) |i>_A |j>_B, so (A (x) B)|Psi> <-> A Psi B^T.

#ifndef EDP_STATEVEC_HPP
#define EDP_STATEVEC_HPP

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "edp/encoder.hpp"
#include "edp/sim.hpp"

namespace edp {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

inline constexpr double kDenseTolerance = 1e-9;
inline constexpr std::uint64_t kMaxDenseDim = 256;

/// exp(2 pi i e / phase_order(p)).
inline Complex phase_value(long long e, int p) {
    const int order = phase_order(p);
    return std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(mod_p(e, order)) / order);
}

/// Sparse form of a phased Pauli element: column j has its single nonzero
/// entry value[j] in row target[j].
struct Monomial {
    std::vector<Eigen::Index> target;
    std::vector<Complex> value;
};

/// X^a Z^b |j> = omega^{b j} |j + a> per qudit, qudit 0 most significant.
inline Monomial xz_monomial(const PauliElement &e) {
    const int p = e.p(), n = e.n();
    if (ipow(p, n) > kMaxDenseDim) throw std::length_error("xz_matrix: dimension exceeds the dense limit");
    const std::uint64_t d = ipow(p, n);
    const Complex ph = phase_value(e.phase, p);
    Monomial m;
    for (std::uint64_t col = 0; col < d; ++col) {
        const std::vector<int> digits = syndrome_from_index(col, p, n);
        long long expo = 0;
        std::uint64_t row = 0;
        for (int i = 0; i < n; ++i) {
            expo += static_cast<long long>(e.vec.b(i)) * digits[i];
            row = row * p + static_cast<std::uint64_t>((digits[i] + e.vec.a(i)) % p);
        }
        m.target.push_back(static_cast<Eigen::Index>(row));
        m.value.push_back(ph * phase_value(omega_units(p) * expo, p));
    }
    return m;
}

inline CMatrix xz_matrix(const PauliElement &e) {
    const Monomial mono = xz_monomial(e);
    const auto d = static_cast<Eigen::Index>(mono.target.size());
    CMatrix m = CMatrix::Zero(d, d);
    for (Eigen::Index col = 0; col < d; ++col) m(mono.target[col], col) = mono.value[col];
    return m;
}

inline CMatrix xz_matrix(const GFVector &v) { return xz_matrix(PauliElement(v)); }

/// (1/p) sum_j A^j for a Pauli element A with A^p = I: the projector onto
/// its +1 eigenspace.
inline CMatrix averaging_projector(const PauliElement &e) {
    const int p = e.p();
    if (!(pauli_pow(e, p) == PauliElement::identity(p, e.n()))) {
        throw std::invalid_argument("averaging_projector: element does not satisfy A^p = I");
    }
    const CMatrix a = xz_matrix(e);
    CMatrix power = CMatrix::Identity(a.rows(), a.cols());
    CMatrix sum = CMatrix::Zero(a.rows(), a.cols());
    for (int j = 0; j < p; ++j) {
        sum += power;
        power = a * power;
    }
    return sum / static_cast<double>(p);
}

/// Projector onto the eigenspace of XZ(v) with eigenvalue phase_value(eig).
inline CMatrix eigenprojector(const GFVector &v, int eig) { return averaging_projector(PauliElement(v, -eig)); }

/// X-tilde(f_i) = theta_x mu(eta_i) XZ(eta_i) for p = 2, theta_x XZ(eta_i) otherwise.
inline PauliElement encoded_x(const EncoderParams &params, int i) {
    const GFVector &eta = params.ext.eta.at(i);
    return PauliElement(eta, params.theta_x.at(i) + (params.p == 2 ? mu(eta) : 0));
}

/// Z-tilde(f_i) = theta_z mu(xi_i) XZ(xi_i) for p = 2, theta_z XZ(xi_i) otherwise.
inline PauliElement encoded_z(const EncoderParams &params, const std::vector<int> &theta_z, int i) {
    const GFVector &xi = params.ext.xi.at(i);
    return PauliElement(xi, theta_z.at(i) + (params.p == 2 ? mu(xi) : 0));
}

/// Phase exponents making Z-tilde(f_i) a +1-stabilizer of Q_min(0).
/// For i <= n-k they follow from lambda; for i > n-k an unset entry takes the
/// first of the p candidates theta = omega^j whose averaging projector keeps
/// the running product of projectors nonzero.
struct ResolvedPhases {
    std::vector<int> theta_z;
    CMatrix projector;
};

inline ResolvedPhases resolve_theta_z(const EncoderParams &params) {
    const int p = params.p, n = params.n(), low = n - params.k;
    if (static_cast<int>(params.lambda.size()) != low || static_cast<int>(params.theta_z_high.size()) != params.k) {
        throw std::invalid_argument("resolve_theta_z: parameter sizes do not match n and k");
    }
    ResolvedPhases out;
    out.theta_z.assign(n, 0);
    const auto d = static_cast<Eigen::Index>(ipow(p, n));
    out.projector = CMatrix::Identity(d, d);
    for (int i = 0; i < n; ++i) {
        std::vector<int> candidates;
        if (i < low) {
            candidates.push_back(-params.lambda[i] - (p == 2 ? mu(params.ext.xi[i]) : 0));
        } else if (params.theta_z_high[i - low]) {
            candidates.push_back(*params.theta_z_high[i - low]);
        } else {
            for (int j = 0; j < p; ++j) candidates.push_back(j * omega_units(p));
        }
        bool found = false;
        for (int theta : candidates) {
            out.theta_z[i] = reduce_phase(theta, p);
            CMatrix next = averaging_projector(encoded_z(params, out.theta_z, i)) * out.projector;
            if (next.norm() > kDenseTolerance) {
                out.projector = std::move(next);
                found = true;
                break;
            }
        }
        if (!found) throw std::invalid_argument("resolve_theta_z: stabilizer phases admit no common eigenvector");
    }
    return out;
}

/// U_e: |u> -> X-tilde(u) |Q_min(0)>, X-tilde(u) = prod_i X-tilde(f_i)^{u_i}.
/// Register digit i (qudit 0 most significant) is u_i; the first n-k digits
/// are the ancilla syndrome register.
struct DenseEncoder {
    EncoderParams params;
    std::vector<int> theta_z;
    std::vector<PauliElement> x_ops;
    std::vector<PauliElement> z_ops;
    CVector psi0;
    CMatrix u;

    int p() const { return params.p; }
    int n() const { return params.n(); }
    int k() const { return params.k; }
};

/// Normalizes and fixes the global phase so the first nonzero amplitude is
/// real and positive.
inline CVector canonical_phase(CVector v) {
    v.normalize();
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (std::abs(v(i)) > kDenseTolerance) {
            v *= std::conj(v(i)) / std::abs(v(i));
            break;
        }
    }
    return v;
}

/// |psi(0)>: the common +1 eigenvector of all Z-tilde(f_i), obtained by
/// applying the projector product to |0...0> (or the next basis state that
/// survives).
inline CVector psi_zero(const ResolvedPhases &phases) {
    for (Eigen::Index seed = 0; seed < phases.projector.cols(); ++seed) {
        CVector v = phases.projector.col(seed);
        if (v.norm() > kDenseTolerance) return canonical_phase(v);
    }
    throw std::invalid_argument("psi_zero: projector product vanishes");
}

inline CVector psi_zero(const EncoderParams &params) { return psi_zero(resolve_theta_z(params)); }

inline DenseEncoder build_encoder(const EncoderParams &params) {
    const int p = params.p, n = params.n();
    if (!params.ext.is_valid()) throw std::invalid_argument("build_encoder: extension is not a hyperbolic basis");
    if (static_cast<int>(params.theta_x.size()) != n) throw std::invalid_argument("build_encoder: need n theta_x");
    for (int t : params.theta_x) {
        if (mod_p(t, omega_units(p)) != 0) throw std::invalid_argument("build_encoder: theta_x must be a power of omega");
    }
    DenseEncoder enc;
    enc.params = params;
    ResolvedPhases phases = resolve_theta_z(params);
    enc.theta_z = phases.theta_z;
    for (int i = 0; i < n; ++i) {
        enc.x_ops.push_back(encoded_x(params, i));
        enc.z_ops.push_back(encoded_z(params, enc.theta_z, i));
    }
    enc.psi0 = psi_zero(phases);
    const auto d = static_cast<Eigen::Index>(ipow(p, n));
    std::vector<CMatrix> x_mats;
    for (const auto &x : enc.x_ops) x_mats.push_back(xz_matrix(x));
    enc.u = CMatrix::Zero(d, d);
    for (Eigen::Index col = 0; col < d; ++col) {
        const std::vector<int> digits = syndrome_from_index(static_cast<std::uint64_t>(col), p, n);
        CVector v = enc.psi0;
        for (int i = n - 1; i >= 0; --i) {
            for (int r = 0; r < digits[i]; ++r) v = x_mats[i] * v;
        }
        enc.u.col(col) = v;
    }
    return enc;
}

/// Single-qudit X or Z acting on register digit i.
inline CMatrix register_x(int p, int n, int i) { return xz_matrix(GFVector::unit(p, n, i)); }
inline CMatrix register_z(int p, int n, int i) { return xz_matrix(GFVector::unit(p, n, n + i)); }

inline bool is_unitary(const CMatrix &m, double tol = kDenseTolerance) {
    return (m.adjoint() * m - CMatrix::Identity(m.cols(), m.cols())).norm() <= tol;
}

/// Coefficients c_v = tr(XZ(v)^dagger M) / p^n with M = sum_v c_v XZ(v).
inline std::vector<Complex> pauli_decompose(const CMatrix &m, int p, int n) {
    const std::uint64_t total = ipow(p, 2 * n);
    std::vector<Complex> out(total);
    const double d = static_cast<double>(m.rows());
    for (std::uint64_t idx = 0; idx < total; ++idx) {
        out[idx] = (xz_matrix(GFVector::from_index(p, n, idx)).adjoint() * m).trace() / d;
    }
    return out;
}

/// M as a single phased Pauli element, if it is one.
inline std::optional<PauliElement> as_pauli(const CMatrix &m, int p, int n, double tol = kDenseTolerance) {
    const auto coeffs = pauli_decompose(m, p, n);
    std::optional<PauliElement> found;
    for (std::uint64_t idx = 0; idx < coeffs.size(); ++idx) {
        if (std::abs(coeffs[idx]) <= tol) continue;
        if (found) return std::nullopt;
        const double turns = std::arg(coeffs[idx]) / (2.0 * std::numbers::pi) * phase_order(p);
        const long long e = std::llround(turns);
        if (std::abs(std::abs(coeffs[idx]) - 1.0) > tol || std::abs(turns - static_cast<double>(e)) > 1e-6) {
            return std::nullopt;
        }
        found = PauliElement(GFVector::from_index(p, n, idx), static_cast<int>(e));
    }
    return found;
}

/// U conjugates every register X and Z onto a single phased Pauli element.
inline bool is_clifford(const CMatrix &u, int p, int n) {
    for (int i = 0; i < n; ++i) {
        if (!as_pauli(u * register_x(p, n, i) * u.adjoint(), p, n)) return false;
        if (!as_pauli(u * register_z(p, n, i) * u.adjoint(), p, n)) return false;
    }
    return true;
}

/// U X(e_i) U^dagger = X-tilde(f_i) and U Z(e_i) U^dagger = Z-tilde(f_i).
inline bool satisfies_conjugation_law(const DenseEncoder &enc, double tol = kDenseTolerance) {
    const int p = enc.p(), n = enc.n();
    for (int i = 0; i < n; ++i) {
        if ((enc.u * register_x(p, n, i) * enc.u.adjoint() - xz_matrix(enc.x_ops[i])).norm() > tol) return false;
        if ((enc.u * register_z(p, n, i) * enc.u.adjoint() - xz_matrix(enc.z_ops[i])).norm() > tol) return false;
    }
    return true;
}

/// Matrix form of |beta^m(v)> = (I (x) XZ(v)) (1/sqrt(p^m)) sum_i |i>|i>.
inline CMatrix bell_matrix(const GFVector &v) {
    CMatrix m = xz_matrix(v).transpose();
    return m / std::sqrt(static_cast<double>(m.rows()));
}

/// |<A|B>| for two-party states in matrix form, after normalizing both.
inline double state_overlap(const CMatrix &a, const CMatrix &b) {
    const double na = a.norm(), nb = b.norm();
    if (na <= kDenseTolerance || nb <= kDenseTolerance) return 0.0;
    return std::abs((a.adjoint() * b).trace()) / (na * nb);
}

/// Alice's projector onto Q*(a): eigenvalue conj(lambda_i) omega^{-a_i} of XZ(xi_i*).
inline CMatrix alice_projector(const Stabilizer &s, const std::vector<int> &outcome) {
    const int p = s.p(), n = s.n();
    const auto d = static_cast<Eigen::Index>(ipow(p, n));
    CMatrix proj = CMatrix::Identity(d, d);
    for (int i = 0; i < s.num_generators(); ++i) {
        const GFVector &xi = s.generators()[i];
        GFVector conj_xi = xi;
        for (int j = 0; j < n; ++j) conj_xi.set(n + j, -xi.b(j));
        proj = eigenprojector(conj_xi, -s.lambda()[i] - omega_units(p) * outcome[i]) * proj;
    }
    return proj;
}

/// Bob's projector onto Q(b): eigenvalue lambda_i omega^{b_i} of XZ(xi_i).
inline CMatrix bob_projector(const Stabilizer &s, const std::vector<int> &outcome) {
    const int p = s.p(), n = s.n();
    const auto d = static_cast<Eigen::Index>(ipow(p, n));
    CMatrix proj = CMatrix::Identity(d, d);
    for (int i = 0; i < s.num_generators(); ++i) {
        proj = eigenprojector(s.generators()[i], s.lambda()[i] + omega_units(p) * outcome[i]) * proj;
    }
    return proj;
}

/// Overlap of (I (x) XZ(l G + m H)) |phi(e)> with (conj(U) (x) U) |beta^k(l, m), e>,
/// where |phi(e)> = p^{-k/2} sum_{u in e x Z_p^k} conj(X-tilde(u) psi0) (x) X-tilde(u) psi0.
inline double encoded_bell_overlap(const DenseEncoder &enc, const std::vector<int> &e, const GFVector &w) {
    const int p = enc.p(), n = enc.n(), k = enc.k(), low = n - k;
    const auto dk = static_cast<Eigen::Index>(ipow(p, k));
    const auto d = static_cast<Eigen::Index>(ipow(p, n));
    Eigen::Index offset = 0;
    for (int i = 0; i < low; ++i) offset = offset * p + e.at(i);
    offset *= dk;
    CMatrix input = CMatrix::Zero(d, d);
    input.block(offset, offset, dk, dk) = bell_matrix(w);
    const CMatrix lhs = enc.u.conjugate() * input * enc.u.transpose();

    CMatrix phi = CMatrix::Zero(d, d);
    for (Eigen::Index x = 0; x < dk; ++x) {
        const CVector col = enc.u.col(offset + x);
        phi += col.conjugate() * col.transpose();
    }
    phi /= std::sqrt(static_cast<double>(dk));
    GFVector shift(p, n);
    for (int i = 0; i < k; ++i) {
        shift += enc.params.ext.eta[low + i].scaled(w.a(i));
        shift += enc.params.ext.xi[low + i].scaled(w.b(i));
    }
    const CMatrix rhs = phi * xz_matrix(shift).transpose();
    return state_overlap(lhs, rhs);
}

/// Overlap of (P_A(a) (x) I)|beta^n(u)> with (I (x) XZ(u)) sum_x conj(v_x) (x) v_x,
/// where v_x = U|a, x> runs over an orthonormal basis of Q(a).
inline double post_measurement_overlap(const DenseEncoder &enc, const Stabilizer &s, const GFVector &u,
                                       const std::vector<int> &a) {
    const int p = enc.p(), n = enc.n(), k = enc.k();
    const auto dk = static_cast<Eigen::Index>(ipow(p, k));
    const auto d = static_cast<Eigen::Index>(ipow(p, n));
    const CMatrix lhs = alice_projector(s, a) * bell_matrix(u);
    Eigen::Index offset = 0;
    for (int i = 0; i < n - k; ++i) offset = offset * p + a.at(i);
    offset *= dk;
    CMatrix sum = CMatrix::Zero(d, d);
    for (Eigen::Index x = 0; x < dk; ++x) {
        const CVector col = enc.u.col(offset + x);
        sum += col.conjugate() * col.transpose();
    }
    return state_overlap(lhs, sum * xz_matrix(u).transpose());
}

/// Orthonormal basis of the range of a Hermitian projector.
inline CMatrix projector_range(const CMatrix &proj) {
    Eigen::SelfAdjointEigenSolver<CMatrix> es(proj);
    std::vector<Eigen::Index> keep;
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
        if (es.eigenvalues()(i) > 0.5) keep.push_back(i);
    }
    CMatrix out(proj.rows(), static_cast<Eigen::Index>(keep.size()));
    for (std::size_t i = 0; i < keep.size(); ++i) out.col(static_cast<Eigen::Index>(i)) = es.eigenvectors().col(keep[i]);
    return out;
}

/// Dense run of the protocol: per-branch results and the largest Bell-basis
/// off-diagonal element of any normalized branch output.
struct DenseRun {
    std::vector<BranchResult> branches;
    double max_coherence = 0;
};

/// Literal simulation: Bell input, both syndrome measurements, Bob's
/// correction XZ(-t'(s)), the decoders U^T (Alice) and U^dagger (Bob), and
/// the partial trace over the n-k ancilla qudits on each side.
inline DenseRun run_protocol_dense(const BellDiagonal &p_in, const ProtocolSpec &spec, const DenseEncoder &enc) {
    const int p = spec.p(), n = spec.n(), k = spec.k(), low = n - k;
    if (enc.n() != n || enc.k() != k || p_in.p != p || p_in.m != n) {
        throw std::invalid_argument("run_protocol_dense: shapes do not match");
    }
    for (int i = 0; i < low; ++i) {
        if (!(enc.params.ext.xi[i] == spec.stabilizer.generators()[i]) ||
            enc.params.lambda[i] != spec.stabilizer.lambda()[i]) {
            throw std::invalid_argument("run_protocol_dense: encoder built for another stabilizer");
        }
    }
    const FRule frule = spec.frule ? *spec.frule : most_likely_frule(spec.stabilizer, p_in);
    const auto dk = static_cast<Eigen::Index>(ipow(p, k));
    const std::uint64_t nlabels = ipow(p, 2 * k), nout = ipow(p, low);

    // Bell amplitude <beta^k(w)|B> = p^{-k/2} sum_j conj(value_j) B(j, target_j).
    std::vector<Monomial> bell_labels;
    for (std::uint64_t w = 0; w < nlabels; ++w) bell_labels.push_back(xz_monomial(PauliElement(GFVector::from_index(p, k, w))));
    const double bell_norm = 1.0 / std::sqrt(static_cast<double>(dk));
    const double input_norm = 1.0 / std::sqrt(static_cast<double>(ipow(p, n)));
    const auto labels = static_cast<Eigen::Index>(nlabels);
    // Each measurement projector factors through its range: P = V V^dagger.
    // Alice's decoded operator U^T P_A is alice_left * alice_right.
    std::vector<std::vector<int>> outcomes;
    std::vector<CMatrix> alice_left, alice_right;
    for (std::uint64_t a = 0; a < nout; ++a) {
        Syndrome digits = syndrome_from_index(a, p, low);
        outcomes.push_back(digits);
        const CMatrix v = projector_range(alice_projector(spec.stabilizer, digits));
        alice_left.push_back(enc.u.transpose() * v);
        alice_right.push_back(v.adjoint());
    }
    std::vector<Monomial> inputs;
    for (std::uint64_t t = 0; t < p_in.size(); ++t) {
        inputs.push_back(p_in.probs[t] == 0.0 ? Monomial{} : xz_monomial(PauliElement(GFVector::from_index(p, n, t))));
    }
    auto block_active = [&](const CMatrix &m, std::uint64_t e, bool rows) {
        const auto off = static_cast<Eigen::Index>(e) * dk;
        const double norm = rows ? m.middleRows(off, dk).squaredNorm() : m.middleCols(off, dk).squaredNorm();
        return norm > 1e-24;
    };

    DenseRun run;
    for (const auto &s : spec.accept) {
        const GFVector &correction = frule.rep(s, p);
        const CMatrix m = xz_matrix(-correction);
        CMatrix rho = CMatrix::Zero(labels, labels);
        for (std::uint64_t a = 0; a < nout; ++a) {
            std::vector<int> b(low);
            for (int i = 0; i < low; ++i) b[i] = mod_p(outcomes[a][i] + s[i], p);
            // Bob's operator (U^dagger M P_B)^T = conj(W) (W^T M^T conj(U)).
            const CMatrix w = projector_range(bob_projector(spec.stabilizer, b));
            const CMatrix bob_left = w.conjugate();
            const CMatrix bob_right = w.transpose() * m.transpose() * enc.u.conjugate();
            const CMatrix &al = alice_left[a], &ar = alice_right[a];
            const Eigen::Index ra = ar.rows(), rb = bob_left.cols();
            // Bell amplitude of block (ea, eb) of al K bob_right, linear in vec(K).
            std::vector<CMatrix> amp_maps;
            for (std::uint64_t ea = 0; ea < nout; ++ea) {
                if (!block_active(al, ea, true)) continue;
                for (std::uint64_t eb = 0; eb < nout; ++eb) {
                    if (!block_active(bob_right, eb, false)) continue;
                    CMatrix g = CMatrix::Zero(labels, ra * rb);
                    const auto ro = static_cast<Eigen::Index>(ea) * dk, co = static_cast<Eigen::Index>(eb) * dk;
                    for (Eigen::Index lw = 0; lw < labels; ++lw) {
                        const Monomial &lab = bell_labels[static_cast<std::size_t>(lw)];
                        for (Eigen::Index y = 0; y < rb; ++y) {
                            for (Eigen::Index x = 0; x < ra; ++x) {
                                Complex sum = 0;
                                for (Eigen::Index j = 0; j < dk; ++j) {
                                    sum += std::conj(lab.value[j]) * al(ro + j, x) * bob_right(y, co + lab.target[j]);
                                }
                                g(lw, x + ra * y) = sum * bell_norm;
                            }
                        }
                    }
                    amp_maps.push_back(std::move(g));
                }
            }
            if (amp_maps.empty()) continue;
            // Column t of cores holds sqrt(P_in(t)) vec(K_t); rho sums G K K^dagger G^dagger.
            std::vector<std::uint64_t> support;
            for (std::uint64_t t = 0; t < p_in.size(); ++t) {
                if (p_in.probs[t] != 0.0) support.push_back(t);
            }
            CMatrix cores(ra * rb, static_cast<Eigen::Index>(support.size()));
            CMatrix shuffled(ra, ar.cols());
            CMatrix core(ra, rb);
            for (std::size_t col = 0; col < support.size(); ++col) {
                const std::uint64_t t = support[col];
                const Monomial &bell = inputs[t];
                // A Psi with Psi = XZ(t)^T / sqrt(p^n): column target_j of A Psi is
                // column j of A times value_j.
                const double scale = std::sqrt(p_in.probs[t]) * input_norm;
                for (Eigen::Index j = 0; j < ar.cols(); ++j) {
                    shuffled.col(bell.target[j]) = ar.col(j) * (bell.value[j] * scale);
                }
                core.noalias() = shuffled * bob_left;
                cores.col(static_cast<Eigen::Index>(col)) = Eigen::Map<const CVector>(core.data(), ra * rb);
            }
            const CMatrix gram = cores * cores.adjoint();
            for (const auto &g : amp_maps) rho.noalias() += g * gram * g.adjoint();
        }
        BranchResult br;
        br.syndrome = s;
        br.p_out = BellDiagonal(p, k);
        br.accept_prob = rho.trace().real();
        if (br.accept_prob > kDenseTolerance) {
            br.defined = true;
            for (std::uint64_t w = 0; w < nlabels; ++w) {
                br.p_out.probs[w] = rho(static_cast<Eigen::Index>(w), static_cast<Eigen::Index>(w)).real() / br.accept_prob;
                for (std::uint64_t w2 = 0; w2 < nlabels; ++w2) {
                    if (w2 == w) continue;
                    run.max_coherence = std::max(
                        run.max_coherence,
                        std::abs(rho(static_cast<Eigen::Index>(w), static_cast<Eigen::Index>(w2))) / br.accept_prob);
                }
            }
        }
        run.branches.push_back(std::move(br));
    }
    return run;
}

}  // namespace edp

#endif  // EDP_STATEVEC_HPP
