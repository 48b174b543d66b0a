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

#ifndef EDP_PAULI_HPP
#define EDP_PAULI_HPP

#include <string>
#include <vector>

#include "edp/gf.hpp"

namespace edp {

/// Phases are exponents of the primitive phase unit: i for p = 2 (order 4),
/// omega = exp(2 pi i / p) for p >= 3 (order p).
inline int phase_order(int p) { return p == 2 ? 4 : p; }

/// Phase units per power of omega (omega = -1 = i^2 when p = 2).
inline int omega_units(int p) { return p == 2 ? 2 : 1; }

inline int reduce_phase(long long e, int p) { return mod_p(e, phase_order(p)); }

/// phase * X^{a_1} Z^{b_1} (x) ... (x) X^{a_n} Z^{b_n}.
struct PauliElement {
    GFVector vec;
    int phase = 0;

    PauliElement() = default;
    explicit PauliElement(GFVector v, int ph = 0) : vec(v), phase(reduce_phase(ph, v.p())) {}

    static PauliElement identity(int p, int n) { return PauliElement(GFVector(p, n)); }

    int p() const { return vec.p(); }
    int n() const { return vec.n(); }

    bool operator==(const PauliElement &o) const = default;
};

/// Product in X-before-Z normal form. Moving Z^b past X^a contributes
/// omega^{a b} per slot (ZX = omega XZ).
inline PauliElement pauli_mul(const PauliElement &lhs, const PauliElement &rhs) {
    lhs.vec.check_same(rhs.vec);
    const int p = lhs.p();
    long long swaps = 0;
    for (int i = 0; i < lhs.n(); ++i) swaps += lhs.vec.b(i) * rhs.vec.a(i);
    PauliElement out;
    out.vec = lhs.vec + rhs.vec;
    out.phase = reduce_phase(lhs.phase + rhs.phase + omega_units(p) * mod_p(swaps, p), p);
    return out;
}

inline PauliElement pauli_inverse(const PauliElement &e) {
    const int p = e.p();
    long long ab = 0;
    for (int i = 0; i < e.n(); ++i) ab += e.vec.a(i) * e.vec.b(i);
    PauliElement out;
    out.vec = -e.vec;
    out.phase = reduce_phase(-e.phase + omega_units(p) * mod_p(ab, p), p);
    return out;
}

inline PauliElement pauli_pow(const PauliElement &e, int power) {
    int order = 4 * e.p();  // every element satisfies A^(4p) = I
    power = mod_p(power, order);
    PauliElement out = PauliElement::identity(e.p(), e.n());
    for (int i = 0; i < power; ++i) out = pauli_mul(out, e);
    return out;
}

/// A B = omega^{<a, b>} B A.
inline int commutation_phase(const PauliElement &lhs, const PauliElement &rhs) {
    return symplectic_product(lhs.vec, rhs.vec);
}

/// m(v) = #{i : a_i = b_i = 1}; mu(v) = i^{m(v)}, returned as an i-exponent.
/// (mu(v) XZ(v))^2 = I. Only meaningful for p = 2.
inline int mu(const GFVector &v) {
    if (v.p() != 2) {
        throw std::domain_error("mu: defined only for p = 2");
    }
    int m = 0;
    for (int i = 0; i < v.n(); ++i) m += v.a(i) & v.b(i);
    return m % 4;
}

/// Syndrome vectors live in Z_p^{n-k}.
using Syndrome = std::vector<int>;

inline std::uint64_t syndrome_index(const Syndrome &s, int p) {
    std::uint64_t r = 0;
    for (int v : s) r = r * p + v;
    return r;
}

inline Syndrome syndrome_from_index(std::uint64_t idx, int p, int len) {
    Syndrome s(len);
    for (int i = len - 1; i >= 0; --i) {
        s[i] = static_cast<int>(idx % p);
        idx /= p;
    }
    return s;
}

/// Stabilizer group: self-orthogonal C with fixed generators xi_1..xi_{n-k}
/// and the eigenvalue label lambda_i (phase exponent) of each generator on
/// the reference code space Q(0).
class Stabilizer {
   public:
    Stabilizer() = default;

    /// Default labels: lambda_i = 1 for p >= 3. For p = 2 the label is
    /// conj(mu(xi_i)), so that mu(xi_i) XZ(xi_i) acts as +1 on Q(0); XZ(xi_i)
    /// has eigenvalues +-i when m(xi_i) is odd and +1 is then unavailable.
    Stabilizer(int p, int n, std::vector<GFVector> generators)
        : Stabilizer(p, n, generators, default_lambda(p, generators)) {}

    Stabilizer(int p, int n, std::vector<GFVector> generators, std::vector<int> lambda)
        : p_(p), n_(n), generators_(std::move(generators)), lambda_(std::move(lambda)) {
        for (const auto &g : generators_) {
            if (g.p() != p || g.n() != n) throw std::invalid_argument("Stabilizer: generator of wrong shape");
        }
        c_ = Subspace::span(p, n, generators_);
        if (c_.dim() != static_cast<int>(generators_.size())) {
            throw std::invalid_argument("Stabilizer: generators are linearly dependent");
        }
        if (!is_self_orthogonal(c_)) {
            throw std::invalid_argument("Stabilizer: generators do not commute");
        }
        if (lambda_.size() != generators_.size()) {
            throw std::invalid_argument("Stabilizer: one eigenvalue label per generator required");
        }
        for (std::size_t i = 0; i < lambda_.size(); ++i) {
            lambda_[i] = reduce_phase(lambda_[i], p);
            if (p == 2 && (lambda_[i] - mu(generators_[i])) % 2 != 0) {
                throw std::invalid_argument("Stabilizer: label is not an eigenvalue of its generator");
            }
        }
    }

    static std::vector<int> default_lambda(int p, const std::vector<GFVector> &generators) {
        std::vector<int> out;
        for (const auto &g : generators) out.push_back(p == 2 ? reduce_phase(-mu(g), 2) : 0);
        return out;
    }

    int p() const { return p_; }
    int n() const { return n_; }
    int k() const { return n_ - static_cast<int>(generators_.size()); }
    int num_generators() const { return static_cast<int>(generators_.size()); }
    const Subspace &subspace() const { return c_; }
    const std::vector<GFVector> &generators() const { return generators_; }
    const std::vector<int> &lambda() const { return lambda_; }

   private:
    int p_ = 2;
    int n_ = 0;
    Subspace c_;
    std::vector<GFVector> generators_;
    std::vector<int> lambda_;
};

/// (<xi_1, t>, ..., <xi_{n-k}, t>). Constant on cosets of C^perp.
inline Syndrome syndrome(const GFVector &t, const Stabilizer &s) {
    Syndrome out;
    for (const auto &g : s.generators()) out.push_back(symplectic_product(g, t));
    return out;
}

namespace detail {

inline std::string slot_symbol(int p, int a, int b) {
    if (a == 0 && b == 0) return "I";
    if (p == 2) {
        return a && b ? "XZ" : (a ? "X" : "Z");
    }
    std::string s;
    if (a) s += a == 1 ? "X" : "X^" + std::to_string(a);
    if (b) s += b == 1 ? "Z" : "Z^" + std::to_string(b);
    return s;
}

}  // namespace detail

/// Renders e.g. "i XZ.Z.X.I". Phase prefix for p = 2 is one of "", "i ",
/// "-", "-i "; for p >= 3 a nonzero omega power is written "w^j ".
inline std::string to_string(const PauliElement &e) {
    std::string out;
    if (e.p() == 2) {
        static const char *prefixes[] = {"", "i ", "-", "-i "};
        out = prefixes[e.phase];
    } else if (e.phase != 0) {
        out = "w^" + std::to_string(e.phase) + " ";
    }
    for (int i = 0; i < e.n(); ++i) {
        if (i) out += '.';
        out += detail::slot_symbol(e.p(), e.vec.a(i), e.vec.b(i));
    }
    return out;
}

}  // namespace edp

#endif  // EDP_PAULI_HPP
