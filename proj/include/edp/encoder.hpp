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

#ifndef EDP_ENCODER_HPP
#define EDP_ENCODER_HPP

#include <optional>
#include <stdexcept>
#include <vector>

#include "edp/bell.hpp"
#include "edp/gf.hpp"
#include "edp/pauli.hpp"

namespace edp {

/// Equivalence class of Clifford encoders for a fixed stabilizer, indexed by
/// a hyperbolic basis of C^perp / C. Row i of H is the canonical
/// representative of xi_{n-k+i} + C, row i of G that of eta_{n-k+i} + C.
struct EncodingClass {
    Subspace c;
    std::vector<GFVector> g;
    std::vector<GFVector> h;

    int k() const { return static_cast<int>(g.size()); }
    bool operator==(const EncodingClass &o) const = default;
};

/// Canonicalizes xi_{n-k+1..n} and eta_{n-k+1..n} of `ext` modulo C.
inline EncodingClass build_class(const HyperbolicExtension &ext, const Subspace &c) {
    const int n = c.n();
    const int m = c.dim();
    if (ext.n() != n || static_cast<int>(ext.eta.size()) != n) {
        throw std::invalid_argument("build_class: extension size does not match the stabilizer");
    }
    if (!ext.is_valid()) {
        throw std::invalid_argument("build_class: extension is not a hyperbolic basis");
    }
    std::vector<GFVector> low(ext.xi.begin(), ext.xi.begin() + m);
    if (!(Subspace::span(c.p(), n, low) == c)) {
        throw std::invalid_argument("build_class: xi_1..xi_{n-k} do not span C");
    }
    EncodingClass cls;
    cls.c = c;
    for (int i = m; i < n; ++i) {
        cls.h.push_back(c.reduce(ext.xi[i]));
        cls.g.push_back(c.reduce(ext.eta[i]));
    }
    return cls;
}

/// Builds a class from representatives given directly (e.g. parsed from a
/// file), validating that their cosets form a hyperbolic basis of C^perp/C.
inline EncodingClass make_class(const Subspace &c, const std::vector<GFVector> &xi_high,
                                const std::vector<GFVector> &eta_high) {
    if (xi_high.size() != eta_high.size() || static_cast<int>(xi_high.size()) != c.n() - c.dim()) {
        throw std::invalid_argument("make_class: expected k xi and k eta representatives");
    }
    QuotientSpace q = QuotientSpace::of(c);
    EncodingClass cls;
    cls.c = c;
    for (std::size_t i = 0; i < xi_high.size(); ++i) {
        if (!q.cperp().contains(xi_high[i]) || !q.cperp().contains(eta_high[i])) {
            throw std::invalid_argument("make_class: representative outside C^perp");
        }
        cls.h.push_back(c.reduce(xi_high[i]));
        cls.g.push_back(c.reduce(eta_high[i]));
    }
    for (std::size_t i = 0; i < cls.h.size(); ++i) {
        for (std::size_t j = 0; j < cls.h.size(); ++j) {
            if (symplectic_product(cls.h[i], cls.g[j]) != (i == j ? 1 : 0) ||
                symplectic_product(cls.h[i], cls.h[j]) != 0 || symplectic_product(cls.g[i], cls.g[j]) != 0) {
                throw std::invalid_argument("make_class: cosets do not form a hyperbolic basis of C^perp/C");
            }
        }
    }
    return cls;
}

inline bool class_equal(const EncodingClass &a, const EncodingClass &b) {
    if (!(a.c == b.c)) throw std::invalid_argument("class_equal: classes belong to different stabilizers");
    return a.g == b.g && a.h == b.h;
}

/// Linear extension of g to all of Z_p^{2n}:
/// w = (<h_1, u>, ..., <h_k, u> | <u, g_1>, ..., <u, g_k>).
/// On C^perp this is the unique (l | m) with u = l G + m H + v, v in C.
inline GFVector g_linear(const GFVector &u, const EncodingClass &cls) {
    const int k = cls.k();
    GFVector w(u.p(), k);
    for (int j = 0; j < k; ++j) {
        w.set(j, symplectic_product(cls.h[j], u));
        w.set(k + j, symplectic_product(u, cls.g[j]));
    }
    return w;
}

/// g: C^perp -> Z_p^{2k}; u = l G + m H + v (v in C) maps to (l | m).
inline GFVector g_map(const GFVector &u, const EncodingClass &cls) {
    for (const auto &row : cls.c.basis()) {
        if (symplectic_product(row, u) != 0) throw std::invalid_argument("g_map: vector not in C^perp");
    }
    return g_linear(u, cls);
}

/// Error-correction rule: a chosen representative t'(s) in D(s) for every
/// syndrome s, indexed by syndrome_index(s).
struct FRule {
    std::vector<GFVector> reps;

    const GFVector &rep(const Syndrome &s, int p) const { return reps.at(syndrome_index(s, p)); }

    /// t'(s) = lexicographically smallest element of D(s); t'(0) = 0.
    static FRule lexicographic(const Stabilizer &s) {
        const int p = s.p(), n = s.n();
        const std::uint64_t nsyn = ipow(p, s.num_generators());
        FRule f;
        f.reps.assign(nsyn, GFVector(p, n));
        std::vector<bool> seen(nsyn, false);
        std::uint64_t found = 0;
        const std::uint64_t total = ipow(p, 2 * n);
        for (std::uint64_t idx = 0; idx < total && found < nsyn; ++idx) {
            GFVector t = GFVector::from_index(p, n, idx);
            std::uint64_t si = syndrome_index(syndrome(t, s), p);
            if (!seen[si]) {
                seen[si] = true;
                f.reps[si] = t;
                ++found;
            }
        }
        return f;
    }
};

/// f(t) = t - t'(syndrome(t)); always lies in C^perp.
inline GFVector f_map(const GFVector &t, const Stabilizer &s, const FRule &f) {
    return t - f.rep(syndrome(t, s), s.p());
}

/// t'(s) = argmax of P_in over D(s); ties go to the lexicographically
/// smallest vector.
inline FRule most_likely_frule(const Stabilizer &s, const BellDiagonal &p_in) {
    const int p = s.p(), n = s.n();
    if (p_in.p != p || p_in.m != n) throw std::invalid_argument("most_likely_frule: input has wrong shape");
    const std::uint64_t nsyn = ipow(p, s.num_generators());
    FRule f;
    f.reps.assign(nsyn, GFVector(p, n));
    std::vector<double> best(nsyn, -1.0);
    for (std::uint64_t idx = 0; idx < p_in.size(); ++idx) {
        GFVector t = GFVector::from_index(p, n, idx);
        std::uint64_t si = syndrome_index(syndrome(t, s), p);
        if (p_in.probs[idx] > best[si]) {
            best[si] = p_in.probs[idx];
            f.reps[si] = t;
        }
    }
    return f;
}

/// Everything that determines the protocol on Bell-diagonal inputs.
/// `accept` lists the syndrome differences b - a that do not abort. When
/// `frule` is empty the most likely error of each branch is derived from the
/// input distribution.
struct ProtocolSpec {
    Stabilizer stabilizer;
    EncodingClass cls;
    std::vector<Syndrome> accept;
    std::optional<FRule> frule;

    int p() const { return stabilizer.p(); }
    int n() const { return stabilizer.n(); }
    int k() const { return stabilizer.k(); }

    static std::vector<Syndrome> zero_only(int num_generators) { return {Syndrome(num_generators, 0)}; }
};

inline ProtocolSpec make_spec(const Stabilizer &s, const EncodingClass &cls,
                              std::optional<std::vector<Syndrome>> accept = std::nullopt) {
    if (!(cls.c == s.subspace())) throw std::invalid_argument("make_spec: class belongs to another stabilizer");
    ProtocolSpec spec{s, cls, accept.value_or(ProtocolSpec::zero_only(s.num_generators())), std::nullopt};
    for (const auto &syn : spec.accept) {
        if (static_cast<int>(syn.size()) != s.num_generators()) {
            throw std::invalid_argument("make_spec: acceptance syndrome of wrong length");
        }
    }
    return spec;
}

/// Class obtained by completing the stabilizer generators with the
/// deterministic hyperbolic completion.
inline EncodingClass default_class(const Stabilizer &s) {
    return build_class(complete_hyperbolic(s.p(), s.n(), s.generators()), s.subspace());
}

/// Encoder parameters realizing one member of an encoding class.
/// Phases are exponents as in PauliElement. theta_z for i <= n-k is fixed
/// by lambda; entries of theta_z_high left empty are solved for.
struct EncoderParams {
    int p = 2;
    int k = 0;
    HyperbolicExtension ext;
    std::vector<int> lambda;
    std::vector<int> theta_x;
    std::vector<std::optional<int>> theta_z_high;

    int n() const { return ext.n(); }
};

/// A concrete representative of `spec`'s class: lexicographically smallest
/// eta_1..eta_{n-k}, theta_x = 1, theta_z on xi_{n-k+1..n} solved.
inline EncoderParams default_params(const ProtocolSpec &spec) {
    EncoderParams params;
    params.p = spec.p();
    params.k = spec.k();
    params.ext = complete_hyperbolic(spec.p(), spec.n(), spec.stabilizer.generators(), spec.cls.h, spec.cls.g);
    params.lambda = spec.stabilizer.lambda();
    params.theta_x.assign(spec.n(), 0);
    params.theta_z_high.assign(spec.k(), std::nullopt);
    return params;
}

}  // namespace edp

#endif  // EDP_ENCODER_HPP
