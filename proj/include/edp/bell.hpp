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

#ifndef EDP_BELL_HPP
#define EDP_BELL_HPP

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "edp/gf.hpp"

namespace edp {

/// Probability distribution over Bell labels v in Z_p^{2m}, indexed by
/// GFVector::index() of the label.
struct BellDiagonal {
    int p = 2;
    int m = 0;
    std::vector<double> probs;

    BellDiagonal() = default;
    BellDiagonal(int p_, int m_) : p(p_), m(m_), probs(ipow(p_, 2 * m_), 0.0) {}

    std::size_t size() const { return probs.size(); }
    double operator[](const GFVector &v) const { return probs[v.index()]; }
    double &operator[](const GFVector &v) { return probs[v.index()]; }

    double total() const { return std::accumulate(probs.begin(), probs.end(), 0.0); }

    bool is_normalized(double tol = 1e-12) const {
        for (double x : probs) {
            if (x < 0 || !std::isfinite(x)) return false;
        }
        return std::abs(total() - 1.0) <= tol;
    }

    static BellDiagonal point_mass(int p, int m, const GFVector &at) {
        BellDiagonal d(p, m);
        d.probs[at.index()] = 1.0;
        return d;
    }

    static BellDiagonal uniform(int p, int m) {
        BellDiagonal d(p, m);
        std::fill(d.probs.begin(), d.probs.end(), 1.0 / static_cast<double>(d.probs.size()));
        return d;
    }
};

/// Shannon entropy in bits.
inline double entropy_bits(const BellDiagonal &d) {
    double h = 0;
    for (double x : d.probs) {
        if (x > 0) h -= x * std::log2(x);
    }
    return h;
}

/// Per-pair isotropic distribution: P(0) = F, P(v) = (1 - F) / (p^2 - 1)
/// otherwise, as an i.i.d. product over `pairs` pairs.
inline BellDiagonal werner_input(double fidelity, int pairs, int p) {
    if (!(fidelity >= 0.0 && fidelity <= 1.0)) {
        throw std::invalid_argument("werner_input: fidelity must lie in [0, 1]");
    }
    if (pairs < 0 || pairs > kMaxQudits) throw std::invalid_argument("werner_input: pair count out of range");
    BellDiagonal d(p, pairs);
    const double other = (1.0 - fidelity) / (p * p - 1);
    for (std::uint64_t idx = 0; idx < d.size(); ++idx) {
        GFVector v = GFVector::from_index(p, pairs, idx);
        double prob = 1.0;
        for (int i = 0; i < pairs; ++i) {
            prob *= (v.a(i) == 0 && v.b(i) == 0) ? fidelity : other;
        }
        d.probs[idx] = prob;
    }
    return d;
}

}  // namespace edp

#endif  // EDP_BELL_HPP
