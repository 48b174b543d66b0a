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

#ifndef EDP_SIM_HPP
#define EDP_SIM_HPP

#include <charconv>
#include <cmath>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "edp/bell.hpp"
#include "edp/encoder.hpp"

namespace edp {

/// Outcome of one acceptance branch b - a = s.
struct BranchResult {
    Syndrome syndrome;
    double accept_prob = 0;
    BellDiagonal p_out;
    /// False when accept_prob == 0; p_out is then all zeros.
    bool defined = false;
};

/// Per-vector tables for the classical simulation of one protocol: the
/// syndrome of every error t and the linear extension of g evaluated at t.
class ProtocolTables {
   public:
    explicit ProtocolTables(const ProtocolSpec &spec) : p_(spec.p()), n_(spec.n()), k_(spec.k()) {
        const std::uint64_t total = ipow(p_, 2 * n_);
        syn_.resize(total);
        g_.resize(total);
        for (std::uint64_t idx = 0; idx < total; ++idx) {
            GFVector t = GFVector::from_index(p_, n_, idx);
            syn_[idx] = syndrome_index(syndrome(t, spec.stabilizer), p_);
            g_[idx] = g_linear(t, spec.cls);
        }
    }

    std::uint64_t size() const { return syn_.size(); }
    std::uint64_t syndrome_of(std::uint64_t t) const { return syn_[t]; }
    const GFVector &g_of(std::uint64_t t) const { return g_[t]; }

   private:
    int p_, n_, k_;
    std::vector<std::uint64_t> syn_;
    std::vector<GFVector> g_;
};

/// Output distribution of every accepted branch for a Bell-diagonal input:
/// accept_prob = sum_{t in D(s)} P_in(t) and
/// P_out(w) = sum_{t in D(s), g(f(t)) = w} P_in(t) / accept_prob.
inline std::vector<BranchResult> run_protocol(const BellDiagonal &p_in, const ProtocolSpec &spec,
                                              const ProtocolTables &tables) {
    const int p = spec.p(), n = spec.n(), k = spec.k();
    if (p_in.p != p || p_in.m != n) throw std::invalid_argument("run_protocol: input must cover n pairs");
    const FRule frule = spec.frule ? *spec.frule : most_likely_frule(spec.stabilizer, p_in);
    std::vector<BranchResult> out;
    for (const auto &s : spec.accept) {
        BranchResult br;
        br.syndrome = s;
        br.p_out = BellDiagonal(p, k);
        const std::uint64_t si = syndrome_index(s, p);
        const GFVector shift = g_linear(frule.reps.at(si), spec.cls);
        for (std::uint64_t t = 0; t < p_in.size(); ++t) {
            if (tables.syndrome_of(t) != si) continue;
            const double pr = p_in.probs[t];
            br.accept_prob += pr;
            br.p_out.probs[(tables.g_of(t) - shift).index()] += pr;
        }
        if (br.accept_prob > 0) {
            br.defined = true;
            for (double &x : br.p_out.probs) x /= br.accept_prob;
        } else {
            std::fill(br.p_out.probs.begin(), br.p_out.probs.end(), 0.0);
        }
        out.push_back(std::move(br));
    }
    return out;
}

inline std::vector<BranchResult> run_protocol(const BellDiagonal &p_in, const ProtocolSpec &spec) {
    return run_protocol(p_in, spec, ProtocolTables(spec));
}

/// Joint distribution of `groups` independent copies of a k-pair group
/// distribution, in block order: copy j occupies pairs j*k .. j*k + k - 1.
inline BellDiagonal group_product(const BellDiagonal &group, int groups) {
    const int p = group.p, k = group.m, n = k * groups;
    BellDiagonal out(p, n);
    for (std::uint64_t idx = 0; idx < out.size(); ++idx) {
        GFVector t = GFVector::from_index(p, n, idx);
        double prob = 1.0;
        for (int j = 0; j < groups && prob != 0.0; ++j) {
            GFVector label(p, k);
            for (int i = 0; i < k; ++i) {
                label.set(i, t.a(j * k + i));
                label.set(k + i, t.b(j * k + i));
            }
            prob *= group.probs[label.index()];
        }
        out.probs[idx] = prob;
    }
    return out;
}

struct IterationResult {
    std::vector<double> accept_probs;
    BellDiagonal final;
    /// Set when some round accepted with probability 0.
    bool aborted = false;
};

/// Runs `rounds` rounds of the zero-syndrome branch. Each round feeds n/k
/// independent copies of the current k-pair distribution in block order.
inline IterationResult iterate_protocol(const BellDiagonal &group, const ProtocolSpec &spec, int rounds) {
    const int n = spec.n(), k = spec.k();
    if (k <= 0 || n % k != 0) throw std::invalid_argument("iterate_protocol: n must be a multiple of k");
    if (group.p != spec.p() || group.m != k) throw std::invalid_argument("iterate_protocol: group must cover k pairs");
    if (rounds < 0) throw std::invalid_argument("iterate_protocol: negative round count");
    IterationResult res;
    res.final = group;
    if (rounds == 0) return res;
    ProtocolSpec zero_branch = spec;
    zero_branch.accept = ProtocolSpec::zero_only(spec.stabilizer.num_generators());
    ProtocolTables tables(zero_branch);
    for (int r = 0; r < rounds; ++r) {
        BellDiagonal input = group_product(res.final, n / k);
        BranchResult br = run_protocol(input, zero_branch, tables).front();
        res.accept_probs.push_back(br.accept_prob);
        res.final = br.p_out;
        if (!br.defined) {
            res.aborted = true;
            break;
        }
    }
    return res;
}

/// Success probability and entropy after each of rounds 0..r_max.
struct RoundTrace {
    std::vector<double> accept_probs;  // size r_max once complete
    std::vector<double> entropies;     // entropies[r] for r = 0..r_max
};

inline RoundTrace trace_rounds(const BellDiagonal &group, const ProtocolSpec &spec, int r_max) {
    const int n = spec.n(), k = spec.k();
    if (k <= 0 || n % k != 0) throw std::invalid_argument("trace_rounds: n must be a multiple of k");
    RoundTrace tr;
    tr.entropies.push_back(entropy_bits(group));
    if (r_max == 0) return tr;
    ProtocolSpec zero_branch = spec;
    zero_branch.accept = ProtocolSpec::zero_only(spec.stabilizer.num_generators());
    ProtocolTables tables(zero_branch);
    BellDiagonal current = group;
    for (int r = 0; r < r_max; ++r) {
        BranchResult br = run_protocol(group_product(current, n / k), zero_branch, tables).front();
        tr.accept_probs.push_back(br.accept_prob);
        tr.entropies.push_back(br.defined ? entropy_bits(br.p_out) : 0.0);
        if (!br.defined) {
            // Later rounds never start.
            while (static_cast<int>(tr.accept_probs.size()) < r_max) {
                tr.accept_probs.push_back(0.0);
                tr.entropies.push_back(0.0);
            }
            break;
        }
        current = br.p_out;
    }
    return tr;
}

/// Asymptotic hashing yield in ebits per k-pair group: max(0, k log2 p - H).
inline double hashing_yield(const BellDiagonal &d) {
    const double capacity = d.m * std::log2(static_cast<double>(d.p));
    return std::max(0.0, capacity - entropy_bits(d));
}

struct YieldPoint {
    double fidelity = 0;
    int rounds = 0;
    std::vector<double> success_probs;
    double entropy_bits = 0;
    double yield = 0;

    double accept_prob_product() const {
        double r = 1.0;
        for (double q : success_probs) r *= q;
        return r;
    }
};

/// yield = (k/n)^r * prod_j q_j * max(0, k log2 p - H) / (k log2 p).
inline double normalized_yield(int n, int k, int p, int rounds, double accept_product, double entropy) {
    const double capacity = k * std::log2(static_cast<double>(p));
    return std::pow(static_cast<double>(k) / n, rounds) * accept_product * std::max(0.0, capacity - entropy) /
           capacity;
}

/// Every (F, r) point for r = 0..r_max, ordered by F then r.
inline std::vector<YieldPoint> yield_curve(const ProtocolSpec &spec, const std::vector<double> &fidelities,
                                           int r_max) {
    if (r_max < 0) throw std::invalid_argument("yield_curve: r_max must be nonnegative");
    const int n = spec.n(), k = spec.k(), p = spec.p();
    std::vector<YieldPoint> points;
    for (double f : fidelities) {
        RoundTrace tr = trace_rounds(werner_input(f, k, p), spec, r_max);
        for (int r = 0; r <= r_max; ++r) {
            YieldPoint pt;
            pt.fidelity = f;
            pt.rounds = r;
            pt.success_probs.assign(tr.accept_probs.begin(), tr.accept_probs.begin() + r);
            const double q = pt.accept_prob_product();
            pt.entropy_bits = tr.entropies[r];
            pt.yield = q > 0 ? normalized_yield(n, k, p, r, q, pt.entropy_bits) : 0.0;
            points.push_back(std::move(pt));
        }
    }
    return points;
}

/// The maximizing round count per fidelity (smallest r on ties).
inline std::vector<YieldPoint> best_per_fidelity(const std::vector<YieldPoint> &points) {
    std::vector<YieldPoint> best;
    for (const auto &pt : points) {
        if (best.empty() || best.back().fidelity != pt.fidelity) {
            best.push_back(pt);
        } else if (pt.yield > best.back().yield) {
            best.back() = pt;
        }
    }
    return best;
}

/// Shortest decimal text that round-trips; always uses '.'.
inline std::string format_real(double x) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, res.ptr);
}

/// f_min, f_min + step, ..., up to f_max (inclusive within 1e-9), with each
/// point rounded to 1e-9 so grids print cleanly.
inline std::vector<double> fidelity_grid(double f_min, double f_max, double step) {
    if (!(step > 0)) throw std::invalid_argument("fidelity_grid: step must be positive");
    std::vector<double> out;
    for (int i = 0;; ++i) {
        double f = std::round((f_min + i * step) * 1e9) / 1e9;
        if (f > f_max + 1e-9) break;
        out.push_back(std::min(f, 1.0));
    }
    return out;
}

inline void write_yield_csv(std::ostream &out, const std::vector<YieldPoint> &points) {
    out << "F,rounds,accept_prob_product,entropy_bits,yield\n";
    for (const auto &pt : points) {
        out << format_real(pt.fidelity) << ',' << pt.rounds << ',' << format_real(pt.accept_prob_product()) << ','
            << format_real(pt.entropy_bits) << ',' << format_real(pt.yield) << '\n';
    }
}

}  // namespace edp

#endif  // EDP_SIM_HPP
