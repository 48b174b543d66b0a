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

// Exhaustive search over (stabilizer, encoding class) candidates with the
// zero-syndrome protocol iterated on Werner inputs and finished by hashing.

#ifndef EDP_SEARCH_HPP
#define EDP_SEARCH_HPP

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <functional>
#include <mutex>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "edp/bell.hpp"
#include "edp/encoder.hpp"
#include "edp/gf.hpp"
#include "edp/sim.hpp"
#include "edp/spec_io.hpp"

namespace edp {

/// Yields within this distance of the envelope count as attaining it.
inline constexpr double kEnvelopeTolerance = 1e-12;

struct SearchConfig {
    int n = 4;
    int k = 2;
    int p = 2;
    std::vector<double> f_eval = fidelity_grid(0.60, 0.95, 0.05);
    double f_star = 0.85;
    int r_max = 8;
    /// "yield_at_F": yield at f_star. "dominance_count": number of f_eval
    /// points where the candidate attains the best yield of the whole space.
    std::string objective = "yield_at_F";
    int workers = 1;
    std::size_t top = 100;
    /// Evaluate one stabilizer per orbit of the block-permutation group.
    bool symmetry = false;
    std::uint64_t max_candidates = 10'000'000;
    /// Append-only JSONL log of finished chunks; empty disables it.
    std::string checkpoint;
    std::size_t chunk_size = 64;

    std::size_t f_star_index() const {
        for (std::size_t i = 0; i < f_eval.size(); ++i) {
            if (std::abs(f_eval[i] - f_star) <= 1e-9) return i;
        }
        throw std::invalid_argument("search: f_star must be one of the evaluation fidelities");
    }

    void validate() const {
        if (!is_prime(p)) throw std::invalid_argument("search: p must be prime");
        if (!(n > k && k >= 1) || n % k != 0) throw std::invalid_argument("search: need n > k >= 1 and k | n");
        if (n > kMaxQudits) throw std::invalid_argument("search: n too large");
        if (f_eval.empty()) throw std::invalid_argument("search: no evaluation fidelities");
        if (r_max < 0) throw std::invalid_argument("search: r_max must be nonnegative");
        if (objective != "yield_at_F" && objective != "dominance_count") {
            throw std::invalid_argument("search: unknown objective '" + objective + "'");
        }
        if (workers < 1) throw std::invalid_argument("search: workers must be positive");
        if (top < 1) throw std::invalid_argument("search: top must be positive");
        if (chunk_size < 1) throw std::invalid_argument("search: chunk size must be positive");
        f_star_index();
    }
};

class BudgetExceeded : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

/// Number of (stabilizer, class) candidates: selforth_count * sp_order(k).
inline BigInt candidate_count(int n, int k, int p) { return selforth_count(n, k, p) * sp_order(k, p); }

/// One stabilizer prepared for fast evaluation: the elements of C^perp in
/// increasing index order and, for each, the coordinate index of its coset
/// in C^perp / C.
class StabilizerContext {
   public:
    StabilizerContext(const Subspace &c, int k)
        : c_(c), quotient_(QuotientSpace::of(c)), coords_(c.p(), quotient_.representatives().basis()), k_(k) {
        const int p = c.p();
        const Subspace &reps = quotient_.representatives();
        auto elements = quotient_.cperp().elements();
        std::sort(elements.begin(), elements.end(),
                  [](const GFVector &a, const GFVector &b) { return a.index() < b.index(); });
        for (const auto &t : elements) {
            cperp_.push_back(t.index());
            const GFVector rep = c.reduce(t);
            std::uint64_t coord = 0;
            for (int piv : reps.pivots()) coord = coord * p + rep[piv];
            coset_.push_back(static_cast<std::uint32_t>(coord));
        }
        for (const auto &row : c.basis()) {
            for (int i = 0; i < row.size(); ++i) key_prefix_.push_back(row[i]);
        }
    }

    const Subspace &subspace() const { return c_; }
    const SymplecticCoordinates &coords() const { return coords_; }
    const std::vector<std::uint64_t> &cperp() const { return cperp_; }
    const std::vector<std::uint32_t> &coset() const { return coset_; }
    const std::vector<int> &key_prefix() const { return key_prefix_; }
    int k() const { return k_; }

    /// Label index of g(u) for every coset coordinate u, for the class with
    /// coordinate vectors xs (xi representatives) and ys (eta representatives).
    std::vector<std::uint32_t> g_table(std::span<const std::uint64_t> xs, std::span<const std::uint64_t> ys) const {
        const int p = c_.p();
        std::vector<std::uint32_t> out(coords_.count());
        for (std::uint64_t u = 0; u < coords_.count(); ++u) {
            std::uint64_t w = 0;
            for (int j = 0; j < k_; ++j) w = w * p + coords_.form(xs[j], u);
            for (int j = 0; j < k_; ++j) w = w * p + coords_.form(u, ys[j]);
            out[u] = static_cast<std::uint32_t>(w);
        }
        return out;
    }

    std::vector<int> key(std::span<const std::uint64_t> xs, std::span<const std::uint64_t> ys) const {
        std::vector<int> key = key_prefix_;
        for (auto idx : xs) append(key, coords_.vector(idx));
        for (auto idx : ys) append(key, coords_.vector(idx));
        return key;
    }

    ProtocolSpec spec(std::span<const std::uint64_t> xs, std::span<const std::uint64_t> ys) const {
        Stabilizer s(c_.p(), c_.n(), c_.basis());
        std::vector<GFVector> h, g;
        for (auto idx : xs) h.push_back(coords_.vector(idx));
        for (auto idx : ys) g.push_back(coords_.vector(idx));
        return make_spec(s, make_class(c_, h, g));
    }

   private:
    static void append(std::vector<int> &key, const GFVector &v) {
        for (int i = 0; i < v.size(); ++i) key.push_back(v[i]);
    }

    Subspace c_;
    QuotientSpace quotient_;
    SymplecticCoordinates coords_;
    int k_;
    std::vector<std::uint64_t> cperp_;
    std::vector<std::uint32_t> coset_;
    std::vector<int> key_prefix_;
};

/// Zero-branch yield evaluation specialized to candidates: per fidelity it
/// returns the best (F, r) point over r = 0..r_max, the smallest r on ties.
class CandidateEvaluator {
   public:
    CandidateEvaluator(int p, int n, int k, std::vector<double> fidelities, int r_max)
        : p_(p), n_(n), k_(k), groups_(n / k), r_max_(r_max), fidelities_(std::move(fidelities)) {
        labels_ = ipow(p, 2 * k);
        const std::uint64_t total = ipow(p, 2 * n);
        group_label_.resize(total * groups_);
        for (std::uint64_t idx = 0; idx < total; ++idx) {
            GFVector t = GFVector::from_index(p, n, idx);
            for (int j = 0; j < groups_; ++j) {
                GFVector label(p, k);
                for (int i = 0; i < k; ++i) {
                    label.set(i, t.a(j * k + i));
                    label.set(k + i, t.b(j * k + i));
                }
                group_label_[idx * groups_ + j] = static_cast<std::uint32_t>(label.index());
            }
        }
        sub_.resize(labels_ * labels_);
        for (std::uint64_t a = 0; a < labels_; ++a) {
            for (std::uint64_t b = 0; b < labels_; ++b) {
                sub_[a * labels_ + b] =
                    static_cast<std::uint32_t>((GFVector::from_index(p, k, a) - GFVector::from_index(p, k, b)).index());
            }
        }
        for (double f : fidelities_) werner_.push_back(werner_input(f, k, p));
    }

    const std::vector<double> &fidelities() const { return fidelities_; }

    std::vector<YieldPoint> evaluate(const StabilizerContext &ctx, const std::vector<std::uint32_t> &g_of_coset) const {
        const auto &cperp = ctx.cperp();
        const auto &coset = ctx.coset();
        std::vector<std::uint32_t> g(cperp.size());
        for (std::size_t i = 0; i < cperp.size(); ++i) g[i] = g_of_coset[coset[i]];
        std::vector<YieldPoint> best;
        std::vector<double> probs(cperp.size());
        for (std::size_t fi = 0; fi < fidelities_.size(); ++fi) {
            YieldPoint pt;
            pt.fidelity = fidelities_[fi];
            pt.rounds = 0;
            pt.entropy_bits = entropy_bits(werner_[fi]);
            pt.yield = normalized_yield(n_, k_, p_, 0, 1.0, pt.entropy_bits);
            BellDiagonal current = werner_[fi];
            std::vector<double> success;
            double accept_product = 1.0;
            for (int r = 1; r <= r_max_; ++r) {
                if (std::pow(static_cast<double>(k_) / n_, r) * accept_product <= pt.yield) break;
                double q = 0;
                std::size_t argmax = 0;
                for (std::size_t i = 0; i < cperp.size(); ++i) {
                    const std::uint32_t *lab = &group_label_[cperp[i] * groups_];
                    double pr = 1.0;
                    for (int j = 0; j < groups_ && pr != 0.0; ++j) pr *= current.probs[lab[j]];
                    probs[i] = pr;
                    q += pr;
                    if (pr > probs[argmax]) argmax = i;
                }
                if (!(q > 0)) break;
                BellDiagonal next(p_, k_);
                const std::uint32_t shift = g[argmax];
                for (std::size_t i = 0; i < cperp.size(); ++i) next.probs[sub_[g[i] * labels_ + shift]] += probs[i];
                for (double &x : next.probs) x /= q;
                success.push_back(q);
                accept_product *= q;
                const double h = entropy_bits(next);
                const double y = normalized_yield(n_, k_, p_, r, accept_product, h);
                if (y > pt.yield) {
                    pt.rounds = r;
                    pt.success_probs = success;
                    pt.entropy_bits = h;
                    pt.yield = y;
                }
                current = std::move(next);
            }
            best.push_back(std::move(pt));
        }
        return best;
    }

   private:
    int p_, n_, k_, groups_, r_max_;
    std::uint64_t labels_;
    std::vector<double> fidelities_;
    std::vector<BellDiagonal> werner_;
    std::vector<std::uint32_t> group_label_;
    std::vector<std::uint32_t> sub_;
};

/// Best (F, r) point per fidelity of one spec, via the evaluator.
inline std::vector<YieldPoint> evaluate_spec(const ProtocolSpec &spec, const std::vector<double> &fidelities,
                                             int r_max) {
    StabilizerContext ctx(spec.stabilizer.subspace(), spec.k());
    CandidateEvaluator eval(spec.p(), spec.n(), spec.k(), fidelities, r_max);
    std::vector<std::uint32_t> g(ctx.coords().count());
    for (std::uint64_t u = 0; u < g.size(); ++u) g[u] = static_cast<std::uint32_t>(g_linear(ctx.coords().vector(u), spec.cls).index());
    return eval.evaluate(ctx, g);
}

/// Image of C under a permutation of qudit positions (position i -> perm[i]).
inline Subspace permute_qudits(const Subspace &c, const std::vector<int> &perm) {
    const int n = c.n();
    std::vector<GFVector> rows;
    for (const auto &row : c.basis()) {
        GFVector img(c.p(), n);
        for (int i = 0; i < n; ++i) {
            img.set(perm[i], row.a(i));
            img.set(n + perm[i], row.b(i));
        }
        rows.push_back(img);
    }
    return Subspace::span(c.p(), n, rows);
}

inline GFVector permute_qudits(const GFVector &v, const std::vector<int> &perm) {
    const int n = v.n();
    GFVector img(v.p(), n);
    for (int i = 0; i < n; ++i) {
        img.set(perm[i], v.a(i));
        img.set(n + perm[i], v.b(i));
    }
    return img;
}

/// Qudit permutations that move whole k-blocks, identity excluded.
inline std::vector<std::vector<int>> block_permutations(int n, int k) {
    const int groups = n / k;
    std::vector<int> order(groups);
    std::iota(order.begin(), order.end(), 0);
    std::vector<std::vector<int>> out;
    while (std::next_permutation(order.begin(), order.end())) {
        std::vector<int> perm(n);
        for (int b = 0; b < groups; ++b) {
            for (int i = 0; i < k; ++i) perm[b * k + i] = order[b] * k + i;
        }
        out.push_back(perm);
    }
    return out;
}

/// True when no block permutation maps C to a subspace with a smaller
/// canonical basis.
inline bool is_orbit_minimum(const Subspace &c, const std::vector<std::vector<int>> &perms) {
    auto flat = [](const Subspace &s) {
        std::vector<int> out;
        for (const auto &row : s.basis()) {
            for (int i = 0; i < row.size(); ++i) out.push_back(row[i]);
        }
        return out;
    };
    const auto own = flat(c);
    for (const auto &perm : perms) {
        if (flat(permute_qudits(c, perm)) < own) return false;
    }
    return true;
}

struct RankedProtocol {
    ProtocolSpec spec;
    std::vector<YieldPoint> yields;
    double objective = 0;
    std::vector<int> key;
};

struct SearchResult {
    std::vector<RankedProtocol> top;
    /// Best yield over all evaluated candidates, per evaluation fidelity.
    std::vector<double> envelope;
    std::uint64_t evaluated = 0;
    std::uint64_t stabilizers = 0;
    std::uint64_t skipped_by_symmetry = 0;
};

namespace detail {

struct Entry {
    double objective = 0;
    std::vector<int> key;
    std::uint32_t stabilizer = 0;
    std::vector<std::uint64_t> xs, ys;
    std::vector<YieldPoint> yields;
};

inline bool entry_before(const Entry &a, const Entry &b) {
    if (a.objective != b.objective) return a.objective > b.objective;
    return a.key < b.key;
}

/// Bounded list kept in the search total order.
class TopList {
   public:
    explicit TopList(std::size_t cap) : cap_(cap) {}

    bool admits(double objective) const { return items_.size() < cap_ || objective >= items_.back().objective; }

    void insert(Entry e) {
        auto pos = std::upper_bound(items_.begin(), items_.end(), e, entry_before);
        if (items_.size() >= cap_ && pos == items_.end()) return;
        items_.insert(pos, std::move(e));
        if (items_.size() > cap_) items_.pop_back();
    }

    const std::vector<Entry> &items() const { return items_; }

   private:
    std::size_t cap_;
    std::vector<Entry> items_;
};

struct ChunkResult {
    bool done = false;
    std::uint64_t evaluated = 0;
    std::uint64_t skipped = 0;
    std::vector<double> envelope;
    std::vector<Entry> top;
};

inline Json point_to_json(const YieldPoint &pt) {
    Json j;
    j["rounds"] = pt.rounds;
    j["success_probs"] = pt.success_probs;
    j["entropy_bits"] = pt.entropy_bits;
    j["yield"] = pt.yield;
    return j;
}

inline Json chunk_to_json(int pass, std::size_t chunk, const ChunkResult &res) {
    Json j;
    j["pass"] = pass;
    j["chunk"] = chunk;
    j["evaluated"] = res.evaluated;
    j["skipped"] = res.skipped;
    j["envelope"] = res.envelope;
    Json top = Json::array();
    for (const auto &e : res.top) {
        Json item;
        item["stabilizer"] = e.stabilizer;
        item["xs"] = e.xs;
        item["ys"] = e.ys;
        item["objective"] = e.objective;
        Json pts = Json::array();
        for (const auto &pt : e.yields) pts.push_back(point_to_json(pt));
        item["points"] = pts;
        top.push_back(item);
    }
    j["top"] = top;
    return j;
}

inline Json config_to_json(const SearchConfig &cfg) {
    Json j;
    j["n"] = cfg.n;
    j["k"] = cfg.k;
    j["p"] = cfg.p;
    j["f_eval"] = cfg.f_eval;
    j["f_star"] = cfg.f_star;
    j["r_max"] = cfg.r_max;
    j["objective"] = cfg.objective;
    j["top"] = cfg.top;
    j["symmetry"] = cfg.symmetry;
    j["chunk_size"] = cfg.chunk_size;
    return j;
}

}  // namespace detail

/// Runs the exhaustive search. The result does not depend on the worker
/// count or on interruption and resumption through the checkpoint log.
inline SearchResult search(const SearchConfig &cfg) {
    cfg.validate();
    const BigInt total = candidate_count(cfg.n, cfg.k, cfg.p);
    if (total > BigInt(cfg.max_candidates)) {
        throw BudgetExceeded("search: " + total.str() + " candidates exceed the budget of " +
                             std::to_string(cfg.max_candidates));
    }
    const std::vector<Subspace> stabilizers = collect_self_orthogonal(cfg.n, cfg.k, cfg.p);
    const std::size_t nchunks = (stabilizers.size() + cfg.chunk_size - 1) / cfg.chunk_size;
    const std::size_t nf = cfg.f_eval.size();
    const std::size_t fstar = cfg.f_star_index();
    const CandidateEvaluator evaluator(cfg.p, cfg.n, cfg.k, cfg.f_eval, cfg.r_max);
    const auto perms = block_permutations(cfg.n, cfg.k);
    const bool dominance = cfg.objective == "dominance_count";
    const int passes = dominance ? 2 : 1;

    std::vector<std::vector<detail::ChunkResult>> results(passes, std::vector<detail::ChunkResult>(nchunks));
    std::mutex log_mutex;
    std::ofstream log;
    if (!cfg.checkpoint.empty()) {
        const Json header = detail::config_to_json(cfg);
        std::ifstream in(cfg.checkpoint);
        std::string line;
        bool have_header = false;
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            Json j;
            try {
                j = Json::parse(line);
            } catch (const Json::parse_error &) {
                break;  // torn final record from an interrupted run
            }
            if (!have_header) {
                if (!j.contains("config") || j.at("config") != header) {
                    throw std::invalid_argument("search: checkpoint was written with a different configuration");
                }
                have_header = true;
                continue;
            }
            const int pass = j.at("pass").get<int>();
            const auto chunk = j.at("chunk").get<std::size_t>();
            if (pass < 1 || pass > passes || chunk >= nchunks) {
                throw std::invalid_argument("search: checkpoint record out of range");
            }
            detail::ChunkResult &res = results[pass - 1][chunk];
            res.done = true;
            res.evaluated = j.at("evaluated").get<std::uint64_t>();
            res.skipped = j.at("skipped").get<std::uint64_t>();
            res.envelope = j.at("envelope").get<std::vector<double>>();
            res.top.clear();
            for (const auto &item : j.at("top")) {
                detail::Entry e;
                e.stabilizer = item.at("stabilizer").get<std::uint32_t>();
                e.xs = item.at("xs").get<std::vector<std::uint64_t>>();
                e.ys = item.at("ys").get<std::vector<std::uint64_t>>();
                e.objective = item.at("objective").get<double>();
                for (std::size_t fi = 0; fi < nf; ++fi) {
                    const Json &pj = item.at("points").at(fi);
                    YieldPoint pt;
                    pt.fidelity = cfg.f_eval[fi];
                    pt.rounds = pj.at("rounds").get<int>();
                    pt.success_probs = pj.at("success_probs").get<std::vector<double>>();
                    pt.entropy_bits = pj.at("entropy_bits").get<double>();
                    pt.yield = pj.at("yield").get<double>();
                    e.yields.push_back(pt);
                }
                e.key = StabilizerContext(stabilizers.at(e.stabilizer), cfg.k).key(e.xs, e.ys);
                res.top.push_back(std::move(e));
            }
        }
        in.close();
        log.open(cfg.checkpoint, std::ios::app);
        if (!log) throw std::runtime_error("search: cannot open checkpoint " + cfg.checkpoint);
        if (!have_header) {
            Json h;
            h["config"] = header;
            log << h.dump() << '\n' << std::flush;
        }
    }

    std::vector<double> envelope(nf, 0.0);
    for (int pass = 0; pass < passes; ++pass) {
        const bool counting = dominance && pass == 1;
        std::atomic<std::size_t> next{0};
        auto work = [&]() {
            for (;;) {
                const std::size_t chunk = next.fetch_add(1);
                if (chunk >= nchunks) return;
                detail::ChunkResult &res = results[pass][chunk];
                if (res.done) continue;
                detail::TopList top(cfg.top);
                res.envelope.assign(nf, 0.0);
                const std::size_t begin = chunk * cfg.chunk_size;
                const std::size_t end = std::min(stabilizers.size(), begin + cfg.chunk_size);
                for (std::size_t si = begin; si < end; ++si) {
                    const Subspace &c = stabilizers[si];
                    if (cfg.symmetry && !is_orbit_minimum(c, perms)) {
                        res.skipped += static_cast<std::uint64_t>(sp_order(cfg.k, cfg.p));
                        continue;
                    }
                    StabilizerContext ctx(c, cfg.k);
                    for_each_hyperbolic_basis_coords(ctx.coords(), [&](auto xs, auto ys) {
                        auto yields = evaluator.evaluate(ctx, ctx.g_table(xs, ys));
                        ++res.evaluated;
                        double objective = 0;
                        for (std::size_t fi = 0; fi < nf; ++fi) {
                            res.envelope[fi] = std::max(res.envelope[fi], yields[fi].yield);
                            if (counting && yields[fi].yield >= envelope[fi] - kEnvelopeTolerance) objective += 1;
                        }
                        if (!dominance) objective = yields[fstar].yield;
                        if (!dominance || counting) {
                            if (top.admits(objective)) {
                                detail::Entry e;
                                e.objective = objective;
                                e.key = ctx.key(xs, ys);
                                e.stabilizer = static_cast<std::uint32_t>(si);
                                e.xs.assign(xs.begin(), xs.end());
                                e.ys.assign(ys.begin(), ys.end());
                                e.yields = std::move(yields);
                                top.insert(std::move(e));
                            }
                        }
                        return true;
                    });
                }
                res.top = top.items();
                res.done = true;
                if (log.is_open()) {
                    const std::string line = detail::chunk_to_json(pass + 1, chunk, res).dump();
                    std::lock_guard<std::mutex> lock(log_mutex);
                    log << line << '\n' << std::flush;
                }
            }
        };
        std::vector<std::thread> threads;
        for (int w = 1; w < cfg.workers; ++w) threads.emplace_back(work);
        work();
        for (auto &t : threads) t.join();
        for (const auto &res : results[pass]) {
            for (std::size_t fi = 0; fi < nf; ++fi) envelope[fi] = std::max(envelope[fi], res.envelope[fi]);
        }
    }

    SearchResult out;
    out.envelope = envelope;
    out.stabilizers = stabilizers.size();
    detail::TopList merged(cfg.top);
    for (const auto &res : results[passes - 1]) {
        out.evaluated += res.evaluated;
        out.skipped_by_symmetry += res.skipped;
        for (const auto &e : res.top) merged.insert(e);
    }
    for (const auto &e : merged.items()) {
        StabilizerContext ctx(stabilizers[e.stabilizer], cfg.k);
        out.top.push_back(RankedProtocol{ctx.spec(e.xs, e.ys), e.yields, e.objective, e.key});
    }
    return out;
}

/// Text report: a header, then per rank the spec JSON and its best (F, r)
/// rows. Identical inputs give byte-identical output.
inline void write_results(std::ostream &out, const SearchConfig &cfg, const SearchResult &res) {
    out << "# n=" << cfg.n << " k=" << cfg.k << " p=" << cfg.p << " objective=" << cfg.objective
        << " f_star=" << format_real(cfg.f_star) << " r_max=" << cfg.r_max << " symmetry=" << (cfg.symmetry ? 1 : 0)
        << '\n';
    out << "# stabilizers=" << res.stabilizers << " evaluated=" << res.evaluated
        << " skipped_by_symmetry=" << res.skipped_by_symmetry << '\n';
    out << "# envelope";
    for (std::size_t fi = 0; fi < cfg.f_eval.size(); ++fi) {
        out << ' ' << format_real(cfg.f_eval[fi]) << ':' << format_real(res.envelope[fi]);
    }
    out << '\n';
    for (std::size_t i = 0; i < res.top.size(); ++i) {
        out << "## rank " << i + 1 << " objective=" << format_real(res.top[i].objective) << '\n';
        out << serialize_spec(res.top[i].spec) << '\n';
        write_yield_csv(out, res.top[i].yields);
    }
}

}  // namespace edp

#endif  // EDP_SEARCH_HPP
