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


// Acceptance suite: one PASS/FAIL line per criterion. Exit status is
// nonzero when any criterion fails.

#include <chrono>
#include <cmath>
#include <functional>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "brute.hpp"
#include "edp/edp.hpp"
#include "fixtures.hpp"
#include "oracle_helpers.hpp"

using namespace edp;
using oracle_helpers::random_accept;
using oracle_helpers::random_params;

namespace {

constexpr double kOracleTol = 1e-9;
constexpr double kExactTol = 1e-12;

struct Outcome {
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string &what) {
        if (ok) return;
        pass = false;
        detail += (detail.empty() ? "" : "; ") + what;
    }
};

struct Shape {
    int p, n, k;
};

const std::vector<Shape> kOracleShapes = {{2, 2, 1}, {3, 2, 1}, {2, 3, 1}, {3, 3, 1}, {2, 4, 2}, {3, 4, 2}};

double branch_deviation(const std::vector<BranchResult> &a, const std::vector<BranchResult> &b) {
    if (a.size() != b.size()) return 1.0;
    double dev = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i].syndrome != b[i].syndrome || a[i].defined != b[i].defined) return 1.0;
        dev = std::max(dev, std::abs(a[i].accept_prob - b[i].accept_prob));
        for (std::size_t w = 0; w < a[i].p_out.size(); ++w) {
            dev = std::max(dev, std::abs(a[i].p_out.probs[w] - b[i].p_out.probs[w]));
        }
    }
    return dev;
}

std::string fmt(double x) { return format_real(x); }

// Ordered bases of isotropic 2-dimensional subspaces of Z_2^8, divided by |GL_2(Z_2)|.
std::uint64_t brute_isotropic_planes() {
    const std::uint64_t total = brute::power(2, 8);
    std::uint64_t ordered = 0;
    for (std::uint64_t u = 1; u < total; ++u) {
        const auto bu = brute::decode(u, 2, 8);
        for (std::uint64_t v = 1; v < total; ++v) {
            if (v == u) continue;
            ordered += brute::form(bu, brute::decode(v, 2, 8), 2) == 0;
        }
    }
    return ordered / 6;
}

// Ordered hyperbolic bases (x_1, .., x_m, y_1, .., y_m) of Z_2^{2m}.
std::uint64_t brute_hyperbolic_bases(int m) {
    const std::uint64_t size = brute::power(2, 2 * m);
    std::uint64_t count = 0;
    std::vector<std::uint64_t> idx(2 * m, 0);
    std::function<void(int)> rec = [&](int depth) {
        if (depth == 2 * m) {
            ++count;
            return;
        }
        for (std::uint64_t v = 0; v < size; ++v) {
            const auto bv = brute::decode(v, 2, 2 * m);
            bool ok = true;
            for (int j = 0; j < depth && ok; ++j) {
                const auto bj = brute::decode(idx[j], 2, 2 * m);
                // Slot j pairs with slot j + m.
                const int want = (depth == j + m) ? 1 : 0;
                ok = brute::form(bj, bv, 2) == want;
            }
            if (!ok) continue;
            idx[depth] = v;
            rec(depth + 1);
        }
    };
    rec(0);
    return count;
}

Outcome counting_identities() {
    Outcome o;
    o.require(selforth_count(4, 2, 2) == 5355, "selforth_count formula");
    const std::uint64_t brute_planes = brute_isotropic_planes();
    o.require(brute_planes == 5355, "exhaustive plane count " + std::to_string(brute_planes));
    const auto stabilizers = collect_self_orthogonal(4, 2, 2);
    o.require(stabilizers.size() == 5355, "library enumeration");

    o.require(sp_order(2, 2) == 720, "sp_order(2,2) formula");
    o.require(brute_hyperbolic_bases(2) == 720, "exhaustive class count");
    std::uint64_t total = 0;
    bool every = true;
    for (const auto &c : stabilizers) {
        StabilizerContext ctx(c, 2);
        std::uint64_t classes = 0;
        for_each_hyperbolic_basis_coords(ctx.coords(), [&](auto, auto) {
            ++classes;
            return true;
        });
        every = every && classes == 720;
        total += classes;
    }
    o.require(every, "a stabilizer without 720 classes");
    o.require(total == 3855600 && candidate_count(4, 2, 2) == 3855600, "candidate total " + std::to_string(total));
    std::uint64_t ref_classes = 0;
    enumerate_hyperbolic_bases(QuotientSpace::of(fixtures::Reference().stabilizer().subspace()),
                               [&](const HyperbolicBasis &) {
                                   ++ref_classes;
                                   return true;
                               });
    o.require(ref_classes == 720, "reference stabilizer classes");

    o.require(reduction_factor(4, 2, 2) == 12288, "reduction_factor formula");
    o.require(sp_order(4, 2) == candidate_count(4, 2, 2) * 12288, "all hyperbolic bases / candidates != 12288");

    o.require(sp_order(1, 2) == 6 && brute_hyperbolic_bases(1) == 6, "sp_order(1,2)");
    o.detail = o.pass ? "5355 stabilizers, 720 classes, 3855600 candidates, factor 12288, sp_order(1,2)=6" : o.detail;
    return o;
}

Outcome construction_reproduction() {
    Outcome o;
    fixtures::Reference ref;
    const EncoderParams params = ref.listed_params();
    const std::vector<std::string> x = {"Z.Z.Z.I", "X.X.X.I", "Z.I.Z.I", "i XZ.Z.X.I"};
    const std::vector<std::string> z = {"X.X.X.X", "Z.Z.Z.Z", "X.X.I.I", "X.I.X.I"};
    const ResolvedPhases phases = resolve_theta_z(params);
    for (int i = 0; i < 4; ++i) {
        const std::string xi = to_string(encoded_x(params, i)), zi = to_string(encoded_z(params, phases.theta_z, i));
        o.require(xi == x[i], "X(f_" + std::to_string(i + 1) + ") = " + xi);
        o.require(zi == z[i], "Z(f_" + std::to_string(i + 1) + ") = " + zi);
    }
    CVector expect = CVector::Zero(16);
    for (int idx = 0; idx < 16; ++idx) expect(idx) = __builtin_popcount(idx) % 2 == 0 ? 1.0 : 0.0;
    for (const EncoderParams &pr : {ref.listed_params(), ref.params()}) {
        const CVector psi = psi_zero(pr);
        const double overlap = std::abs(expect.dot(psi)) / (expect.norm() * psi.norm());
        o.require(std::abs(overlap - 1.0) <= kOracleTol, "psi_zero overlap " + fmt(overlap));
    }
    if (o.pass) o.detail = "operator tables and the even-parity code state match";
    return o;
}

Outcome oracle_equivalence() {
    Outcome o;
    std::mt19937_64 rng(2026);
    int specs = 0, inputs = 0;
    double worst = 0, coherence = 0;
    for (const auto &shape : kOracleShapes) {
        for (int trial = 0; trial < 4; ++trial, ++specs) {
            ProtocolSpec spec = brute::random_spec(shape.p, shape.n, shape.k, rng);
            spec.accept = random_accept(shape.p, shape.n - shape.k, rng);
            DenseEncoder enc = build_encoder(random_params(spec, rng));
            for (int i = 0; i < 5; ++i, ++inputs) {
                BellDiagonal p_in = brute::random_distribution(shape.p, shape.n, rng);
                DenseRun dense = run_protocol_dense(p_in, spec, enc);
                worst = std::max(worst, branch_deviation(dense.branches, run_protocol(p_in, spec)));
                coherence = std::max(coherence, dense.max_coherence);
            }
        }
    }
    o.require(worst <= kOracleTol, "max deviation " + fmt(worst));
    o.require(coherence <= kOracleTol, "output coherence " + fmt(coherence));
    if (o.pass) {
        o.detail = std::to_string(specs) + " specs, " + std::to_string(inputs) + " inputs, max deviation " +
                   fmt(worst);
    }
    return o;
}

Outcome classification() {
    Outcome o;
    std::mt19937_64 rng(4);
    double worst = 0;
    int pairs = 0;
    for (const auto &shape : kOracleShapes) {
        // Members of one class.
        for (int trial = 0; trial < 2; ++trial) {
            ProtocolSpec spec = brute::random_spec(shape.p, shape.n, shape.k, rng);
            spec.accept = random_accept(shape.p, shape.n - shape.k, rng);
            DenseEncoder first = build_encoder(random_params(spec, rng));
            DenseEncoder second = build_encoder(random_params(spec, rng));
            for (int i = 0; i < 3; ++i) {
                BellDiagonal p_in = brute::random_distribution(shape.p, shape.n, rng);
                worst = std::max(worst, branch_deviation(run_protocol_dense(p_in, spec, first).branches,
                                                         run_protocol_dense(p_in, spec, second).branches));
            }
        }
        // Distinct classes of one stabilizer.
        ProtocolSpec spec = brute::random_spec(shape.p, shape.n, shape.k, rng);
        spec.frule = FRule::lexicographic(spec.stabilizer);
        std::vector<EncodingClass> others;
        enumerate_hyperbolic_bases(QuotientSpace::of(spec.stabilizer.subspace()), [&](const HyperbolicBasis &hb) {
            EncodingClass c = make_class(spec.stabilizer.subspace(), hb.x, hb.y);
            if (!class_equal(c, spec.cls) && rng() % 3 == 0) others.push_back(c);
            return others.size() < 2;
        });
        for (const auto &other_cls : others) {
            ++pairs;
            ProtocolSpec other = spec;
            other.cls = other_cls;
            std::optional<GFVector> witness;
            for (std::uint64_t idx = 0; idx < brute::power(shape.p, 2 * shape.n) && !witness; ++idx) {
                GFVector u = GFVector::from_index(shape.p, shape.n, idx);
                if (syndrome_index(syndrome(u, spec.stabilizer), shape.p) != 0) continue;
                if (!(g_map(u, spec.cls) == g_map(u, other.cls))) witness = u;
            }
            if (!witness) {
                o.require(false, "no witness vector");
                continue;
            }
            BellDiagonal p_in(shape.p, shape.n);
            double count = 0;
            for (std::uint64_t idx = 0; idx < p_in.size(); ++idx) {
                GFVector t = GFVector::from_index(shape.p, shape.n, idx);
                if (f_map(t, spec.stabilizer, *spec.frule) == *witness) {
                    p_in.probs[idx] = 1.0;
                    ++count;
                }
            }
            for (double &x : p_in.probs) x /= count;
            const auto a = run_protocol_dense(p_in, spec, build_encoder(random_params(spec, rng))).branches[0];
            const auto b = run_protocol_dense(p_in, other, build_encoder(random_params(other, rng))).branches[0];
            double diff = 0;
            for (std::size_t w = 0; w < a.p_out.size(); ++w) diff += std::abs(a.p_out.probs[w] - b.p_out.probs[w]);
            o.require(std::abs(a.p_out[g_map(*witness, spec.cls)] - 1.0) <= kOracleTol &&
                          std::abs(b.p_out[g_map(*witness, other.cls)] - 1.0) <= kOracleTol &&
                          std::abs(diff - 2.0) <= kOracleTol,
                      "witness failed to separate two classes");
        }
    }
    o.require(worst <= kOracleTol, "class members differ by " + fmt(worst));
    o.require(pairs >= 10, "only " + std::to_string(pairs) + " class pairs");
    if (o.pass) {
        o.detail = "members agree to " + fmt(worst) + ", " + std::to_string(pairs) + " class pairs separated";
    }
    return o;
}

struct FullSearch {
    SearchConfig cfg;
    SearchResult result;
    std::string report;
};

std::string report_of(const SearchConfig &cfg, const SearchResult &res) {
    std::ostringstream out;
    write_results(out, cfg, res);
    return out.str();
}

const FullSearch &full_search() {
    static const FullSearch run = [] {
        FullSearch fs;
        fs.cfg.workers = 1;
        fs.result = search(fs.cfg);
        fs.report = report_of(fs.cfg, fs.result);
        return fs;
    }();
    return run;
}

Outcome headline() {
    Outcome o;
    const FullSearch &fs = full_search();
    const auto &grid = fs.cfg.f_eval;
    o.require(fs.result.evaluated == 3855600, "evaluated " + std::to_string(fs.result.evaluated));

    const auto reference = best_per_fidelity(yield_curve(fixtures::Reference().spec(), grid, fs.cfg.r_max));
    std::string below;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (fs.result.envelope[i] < reference[i].yield - kExactTol) below += " " + fmt(grid[i]);
    }
    o.require(below.empty(), "best below the reference protocol at F =" + below);

    SearchConfig small = fs.cfg;
    small.n = 2;
    small.k = 1;
    const SearchResult two_one = search(small);
    std::string not_strict;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (grid[i] < 0.65 - 1e-9) continue;
        if (!(fs.result.envelope[i] > two_one.envelope[i] + kExactTol)) {
            not_strict += " " + fmt(grid[i]) + " (" + fmt(fs.result.envelope[i]) + " vs " +
                          fmt(two_one.envelope[i]) + ")";
        }
    }
    o.require(not_strict.empty(), "[[4,2]] best does not exceed [[2,1]] best at F =" + not_strict);
    if (o.pass) o.detail = "best yield at F*=0.85: " + fmt(fs.result.top.front().objective);
    return o;
}

Outcome simulation_sanity() {
    Outcome o;
    std::mt19937_64 rng(6);
    std::vector<ProtocolSpec> specs = {fixtures::Reference().spec()};
    for (const auto &shape : kOracleShapes) specs.push_back(brute::random_spec(shape.p, shape.n, shape.k, rng));
    double branch_sum = 0, norm = 0;
    for (auto spec : specs) {
        const int low = spec.n() - spec.k();
        spec.accept.clear();
        for (std::uint64_t s = 0; s < brute::power(spec.p(), low); ++s) {
            spec.accept.push_back(syndrome_from_index(s, spec.p(), low));
        }
        for (int i = 0; i < 3; ++i) {
            double total = 0;
            for (const auto &b : run_protocol(brute::random_distribution(spec.p(), spec.n(), rng), spec)) {
                total += b.accept_prob;
                if (b.defined) norm = std::max(norm, std::abs(b.p_out.total() - 1.0));
            }
            branch_sum = std::max(branch_sum, std::abs(total - 1.0));
        }
    }
    o.require(branch_sum <= kExactTol, "branch probabilities off by " + fmt(branch_sum));
    o.require(norm <= kExactTol, "output distributions off by " + fmt(norm));
    for (std::size_t i = 0; i < specs.size(); ++i) {
        const auto &spec = specs[i];
        const auto unit = best_per_fidelity(yield_curve(spec, {1.0}, 8));
        o.require(std::abs(unit[0].yield - 1.0) <= kExactTol, "F=1 yield " + fmt(unit[0].yield));
        if (spec.p() == 2) {
            for (const auto &pt : yield_curve(spec, {0.25}, 8)) {
                o.require(std::abs(pt.yield) <= kExactTol, "F=0.25 yield " + fmt(pt.yield));
            }
        }
    }
    if (o.pass) o.detail = std::to_string(specs.size()) + " specs";
    return o;
}

Outcome determinism() {
    Outcome o;
    const FullSearch &fs = full_search();
    for (int workers : {4, 8}) {
        SearchConfig cfg = fs.cfg;
        cfg.workers = workers;
        o.require(report_of(cfg, search(cfg)) == fs.report, std::to_string(workers) + " workers differ");
    }
    if (o.pass) o.detail = "1, 4 and 8 workers give identical result files";
    return o;
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
        {"counting identities", counting_identities},
        {"construction reproduction", construction_reproduction},
        {"dense and fast simulation agree", oracle_equivalence},
        {"class invariance and witness separation", classification},
        {"exhaustive [[4,2]] search headline", headline},
        {"simulation sanity", simulation_sanity},
        {"determinism across worker counts", determinism},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception &e) {
            o.pass = false;
            o.detail = std::string("exception: ") + e.what();
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        failed += !o.pass;
        std::ostringstream line;
        line.precision(1);
        line << std::fixed << "criterion " << i + 1 << ' ' << (o.pass ? "PASS" : "FAIL") << "  " << criteria[i].first
             << " [" << secs << " s]: " << o.detail;
        std::cout << line.str() << std::endl;
    }
    return failed == 0 ? 0 : 1;
}
