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

// Command-line front end. run_cli is the whole program; main only forwards
// argv so tests can drive every subcommand in-process.

#ifndef EDP_TOOLS_EDP_CLI_HPP
#define EDP_TOOLS_EDP_CLI_HPP

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "edp/edp.hpp"

namespace edp::cli {

enum ExitCode : int { kOk = 0, kVerifyFailed = 1, kUsage = 2, kBudget = 3 };

/// Raised when a subcommand finds its input unusable.
class UsageError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

struct Options {
    int n = 4, k = 2, p = 2;
    std::optional<double> fidelity;
    double f_min = 0.60, f_max = 0.95, f_step = 0.05;
    int rounds = 8;
    int workers = 1;
    std::uint64_t seed = 1;
    std::size_t top = 0;
    std::string out;
    std::vector<std::string> specs;
    std::uint64_t max_candidates = SearchConfig{}.max_candidates;
    std::string objective = "yield_at_F";
    bool symmetry = false;
    std::string checkpoint;
    int inputs = 5;
};

namespace detail {

inline std::vector<double> grid(const Options &o) {
    if (o.fidelity) return {*o.fidelity};
    if (!(o.f_step > 0) || o.f_min > o.f_max || o.f_min < 0 || o.f_max > 1) {
        throw UsageError("need 0 <= f-min <= f-max <= 1 and f-step > 0");
    }
    return fidelity_grid(o.f_min, o.f_max, o.f_step);
}

inline ProtocolSpec load_one(const Options &o) {
    if (o.specs.size() != 1) throw UsageError("expected exactly one --spec");
    return load_spec(o.specs.front());
}

/// Writes to --out when given, otherwise to `fallback`.
template <typename Fn>
void emit(const Options &o, std::ostream &fallback, Fn &&write) {
    if (o.out.empty()) {
        write(fallback);
        return;
    }
    std::ofstream file(o.out);
    if (!file) throw UsageError("cannot write " + o.out);
    write(file);
}

inline bool dense_feasible(int p, int n) { return ipow(p, n) <= static_cast<std::uint64_t>(kMaxDenseDim); }

inline double branch_deviation(const std::vector<BranchResult> &a, const std::vector<BranchResult> &b) {
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

inline BellDiagonal random_input(int p, int m, std::mt19937_64 &rng) {
    BellDiagonal d(p, m);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double total = 0;
    for (auto &x : d.probs) total += (x = u(rng));
    for (auto &x : d.probs) x /= total;
    return d;
}

inline std::string stem(const std::string &path) { return std::filesystem::path(path).stem().string(); }

inline void print_operators(std::ostream &out, const ProtocolSpec &spec) {
    out << "stabilizer:";
    for (const auto &g : spec.stabilizer.generators()) out << ' ' << to_string(PauliElement(g));
    out << '\n';
    if (!dense_feasible(spec.p(), spec.n())) return;
    EncoderParams params = default_params(spec);
    ResolvedPhases phases = resolve_theta_z(params);
    out << "encoded X:";
    for (int i = 0; i < spec.n(); ++i) out << ' ' << to_string(encoded_x(params, i));
    out << "\nencoded Z:";
    for (int i = 0; i < spec.n(); ++i) out << ' ' << to_string(encoded_z(params, phases.theta_z, i));
    out << '\n';
}

inline int cmd_count(const Options &o, std::ostream &out) {
    if (!is_prime(o.p) || o.n < 1 || o.n > kMaxQudits || o.k < 0 || o.k > o.n) {
        throw UsageError("need prime p and 0 <= k <= n <= 8");
    }
    out << "n=" << o.n << " k=" << o.k << " p=" << o.p << '\n';
    out << "stabilizers " << selforth_count(o.n, o.k, o.p).str() << '\n';
    out << "classes_per_stabilizer " << sp_order(o.k, o.p).str() << '\n';
    out << "candidates " << candidate_count(o.n, o.k, o.p).str() << '\n';
    out << "reduction_factor " << reduction_factor(o.n, o.k, o.p).str() << '\n';
    return kOk;
}

inline int cmd_enumerate(const Options &o, std::ostream &out) {
    if (!is_prime(o.p) || !(o.n > o.k && o.k >= 1) || o.n > kMaxQudits) {
        throw UsageError("need prime p and 1 <= k < n <= 8");
    }
    const BigInt total = candidate_count(o.n, o.k, o.p);
    if (o.top == 0 && total > BigInt(o.max_candidates)) {
        throw BudgetExceeded("enumerate: " + total.str() + " candidates exceed --max-candidates");
    }
    emit(o, out, [&](std::ostream &dst) {
        std::size_t written = 0;
        for (const auto &c : collect_self_orthogonal(o.n, o.k, o.p)) {
            StabilizerContext ctx(c, o.k);
            for_each_hyperbolic_basis_coords(ctx.coords(), [&](auto xs, auto ys) {
                dst << serialize_spec(ctx.spec(xs, ys)) << '\n';
                return o.top == 0 || ++written < o.top;
            });
            if (o.top != 0 && written >= o.top) break;
        }
    });
    return kOk;
}

inline int cmd_verify(const Options &o, std::ostream &out, std::ostream &err) {
    if (o.specs.size() != 1) throw UsageError("expected exactly one --spec");
    std::optional<ProtocolSpec> parsed;
    try {
        parsed = load_spec(o.specs.front());
    } catch (const std::invalid_argument &e) {
        err << e.what() << '\n';
        out << "result: fail\n";
        return kVerifyFailed;
    }
    const ProtocolSpec &spec = *parsed;
    const int p = spec.p(), n = spec.n(), k = spec.k();
    if (!dense_feasible(p, n)) throw UsageError("spec too large for the dense check");
    bool ok = true;
    auto report = [&](const std::string &name, bool pass, const std::string &detail = "") {
        out << name << ": " << (pass ? "pass" : "fail") << detail << '\n';
        ok = ok && pass;
    };
    DenseEncoder enc = build_encoder(default_params(spec));
    report("unitarity", is_unitary(enc.u));
    report("conjugation_law", satisfies_conjugation_law(enc));

    double bell_dev = 0;
    for (std::uint64_t e = 0; e < ipow(p, n - k); ++e) {
        for (std::uint64_t w = 0; w < ipow(p, 2 * k); ++w) {
            const double overlap =
                encoded_bell_overlap(enc, syndrome_from_index(e, p, n - k), GFVector::from_index(p, k, w));
            bell_dev = std::max(bell_dev, std::abs(1.0 - overlap));
        }
    }
    report("encoded_bell", bell_dev <= kDenseTolerance, " (max deviation " + format_real(bell_dev) + ")");

    std::vector<BellDiagonal> inputs;
    inputs.push_back(werner_input(o.fidelity.value_or(0.85), n, p));
    std::mt19937_64 rng(o.seed);
    for (int i = 0; i < o.inputs; ++i) inputs.push_back(random_input(p, n, rng));
    double dense_dev = 0, coherence = 0;
    for (const auto &in : inputs) {
        DenseRun run = run_protocol_dense(in, spec, enc);
        dense_dev = std::max(dense_dev, branch_deviation(run.branches, run_protocol(in, spec)));
        coherence = std::max(coherence, run.max_coherence);
    }
    report("dense_vs_fast", dense_dev <= kDenseTolerance && coherence <= kDenseTolerance,
           " (" + std::to_string(inputs.size()) + " inputs, max deviation " + format_real(dense_dev) +
               ", max coherence " + format_real(coherence) + ")");
    out << "result: " << (ok ? "pass" : "fail") << '\n';
    return ok ? kOk : kVerifyFailed;
}

inline int cmd_simulate(const Options &o, std::ostream &out) {
    const ProtocolSpec spec = load_one(o);
    const double f = o.fidelity.value_or(0.85);
    if (!(f >= 0 && f <= 1)) throw UsageError("fidelity must lie in [0, 1]");
    if (o.rounds < 0) throw UsageError("rounds must be nonnegative");
    const auto branches = run_protocol(werner_input(f, spec.n(), spec.p()), spec);
    const auto curve = yield_curve(spec, {f}, o.rounds);
    emit(o, out, [&](std::ostream &dst) {
        dst << "syndrome,accept_prob,output_fidelity\n";
        for (const auto &b : branches) {
            for (std::size_t i = 0; i < b.syndrome.size(); ++i) dst << (i ? "." : "") << b.syndrome[i];
            dst << ',' << format_real(b.accept_prob) << ',' << format_real(b.defined ? b.p_out.probs[0] : 0.0)
                << '\n';
        }
        write_yield_csv(dst, curve);
    });
    return kOk;
}

inline int cmd_curve(const Options &o, std::ostream &out) {
    const ProtocolSpec spec = load_one(o);
    if (o.rounds < 0) throw UsageError("rounds must be nonnegative");
    const auto best = best_per_fidelity(yield_curve(spec, grid(o), o.rounds));
    emit(o, out, [&](std::ostream &dst) { write_yield_csv(dst, best); });
    return kOk;
}

inline int cmd_compare(const Options &o, std::ostream &out) {
    if (o.specs.empty()) throw UsageError("expected at least one --spec");
    if (o.rounds < 0) throw UsageError("rounds must be nonnegative");
    const auto fs = grid(o);
    std::vector<std::vector<YieldPoint>> curves;
    std::optional<int> p;
    for (const auto &path : o.specs) {
        ProtocolSpec spec = load_spec(path);
        if (p && *p != spec.p()) throw UsageError("compare: specs over different fields");
        p = spec.p();
        curves.push_back(best_per_fidelity(yield_curve(spec, fs, o.rounds)));
    }
    emit(o, out, [&](std::ostream &dst) {
        dst << 'F';
        for (const auto &path : o.specs) dst << ",yield_" << stem(path);
        dst << '\n';
        for (std::size_t i = 0; i < fs.size(); ++i) {
            dst << format_real(fs[i]);
            for (const auto &c : curves) dst << ',' << format_real(c[i].yield);
            dst << '\n';
        }
    });
    return kOk;
}

inline int cmd_search(const Options &o, std::ostream &out) {
    SearchConfig cfg;
    cfg.n = o.n;
    cfg.k = o.k;
    cfg.p = o.p;
    cfg.f_eval = fidelity_grid(o.f_min, o.f_max, o.f_step);
    cfg.f_star = o.fidelity.value_or(0.85);
    cfg.r_max = o.rounds;
    cfg.objective = o.objective;
    cfg.workers = o.workers;
    cfg.top = o.top == 0 ? SearchConfig{}.top : o.top;
    cfg.symmetry = o.symmetry;
    cfg.max_candidates = o.max_candidates;
    cfg.checkpoint = o.checkpoint;
    const SearchResult res = search(cfg);
    if (!o.out.empty()) {
        std::ofstream file(o.out);
        if (!file) throw UsageError("cannot write " + o.out);
        write_results(file, cfg, res);
    }
    out << "evaluated " << res.evaluated << " candidates over " << res.stabilizers << " stabilizers\n";
    if (!res.top.empty()) {
        const RankedProtocol &best = res.top.front();
        out << "best " << cfg.objective << " = " << format_real(best.objective) << '\n';
        out << serialize_spec(best.spec) << '\n';
        print_operators(out, best.spec);
    }
    if (o.out.empty()) write_results(out, cfg, res);
    return kOk;
}

}  // namespace detail

/// Runs one invocation; args excludes the program name.
inline int run_cli(const std::vector<std::string> &args, std::ostream &out = std::cout,
                   std::ostream &err = std::cerr) {
    CLI::App app{"Search and analysis of stabilizer entanglement distillation protocols", "edp"};
    app.require_subcommand(1, 1);
    Options o;

    auto shape = [&](CLI::App *sub) {
        sub->add_option("-n", o.n, "Number of pairs per block")->capture_default_str();
        sub->add_option("-k", o.k, "Number of output pairs")->capture_default_str();
        sub->add_option("-p", o.p, "Prime dimension")->capture_default_str();
    };
    auto fgrid = [&](CLI::App *sub) {
        sub->add_option("--f-min", o.f_min, "Smallest input fidelity")->capture_default_str();
        sub->add_option("--f-max", o.f_max, "Largest input fidelity")->capture_default_str();
        sub->add_option("--f-step", o.f_step, "Fidelity step")->capture_default_str();
        sub->add_option("--rounds", o.rounds, "Largest round count")->capture_default_str();
    };
    auto out_opt = [&](CLI::App *sub) { sub->add_option("--out", o.out, "Output file (default stdout)"); };
    auto spec_opt = [&](CLI::App *sub, const char *help) {
        sub->add_option("--spec", o.specs, help)->required()->check(CLI::ExistingFile);
    };

    auto *count = app.add_subcommand("count", "Print candidate counts");
    shape(count);

    auto *enumerate = app.add_subcommand("enumerate", "Print every candidate spec, one JSON line each");
    shape(enumerate);
    enumerate->add_option("--top", o.top, "Stop after this many specs (0 = all)");
    enumerate->add_option("--max-candidates", o.max_candidates, "Refuse larger spaces unless --top is set");
    out_opt(enumerate);

    auto *verify = app.add_subcommand("verify", "Check a spec against the dense simulation");
    spec_opt(verify, "Spec file");
    verify->add_option("--fidelity", o.fidelity, "Werner input fidelity (default 0.85)");
    verify->add_option("--seed", o.seed, "Seed for the random inputs")->capture_default_str();
    verify->add_option("--inputs", o.inputs, "Number of random inputs")->capture_default_str();

    auto *simulate = app.add_subcommand("simulate", "One round on a Werner input, then yields per round count");
    spec_opt(simulate, "Spec file");
    simulate->add_option("--fidelity", o.fidelity, "Input fidelity (default 0.85)");
    simulate->add_option("--rounds", o.rounds, "Largest round count")->capture_default_str();
    out_opt(simulate);

    auto *curve = app.add_subcommand("curve", "Best yield per fidelity for one spec (CSV)");
    spec_opt(curve, "Spec file");
    curve->add_option("--fidelity", o.fidelity, "Single fidelity instead of a grid");
    fgrid(curve);
    out_opt(curve);

    auto *compare = app.add_subcommand("compare", "Best yield per fidelity for several specs (CSV)");
    spec_opt(compare, "Spec files");
    compare->add_option("--fidelity", o.fidelity, "Single fidelity instead of a grid");
    fgrid(compare);
    out_opt(compare);

    auto *search_cmd = app.add_subcommand("search", "Exhaustive search over all candidates");
    shape(search_cmd);
    fgrid(search_cmd);
    search_cmd->add_option("--fidelity", o.fidelity, "Fidelity of the yield objective (default 0.85)");
    search_cmd->add_option("--workers", o.workers, "Worker threads")->capture_default_str();
    search_cmd->add_option("--top", o.top, "Number of ranked protocols kept (default 100)");
    search_cmd->add_option("--objective", o.objective, "yield_at_F or dominance_count")->capture_default_str();
    search_cmd->add_flag("--symmetry", o.symmetry, "Evaluate one stabilizer per block-permutation orbit");
    search_cmd->add_option("--max-candidates", o.max_candidates, "Abort larger spaces")->capture_default_str();
    search_cmd->add_option("--checkpoint", o.checkpoint, "Resumable progress log");
    search_cmd->add_option("--seed", o.seed, "Accepted for uniformity; the search is deterministic");
    out_opt(search_cmd);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp &e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError &e) {
        app.exit(e, out, err);
        return kUsage;
    }

    try {
        if (count->parsed()) return detail::cmd_count(o, out);
        if (enumerate->parsed()) return detail::cmd_enumerate(o, out);
        if (verify->parsed()) return detail::cmd_verify(o, out, err);
        if (simulate->parsed()) return detail::cmd_simulate(o, out);
        if (curve->parsed()) return detail::cmd_curve(o, out);
        if (compare->parsed()) return detail::cmd_compare(o, out);
        return detail::cmd_search(o, out);
    } catch (const BudgetExceeded &e) {
        err << "error: " << e.what() << '\n';
        return kBudget;
    } catch (const std::exception &e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    }
}

}  // namespace edp::cli

#endif  // EDP_TOOLS_EDP_CLI_HPP
