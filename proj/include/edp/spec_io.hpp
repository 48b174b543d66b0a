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

// JSON form of a ProtocolSpec:
//   {"p":2,"n":4,"k":2,"xi":[[...]],"eta_high":[[...]],"xi_high":[[...]],
//    "lambda":[...],"T":[[...]]}
// Rows are 2n integers a_1..a_n b_1..b_n. xi holds the n-k stabilizer
// generators, lambda their eigenvalue labels as phase exponents, T the
// accepted syndrome differences.

#ifndef EDP_SPEC_IO_HPP
#define EDP_SPEC_IO_HPP

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "edp/encoder.hpp"
#include "json.hpp"

namespace edp {

using Json = nlohmann::ordered_json;

namespace detail {

inline Json rows_to_json(const std::vector<GFVector> &rows) {
    Json out = Json::array();
    for (const auto &r : rows) out.push_back(r.coords());
    return out;
}

inline std::vector<GFVector> rows_from_json(const Json &j, int p, int n, const char *field) {
    if (!j.is_array()) throw std::invalid_argument(std::string("spec: '") + field + "' must be a list of rows");
    std::vector<GFVector> out;
    for (const auto &row : j) {
        if (!row.is_array() || static_cast<int>(row.size()) != 2 * n) {
            throw std::invalid_argument(std::string("spec: every row of '") + field + "' needs 2n entries");
        }
        std::vector<int> coords;
        for (const auto &x : row) {
            if (!x.is_number_integer() || x.get<int>() < 0 || x.get<int>() >= p) {
                throw std::invalid_argument(std::string("spec: entries of '") + field + "' must lie in 0..p-1");
            }
            coords.push_back(x.get<int>());
        }
        out.push_back(GFVector::from_coords(p, std::span<const int>(coords)));
    }
    return out;
}

inline int int_field(const Json &j, const char *field) {
    if (!j.contains(field) || !j.at(field).is_number_integer()) {
        throw std::invalid_argument(std::string("spec: missing integer field '") + field + "'");
    }
    return j.at(field).get<int>();
}

}  // namespace detail

inline Json spec_to_json(const ProtocolSpec &spec) {
    Json j;
    j["p"] = spec.p();
    j["n"] = spec.n();
    j["k"] = spec.k();
    j["xi"] = detail::rows_to_json(spec.stabilizer.generators());
    j["eta_high"] = detail::rows_to_json(spec.cls.g);
    j["xi_high"] = detail::rows_to_json(spec.cls.h);
    j["lambda"] = spec.stabilizer.lambda();
    Json t = Json::array();
    for (const auto &s : spec.accept) t.push_back(s);
    j["T"] = t;
    return j;
}

/// Validates shape, stabilizer and class. Missing "lambda" selects the
/// default labels; missing "T" selects {0}.
inline ProtocolSpec spec_from_json(const Json &j) {
    if (!j.is_object()) throw std::invalid_argument("spec: expected a JSON object");
    const int p = detail::int_field(j, "p"), n = detail::int_field(j, "n"), k = detail::int_field(j, "k");
    if (!is_prime(p)) throw std::invalid_argument("spec: p must be prime");
    if (n < 1 || n > kMaxQudits || k < 0 || k > n) throw std::invalid_argument("spec: need 0 <= k <= n <= 8");
    for (const char *field : {"xi", "eta_high", "xi_high"}) {
        if (!j.contains(field)) throw std::invalid_argument(std::string("spec: missing field '") + field + "'");
    }
    auto xi = detail::rows_from_json(j.at("xi"), p, n, "xi");
    auto eta_high = detail::rows_from_json(j.at("eta_high"), p, n, "eta_high");
    auto xi_high = detail::rows_from_json(j.at("xi_high"), p, n, "xi_high");
    if (static_cast<int>(xi.size()) != n - k) throw std::invalid_argument("spec: 'xi' needs n-k rows");
    Stabilizer s = j.contains("lambda") ? Stabilizer(p, n, xi, j.at("lambda").get<std::vector<int>>())
                                        : Stabilizer(p, n, xi);
    std::optional<std::vector<Syndrome>> accept;
    if (j.contains("T")) {
        accept.emplace();
        for (const auto &row : j.at("T")) {
            Syndrome syn = row.get<Syndrome>();
            if (static_cast<int>(syn.size()) != n - k) throw std::invalid_argument("spec: rows of 'T' need n-k entries");
            for (int &x : syn) {
                if (x < 0 || x >= p) throw std::invalid_argument("spec: entries of 'T' must lie in 0..p-1");
            }
            accept->push_back(syn);
        }
    }
    return make_spec(s, make_class(s.subspace(), xi_high, eta_high), accept);
}

/// Single-line canonical text; parse_spec(serialize_spec(s)) == s and
/// serialize_spec(parse_spec(t)) == t for any t produced here.
inline std::string serialize_spec(const ProtocolSpec &spec) { return spec_to_json(spec).dump(); }

inline ProtocolSpec parse_spec(const std::string &text) {
    Json j;
    try {
        j = Json::parse(text);
    } catch (const Json::parse_error &e) {
        throw std::invalid_argument(std::string("spec: malformed JSON: ") + e.what());
    }
    try {
        return spec_from_json(j);
    } catch (const Json::exception &e) {
        throw std::invalid_argument(std::string("spec: ") + e.what());
    }
}

inline ProtocolSpec load_spec(const std::string &path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open spec file: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_spec(buf.str());
}

inline void save_spec(const std::string &path, const ProtocolSpec &spec) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write spec file: " + path);
    out << serialize_spec(spec) << '\n';
}

/// Total-order key of a candidate: canonical basis of C, then the H and G
/// rows, flattened.
inline std::vector<int> spec_key(const ProtocolSpec &spec) {
    std::vector<int> key;
    auto append = [&](const std::vector<GFVector> &rows) {
        for (const auto &r : rows) {
            for (int i = 0; i < r.size(); ++i) key.push_back(r[i]);
        }
    };
    append(spec.stabilizer.subspace().basis());
    append(spec.cls.h);
    append(spec.cls.g);
    return key;
}

}  // namespace edp

#endif  // EDP_SPEC_IO_HPP
