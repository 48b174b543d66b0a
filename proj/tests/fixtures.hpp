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

// The four-qubit reference protocol used throughout the tests.

#ifndef EDP_TESTS_FIXTURES_HPP
#define EDP_TESTS_FIXTURES_HPP

#include "edp/edp.hpp"

namespace fixtures {

inline edp::GFVector v2(const char *s) { return edp::GFVector::parse(2, s); }

struct Reference {
    edp::GFVector xi1 = v2("1111|0000"), xi2 = v2("0000|1111"), xi3 = v2("1100|0000"), xi4 = v2("1010|0000");
    edp::GFVector eta1 = v2("0000|1110"), eta2 = v2("1110|0000"), eta3 = v2("0000|1010"), eta4 = v2("1010|1100");

    edp::Stabilizer stabilizer() const { return edp::Stabilizer(2, 4, {xi1, xi2}); }
    edp::EncodingClass cls() const { return edp::make_class(stabilizer().subspace(), {xi3, xi4}, {eta3, eta4}); }
    edp::ProtocolSpec spec() const { return edp::make_spec(stabilizer(), cls()); }

    /// The listed vectors taken verbatim. eta_1 and eta_2 are not orthogonal,
    /// so this extension only serves operator-table rendering.
    edp::EncoderParams listed_params() const {
        edp::EncoderParams params;
        params.p = 2;
        params.k = 2;
        params.ext.xi = {xi1, xi2, xi3, xi4};
        params.ext.eta = {eta1, eta2, eta3, eta4};
        params.lambda = stabilizer().lambda();
        params.theta_x.assign(4, 0);
        params.theta_z_high.assign(2, std::nullopt);
        return params;
    }

    /// Same high vectors with eta_1, eta_2 re-solved into a hyperbolic basis.
    edp::EncoderParams params() const {
        edp::EncoderParams params = listed_params();
        params.ext = edp::complete_hyperbolic(2, 4, {xi1, xi2}, {xi3, xi4}, {eta3, eta4});
        return params;
    }
};

}  // namespace fixtures

#endif  // EDP_TESTS_FIXTURES_HPP
