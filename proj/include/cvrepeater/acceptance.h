// Copyright 2026 The cvrepeater Authors
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

#ifndef CVREPEATER_ACCEPTANCE_H
#define CVREPEATER_ACCEPTANCE_H

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace cvrep {

/// Knobs the acceptance checks read. Defaults reproduce the reference run;
/// tests perturb them as negative controls.
struct AcceptanceFixture {
    double gamma_db_per_km = 0.2;
    std::uint64_t seed = 0x5eed2026ULL;
    std::size_t mc_samples = 1000000;
    std::size_t workers = 0;
};

struct CriterionResult {
    int id = 0;
    std::string name;
    std::string expected;
    std::string got;
    std::string tolerance;
    bool pass = false;
    std::vector<std::uint64_t> seeds;
};

inline constexpr int kAcceptanceCriteria = 12;

CriterionResult run_criterion(int id, const AcceptanceFixture &fixture = {});

/// Runs the listed criteria (all when empty) in id order.
std::vector<CriterionResult> run_acceptance(const AcceptanceFixture &fixture = {}, const std::vector<int> &ids = {});

/// One machine-readable line: tab-separated key=value fields.
std::string format_result(const CriterionResult &r);

}  // namespace cvrep

#endif
