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

#ifndef CVREPEATER_PROTOCOL_MC_H
#define CVREPEATER_PROTOCOL_MC_H

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace cvrep {

/// Monte Carlo simulation of one GKP-TMS encode/transmit/decode round at the
/// displacement level (q quadrature only; p is identical by symmetry).
struct McConfig {
    std::size_t n_samples = 1000000;
    std::uint64_t seed = 0;
    double sigma2 = 0.05;
    double gain = 1.0;
    double sigma_G = 0.0;

    static constexpr std::size_t kMinReportedSamples = 10000;

    void validate() const;
};

struct VarianceEstimate {
    std::size_t n = 0;
    double mean = 0.0;
    double variance = 0.0;
    /// Standard error of `variance` from the fourth central moment.
    double standard_error = 0.0;
    double mean_standard_error = 0.0;
};

/// Standard normal draws by Box–Muller over a 53-bit uniform stream.
class NormalStream {
   public:
    explicit NormalStream(std::uint64_t seed);
    double next();

   private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

/// Seed of the independent substream `index` derived from `seed` (SplitMix64).
std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t index);

/// Samples per substream; fixes the result independently of worker count.
inline constexpr std::size_t kMcChunkSize = 1 << 16;

/// Residual errors ξ_{q,1} − ξ̄_{q,1}, one per sample, in sample order.
std::vector<double> sample_logical_error(const McConfig &cfg, std::size_t workers = 0);

VarianceEstimate summarize(std::span<const double> samples);

VarianceEstimate estimate_variance(const McConfig &cfg, std::size_t workers = 0);

}  // namespace cvrep

#endif
