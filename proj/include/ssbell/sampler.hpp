// Copyright 2026 The ssbell Authors
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

#pragma once

// Seeded Monte Carlo generation of measured outcomes xi'.
//
// Generator: std::mt19937_64 (the standard 64-bit Mersenne Twister, whose
// 10000th output from the default seed 5489 is 9981545732273789042). Stream i
// of seed s is seeded with the (i+1)-th SplitMix64 output starting from state
// s. Uniform doubles take the top 53 bits: (x >> 11) * 2^-53. Shots are split
// into contiguous per-stream blocks (the first n % streams streams take one
// extra shot) and concatenated in stream order, so the sequence depends only
// on (seed, stream_count, n).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <ostream>
#include <random>
#include <span>
#include <sstream>
#include <thread>
#include <vector>

#include "ssbell/belltests.hpp"
#include "ssbell/error.hpp"
#include "ssbell/inversion.hpp"
#include "ssbell/outcome.hpp"

namespace ssbell {

inline constexpr double kNegativeProbTol = 1e-10;
inline constexpr double kSamplingSumTol = 1e-6;

struct RngConfig {
    std::uint64_t seed = 0;
    std::size_t stream_count = 1;
};

constexpr std::uint64_t splitmix64_mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// (stream + 1)-th SplitMix64 output from state `seed`.
constexpr std::uint64_t stream_seed(std::uint64_t seed, std::size_t stream) {
    return splitmix64_mix(seed + 0x9E3779B97F4A7C15ULL * (static_cast<std::uint64_t>(stream) + 1));
}

inline double uniform01(std::mt19937_64 &gen) {
    return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

/// Inverse-CDF sampler over the fixed xi' ordering.
class OutcomeSampler {
   public:
    explicit OutcomeSampler(const Distribution16 &probs) {
        double s = 0;
        for (std::size_t k = 0; k < kNumOutcomes; ++k) {
            if (!(probs[k] >= -kNegativeProbTol)) {
                std::ostringstream msg;
                msg << "sampling distribution has entry " << probs[k] << " at " << OutcomeIndex::from_flat(k).str();
                throw InvalidDistribution(msg.str());
            }
            s += std::max(0.0, probs[k]);
        }
        if (!(std::abs(s - 1) <= kSamplingSumTol)) {
            std::ostringstream msg;
            msg.precision(17);
            msg << "sampling distribution sums to " << s;
            throw InvalidDistribution(msg.str());
        }
        double acc = 0;
        for (std::size_t k = 0; k < kNumOutcomes; ++k) {
            double p = std::max(0.0, probs[k]) / s;
            acc += p;
            cdf_[k] = acc;
            if (p > 0) {
                last_positive_ = k;
            }
        }
    }

    OutcomeIndex draw(std::mt19937_64 &gen) const {
        double u = uniform01(gen);
        auto it = std::upper_bound(cdf_.begin(), cdf_.begin() + last_positive_, u);
        return OutcomeIndex::from_flat(static_cast<std::size_t>(it - cdf_.begin()));
    }

   private:
    std::array<double, kNumOutcomes> cdf_{};
    std::size_t last_positive_ = 0;
};

/// Draws n i.i.d. outcomes. Throws InvalidDistribution.
inline std::vector<OutcomeIndex> sample_shots(const Distribution16 &probs, std::size_t n, const RngConfig &rng) {
    if (rng.stream_count == 0) {
        throw OutOfRange("stream_count must be positive");
    }
    OutcomeSampler sampler(probs);
    std::vector<OutcomeIndex> shots(n);
    std::size_t streams = rng.stream_count;
    std::size_t base = n / streams;
    std::size_t extra = n % streams;

    auto fill = [&](std::size_t stream, std::size_t begin, std::size_t count) {
        std::mt19937_64 gen(stream_seed(rng.seed, stream));
        for (std::size_t i = 0; i < count; ++i) {
            shots[begin + i] = sampler.draw(gen);
        }
    };

    if (streams == 1) {
        fill(0, 0, n);
        return shots;
    }
    std::vector<std::thread> workers;
    std::size_t begin = 0;
    for (std::size_t s = 0; s < streams; ++s) {
        std::size_t count = base + (s < extra ? 1 : 0);
        workers.emplace_back(fill, s, begin, count);
        begin += count;
    }
    for (auto &w : workers) {
        w.join();
    }
    return shots;
}

inline Distribution16 empirical_frequencies(std::span<const OutcomeIndex> shots) {
    if (shots.empty()) {
        throw EmptyShotList("empirical frequencies need at least one shot");
    }
    std::array<std::uint64_t, kNumOutcomes> counts{};
    for (const auto &s : shots) {
        ++counts[s.flat()];
    }
    Distribution16 f{};
    double n = static_cast<double>(shots.size());
    for (std::size_t k = 0; k < kNumOutcomes; ++k) {
        f[k] = static_cast<double>(counts[k]) / n;
    }
    return f;
}

struct ShotRecord {
    std::size_t index = 0;
    OutcomeIndex xi_prime;
    double s_single = 0;
    double running_mean_S = 0;
};

inline std::vector<ShotRecord> shot_records(const InversionKernel &kernel, std::span<const OutcomeIndex> shots) {
    Distribution16 table = single_shot_chsh_table(kernel);
    std::vector<ShotRecord> out;
    out.reserve(shots.size());
    double sum = 0;
    for (std::size_t i = 0; i < shots.size(); ++i) {
        double s = table[shots[i].flat()];
        sum += s;
        out.push_back(ShotRecord{i + 1, shots[i], s, sum / static_cast<double>(i + 1)});
    }
    return out;
}

struct ConvergenceReport {
    std::size_t shots = 0;
    double mean_S = 0;
    /// Absent for a single shot.
    std::optional<double> std_dev;
    std::optional<double> std_error;
};

inline ConvergenceReport convergence_report(const InversionKernel &kernel, std::span<const OutcomeIndex> shots) {
    ConvergenceReport r;
    r.shots = shots.size();
    r.mean_S = ensemble_from_shots(kernel, shots);
    if (shots.size() > 1) {
        Distribution16 table = single_shot_chsh_table(kernel);
        double ss = 0;
        for (const auto &s : shots) {
            double d = table[s.flat()] - r.mean_S;
            ss += d * d;
        }
        r.std_dev = std::sqrt(ss / static_cast<double>(shots.size() - 1));
        r.std_error = *r.std_dev / std::sqrt(static_cast<double>(shots.size()));
    }
    return r;
}

/// Formats a real with 17 significant digits.
inline std::string format_real(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline constexpr const char *kShotCsvHeader = "index,x_prime,y_prime,u_prime,v_prime,S_single,running_mean_S";

inline void write_shot_csv(std::ostream &out, std::span<const ShotRecord> records) {
    out << kShotCsvHeader << '\n';
    for (const auto &r : records) {
        out << r.index << ',' << r.xi_prime.x << ',' << r.xi_prime.y << ',' << r.xi_prime.u << ','
            << r.xi_prime.v << ',' << format_real(r.s_single) << ',' << format_real(r.running_mean_S) << '\n';
    }
}

}  // namespace ssbell
