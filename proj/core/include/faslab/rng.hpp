// SPDX-License-Identifier: Apache-2.0
//
// faslab - simulation and algorithm laboratory for wideband fluid-antenna receivers
// Copyright (C) 2026 the faslab contributors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <initializer_list>
#include <numbers>
#include <random>
#include <vector>

namespace faslab
{

/*!
 * One splitmix64 step (Steele/Lea/Flood mixing constants). Used both as a
 * stand-alone mixer and to fan a single experiment seed out into independent
 * per-trial / per-purpose streams.
 */
inline std::uint64_t splitmix64_next(std::uint64_t& state)
{
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/*!
 * Derives a child seed from a master seed and a path of stream labels
 * (trial index, purpose tag, ...). Each label is absorbed through a full
 * splitmix64 round, so (seed, i) and (seed, j) streams are uncorrelated for
 * i != j and the whole fan-out is reproducible from the single master seed.
 */
inline std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> path)
{
    std::uint64_t s = master;
    std::uint64_t out = splitmix64_next(s);
    for (std::uint64_t label : path)
    {
        s = out ^ (label + 0x9e3779b97f4a7c15ULL);
        out = splitmix64_next(s);
    }
    return out;
}

/*!
 * Deterministic random source: a mt19937_64 engine (whose output sequence is
 * fixed by the standard) with hand-rolled uniform / Gaussian / subset
 * transforms, so every drawn value is identical across platforms and
 * compilers. Not thread-safe; use one instance per worker stream.
 */
class Rng
{
  public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    //! Uniform double in [0, 1) with 53 random bits.
    double uniform01()
    {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    //! Standard real normal via Box-Muller (the spare deviate is cached).
    double normal()
    {
        if (has_spare_)
        {
            has_spare_ = false;
            return spare_;
        }
        // u in (0, 1] so the logarithm stays finite
        double u = 1.0 - uniform01();
        double v = uniform01();
        double r = std::sqrt(-2.0 * std::log(u));
        double phi = 2.0 * std::numbers::pi * v;
        spare_ = r * std::sin(phi);
        has_spare_ = true;
        return r * std::cos(phi);
    }

    //! Circularly-symmetric complex normal with unit variance E|z|^2 = 1.
    std::complex<double> complex_normal()
    {
        const double s = 1.0 / std::numbers::sqrt2;
        return {normal() * s, normal() * s};
    }

    //! Uniform integer in [0, n), unbiased by rejection.
    std::uint64_t uniform_below(std::uint64_t n)
    {
        if (n == 0)
            return 0;
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t x;
        do
        {
            x = engine_();
        } while (x >= limit);
        return x % n;
    }

    //! Sorted k-element subset of {0, ..., n-1}, drawn uniformly (Floyd's method).
    std::vector<int> sample_distinct(int n, int k)
    {
        std::vector<int> chosen;
        chosen.reserve(static_cast<std::size_t>(k));
        std::vector<bool> in(static_cast<std::size_t>(n), false);
        for (int j = n - k; j < n; ++j)
        {
            int t = static_cast<int>(uniform_below(static_cast<std::uint64_t>(j) + 1));
            if (in[static_cast<std::size_t>(t)])
                t = j;
            in[static_cast<std::size_t>(t)] = true;
            chosen.push_back(t);
        }
        std::sort(chosen.begin(), chosen.end());
        return chosen;
    }

    std::uint64_t raw() { return engine_(); }

  private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

} // namespace faslab
