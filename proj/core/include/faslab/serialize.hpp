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

#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "faslab/equalization.hpp"
#include "faslab/leakage.hpp"
#include "faslab/operators.hpp"
#include "faslab/recovery.hpp"
#include "faslab/types.hpp"

namespace faslab::io
{

using json = nlohmann::json;

/*!
 * JSON codecs. Complex scalars travel as [re, im] pairs; indices stay
 * 0-based; every decoder validates through the corresponding type's own
 * validation where one exists and throws std::invalid_argument on malformed
 * input.
 */
json to_json(const SystemConfig& config);
SystemConfig config_from_json(const json& j);

json to_json(const PathSet& paths);
PathSet paths_from_json(const json& j);

json to_json(const op::SamplingPlan& plan);
op::SamplingPlan plan_from_json(const json& j);

json to_json(const leakage::LeakageParams& params);

json to_json(const recovery::RecoverySolution& solution);
json to_json(const eq::EqualizationSolution& solution);

/*!
 * Shortest decimal text that parses back to exactly the same double
 * (round-trip formatting); locale-independent, "." decimal point.
 */
std::string format_double(double value);

/*!
 * Minimal CSV emitter: comma separator, "\n" line ends, cells quoted only
 * when they contain a comma, quote or newline. All numeric cells go through
 * format_double, so files round-trip and never depend on the locale.
 */
class CsvWriter
{
  public:
    CsvWriter(const std::string& path, const std::vector<std::string>& header);

    void row(const std::vector<std::string>& cells);

    static std::string cell(double value) { return format_double(value); }
    static std::string cell(int value) { return std::to_string(value); }
    static std::string cell(long long value) { return std::to_string(value); }
    static std::string cell(std::uint64_t value) { return std::to_string(value); }
    static std::string cell(const std::string& value) { return value; }

  private:
    std::ofstream stream_;
    std::size_t width_ = 0;
};

/*!
 * Dumps a complex matrix as CSV, one matrix row per line, each cell the
 * quoted pair "re,im" in round-trip precision.
 */
void write_complex_matrix_csv(const std::string& path, const CMatrix& matrix);

} // namespace faslab::io
