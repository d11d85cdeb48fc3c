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

#include "faslab/serialize.hpp"

#include <charconv>
#include <stdexcept>
#include <system_error>

namespace faslab::io
{

namespace
{

json complex_to_json(const cplx& z)
{
    return json::array({z.real(), z.imag()});
}

cplx complex_from_json(const json& j)
{
    if (!j.is_array() || j.size() != 2)
        throw std::invalid_argument("serialize: complex values must be [re, im] pairs");
    return {j.at(0).get<double>(), j.at(1).get<double>()};
}

json complex_vector_to_json(const CVector& v)
{
    json out = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i)
        out.push_back(complex_to_json(v(i)));
    return out;
}

CVector complex_vector_from_json(const json& j)
{
    if (!j.is_array())
        throw std::invalid_argument("serialize: expected an array of complex pairs");
    CVector v(static_cast<Eigen::Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i)
        v(static_cast<Eigen::Index>(i)) = complex_from_json(j.at(i));
    return v;
}

} // namespace

json to_json(const SystemConfig& config)
{
    return json{{"M", config.M},
                {"K", config.K},
                {"aperture_wavelengths", config.aperture_wavelengths},
                {"bandwidth_hz", config.bandwidth_hz},
                {"carrier_hz", config.carrier_hz},
                {"tau_max_s", config.tau_max_s},
                {"c", config.c}};
}

SystemConfig config_from_json(const json& j)
{
    SystemConfig config;
    config.M = j.at("M").get<int>();
    config.K = j.at("K").get<int>();
    config.aperture_wavelengths = j.at("aperture_wavelengths").get<double>();
    config.bandwidth_hz = j.at("bandwidth_hz").get<double>();
    config.carrier_hz = j.at("carrier_hz").get<double>();
    config.tau_max_s = j.at("tau_max_s").get<double>();
    if (j.contains("c"))
        config.c = j.at("c").get<double>();
    config.validate();
    return config;
}

json to_json(const PathSet& paths)
{
    json alphas = json::array();
    for (const cplx& a : paths.alphas)
        alphas.push_back(complex_to_json(a));
    return json{{"alphas", alphas}, {"thetas", paths.thetas}, {"taus", paths.taus}};
}

PathSet paths_from_json(const json& j)
{
    PathSet paths;
    for (const json& a : j.at("alphas"))
        paths.alphas.push_back(complex_from_json(a));
    paths.thetas = j.at("thetas").get<std::vector<double>>();
    paths.taus = j.at("taus").get<std::vector<double>>();
    if (paths.thetas.size() != paths.alphas.size() || paths.taus.size() != paths.alphas.size())
        throw std::invalid_argument("serialize: path arrays disagree in length");
    return paths;
}

json to_json(const op::SamplingPlan& plan)
{
    return json{{"antenna_indices", plan.antenna_indices},
                {"pilot_indices", plan.pilot_indices},
                {"pilot_symbols", complex_vector_to_json(plan.pilot_symbols)}};
}

op::SamplingPlan plan_from_json(const json& j)
{
    op::SamplingPlan plan;
    plan.antenna_indices = j.at("antenna_indices").get<std::vector<int>>();
    plan.pilot_indices = j.at("pilot_indices").get<std::vector<int>>();
    plan.pilot_symbols = complex_vector_from_json(j.at("pilot_symbols"));
    if (plan.pilot_symbols.size() != static_cast<Eigen::Index>(plan.pilot_indices.size()))
        throw std::invalid_argument("serialize: one pilot symbol per pilot index required");
    return plan;
}

json to_json(const leakage::LeakageParams& params)
{
    return json{{"threshold", params.threshold}, {"gamma_tau", params.gamma_tau},
                {"gamma_k", params.gamma_k},    {"gamma", params.gamma},
                {"delta_tau", params.delta_tau}, {"delta_k", params.delta_k}};
}

json to_json(const recovery::RecoverySolution& solution)
{
    return json{{"support", solution.state.support},
                {"iterations", solution.state.iterations},
                {"residual_norm", solution.state.residual_history.empty()
                                      ? 0.0
                                      : solution.state.residual_history.back()},
                {"residual_history", solution.state.residual_history},
                {"support_saturated", solution.state.support_saturated},
                {"relative_error", solution.relative_error}};
}

json to_json(const eq::EqualizationSolution& solution)
{
    return json{{"selected", solution.selected},
                {"objective", solution.objective},
                {"certificate", eq::to_string(solution.certificate)},
                {"nodes_explored", solution.nodes_explored},
                {"wall_time_s", solution.wall_time_s},
                {"separation_fallback", solution.separation_fallback}};
}

std::string format_double(double value)
{
    char buffer[64];
    const std::to_chars_result res = std::to_chars(buffer, buffer + sizeof(buffer), value);
    if (res.ec != std::errc{})
        throw std::runtime_error("format_double: conversion failed");
    return std::string(buffer, res.ptr);
}

namespace
{

std::string escape_cell(const std::string& cell)
{
    if (cell.find_first_of(",\"\n") == std::string::npos)
        return cell;
    std::string out = "\"";
    for (char c : cell)
    {
        if (c == '"')
            out += '"';
        out += c;
    }
    out += '"';
    return out;
}

} // namespace

CsvWriter::CsvWriter(const std::string& path, const std::vector<std::string>& header)
    : stream_(path, std::ios::binary), width_(header.size())
{
    if (!stream_)
        throw std::runtime_error("CsvWriter: cannot open " + path);
    if (header.empty())
        throw std::invalid_argument("CsvWriter: empty header");
    row(header);
}

void CsvWriter::row(const std::vector<std::string>& cells)
{
    if (cells.size() != width_)
        throw std::invalid_argument("CsvWriter: row width does not match the header");
    for (std::size_t i = 0; i < cells.size(); ++i)
    {
        if (i > 0)
            stream_ << ',';
        stream_ << escape_cell(cells[i]);
    }
    stream_ << '\n';
    if (!stream_)
        throw std::runtime_error("CsvWriter: write failed");
}

void write_complex_matrix_csv(const std::string& path, const CMatrix& matrix)
{
    std::ofstream stream(path, std::ios::binary);
    if (!stream)
        throw std::runtime_error("write_complex_matrix_csv: cannot open " + path);
    for (Eigen::Index r = 0; r < matrix.rows(); ++r)
    {
        for (Eigen::Index c = 0; c < matrix.cols(); ++c)
        {
            if (c > 0)
                stream << ',';
            stream << '"' << format_double(matrix(r, c).real()) << ','
                   << format_double(matrix(r, c).imag()) << '"';
        }
        stream << '\n';
    }
    if (!stream)
        throw std::runtime_error("write_complex_matrix_csv: write failed");
}

} // namespace faslab::io
