// SPDX-License-Identifier: Apache-2.0
//
// Copyright 2026 The blindnull Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <fstream>
#include <istream>
#include <sstream>
#include <stdexcept>

#include "blindnull/experiments.hpp"

namespace blindnull::experiments {

namespace {

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos)
        return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& v)
{
    std::size_t used = 0;
    double d = 0.0;
    try {
        d = std::stod(v, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != v.size())
        throw std::invalid_argument("bad number for " + key + ": '" + v + "'");
    return d;
}

long long to_int(const std::string& key, const std::string& v)
{
    std::size_t used = 0;
    long long i = 0;
    try {
        i = std::stoll(v, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != v.size())
        throw std::invalid_argument("bad integer for " + key + ": '" + v + "'");
    return i;
}

bool to_bool(const std::string& key, const std::string& v)
{
    if (v == "true" || v == "1" || v == "yes" || v == "on")
        return true;
    if (v == "false" || v == "0" || v == "no" || v == "off")
        return false;
    throw std::invalid_argument("bad boolean for " + key + ": '" + v + "'");
}

std::vector<double> to_list(const std::string& key, const std::string& v)
{
    std::vector<double> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ','))
        out.push_back(to_double(key, trim(item)));
    if (out.empty())
        throw std::invalid_argument("empty list for " + key);
    return out;
}

} // namespace

ExperimentConfig parse_config(std::istream& in)
{
    ExperimentConfig c;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto h = line.find('#'); h != std::string::npos)
            line.erase(h);
        line = trim(line);
        if (line.empty())
            continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("line " + std::to_string(lineno) + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));

        if (key == "n_t") c.n_t = static_cast<int>(to_int(key, val));
        else if (key == "n_r") c.n_r = static_cast<int>(to_int(key, val));
        else if (key == "trials") c.trials = static_cast<int>(to_int(key, val));
        else if (key == "eta") c.eta_schedule = to_list(key, val);
        else if (key == "eta_db") {
            c.eta_schedule.clear();
            for (double db : to_list(key, val))
                c.eta_schedule.push_back(eta_from_db(db));
        }
        else if (key == "cycles") c.cycles = static_cast<int>(to_int(key, val));
        else if (key == "stopping") c.stopping = to_bool(key, val);
        else if (key == "xi") c.xi = to_double(key, val);
        else if (key == "rc") c.rc = to_bool(key, val);
        else if (key == "detect_rank") c.detect_rank = to_bool(key, val);
        else if (key == "oracle") c.oracle = oracle_kind_from_string(val);
        else if (key == "map") c.map = oracle::map_family_from_string(val);
        else if (key == "power_control") c.power.kind = radiosim::power_control_from_string(val);
        else if (key == "gamma") c.power.gamma_target = to_double(key, val);
        else if (key == "noise") c.measurement.noise_enabled = to_bool(key, val);
        else if (key == "noise_std") c.measurement.noise_std = to_double(key, val);
        else if (key == "N") c.measurement.N = static_cast<int>(to_int(key, val));
        else if (key == "N_prime") c.measurement.N_prime = static_cast<int>(to_int(key, val));
        else if (key == "seed") c.seed = static_cast<std::uint64_t>(to_int(key, val));
        else if (key == "workers") c.workers = static_cast<int>(to_int(key, val));
        else if (key == "out") c.out_dir = val;
        else
            throw std::invalid_argument("line " + std::to_string(lineno) + ": unknown key '" + key + "'");
    }
    if (c.trials < 1)
        throw std::invalid_argument("trials must be >= 1");
    if (c.n_t < 2 || c.n_r < 0 || c.n_r >= c.n_t)
        throw std::invalid_argument("need n_t >= 2 and 0 <= n_r < n_t");
    if (c.cycles < 0)
        throw std::invalid_argument("cycles must be non-negative");
    for (double e : c.eta_schedule)
        if (!(e > 0.0))
            throw std::invalid_argument("eta entries must be positive");
    return c;
}

ExperimentConfig parse_config_file(const std::filesystem::path& path)
{
    std::ifstream f(path);
    if (!f)
        throw std::runtime_error("cannot open config " + path.string());
    return parse_config(f);
}

} // namespace blindnull::experiments
