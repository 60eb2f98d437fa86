// SPDX-License-Identifier: Apache-2.0
//
// risloc: positioning with large reconfigurable intelligent surfaces as anchors
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

#include "risloc/scenario.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "risloc/errors.hpp"
#include "risloc/rng.hpp"

namespace risloc
{

using json = nlohmann::ordered_json;

std::vector<double> AxisSpec::samples() const
{
    std::vector<double> out(count);
    for (std::size_t i = 0; i < count; ++i)
        out[i] = count == 1 ? min
                            : min + (max - min) * static_cast<double>(i) /
                                  static_cast<double>(count - 1);
    return out;
}

double Scenario::noise_variance() const
{
    return pilots.tx_power * std::pow(10.0, -snr_db / 10.0);
}

RisSegment Scenario::segment(std::size_t r) const
{
    const RisSpec &spec = ris.at(r);
    return make_ris_segment(spec.origin, spec.slope, spec.length_pixels,
                            spec.pixel_spacing, spec.side);
}

BsLink Scenario::link(std::size_t r) const
{
    const RisSpec &spec = ris.at(r);
    BsLink link = make_bs_link(segment(r), spec.bs.position,
                               spec.bs.pathloss.value_or(cplx{1.0, 0.0}));
    if (spec.bs.first_pixel_delay)
        link.first_pixel_delay = *spec.bs.first_pixel_delay;
    return link;
}

PilotGrid Scenario::pilot_grid() const
{
    return make_pilot_grid(pilots.f_start_hz, pilots.f_stop_hz, pilots.f_count,
                           pilots.t_span_s, pilots.t_count, pilots.tx_power);
}

std::uint64_t Scenario::profile_seed(std::size_t r) const
{
    const RisSpec &spec = ris.at(r);
    return spec.seed ? *spec.seed : derive_seed(seed, 1, r);
}

RisProfile Scenario::profile_for(std::size_t r) const
{
    return make_profile(ris.at(r).profile, ris.at(r).length_pixels,
                        profile_seed(r));
}

void Scenario::validate(bool positioning) const
{
    if (ris.empty())
        throw ValidationError("scenario: at least one RIS is required");
    for (std::size_t r = 0; r < ris.size(); ++r)
    {
        const std::string prefix = "scenario: ris[" + std::to_string(r) + "].";
        const RisSpec &s = ris[r];
        if (s.length_pixels < 1)
            throw ValidationError(prefix + "length_pixels must be >= 1");
        if (!(s.pixel_spacing > 0.0))
            throw ValidationError(prefix + "pixel_spacing must be > 0");
        if (s.side != 1 && s.side != -1)
            throw ValidationError(prefix + "side must be +1 or -1");
        if (!std::isfinite(s.slope))
            throw ValidationError(prefix + "slope must be finite");
        if (s.bs.first_pixel_delay && *s.bs.first_pixel_delay < 0.0)
            throw ValidationError(prefix + "bs.first_pixel_delay must be >= 0");
        segment(r); // delegates the segment invariants
    }
    if (!(pilots.f_count >= 1) || !(pilots.t_count >= 1))
        throw ValidationError("scenario: pilots.f_count and t_count must be >= 1");
    if (!(pilots.f_stop_hz > pilots.f_start_hz) && pilots.f_count > 1)
        throw ValidationError("scenario: pilots.f_stop_hz must exceed f_start_hz");
    if (!(pilots.f_start_hz > 0.0))
        throw ValidationError("scenario: pilots.f_start_hz must be > 0");
    if (!(pilots.t_span_s > 0.0) && pilots.t_count > 1)
        throw ValidationError("scenario: pilots.t_span_s must be > 0");
    if (!(pilots.tx_power > 0.0))
        throw ValidationError("scenario: pilots.tx_power must be > 0");
    if (!(speed_mps > 0.0))
        throw ValidationError("scenario: motion.speed_mps must be > 0");
    if (grid.x.count < 1 || grid.y.count < 1)
        throw ValidationError("scenario: grid counts must be >= 1");
    if (!(grid.x.max >= grid.x.min) || !(grid.y.max >= grid.y.min))
        throw ValidationError("scenario: grid ranges must be non-empty");

    if (positioning)
    {
        if (ris.size() < 2)
            throw ValidationError(
                "scenario: positioning requires at least two RISs");
        bool distinct = false;
        for (std::size_t r = 1; r < ris.size(); ++r)
            if (std::abs(ris[r].slope - ris[0].slope) > 1e-9)
                distinct = true;
        if (!distinct)
            throw ValidationError(
                "scenario: positioning requires two non-parallel RISs");
    }
}

namespace
{

Vec2 parse_vec2(const json &j, const std::string &where)
{
    if (!j.is_array() || j.size() != 2)
        throw ValidationError("scenario: " + where + " must be a [x, y] pair");
    return {j[0].get<double>(), j[1].get<double>()};
}

cplx parse_complex(const json &j, const std::string &where)
{
    if (j.is_number())
        return {j.get<double>(), 0.0};
    if (j.is_array() && j.size() == 2)
        return {j[0].get<double>(), j[1].get<double>()};
    throw ValidationError("scenario: " + where +
                          " must be a number or a [re, im] pair");
}

ProfileMode parse_profile(const std::string &text, const std::string &where)
{
    if (text == "mirror")
        return ProfileMode::mirror;
    if (text == "random")
        return ProfileMode::random;
    throw ValidationError("scenario: " + where +
                          " must be \"mirror\" or \"random\"");
}

const char *profile_name(ProfileMode mode)
{
    return mode == ProfileMode::mirror ? "mirror" : "random";
}

AxisSpec parse_axis(const json &j, const std::string &where)
{
    if (!j.is_array() || j.size() != 3)
        throw ValidationError("scenario: " + where +
                              " must be [min, max, count]");
    AxisSpec a;
    a.min = j[0].get<double>();
    a.max = j[1].get<double>();
    a.count = j[2].get<std::size_t>();
    return a;
}

template <typename T>
T require(const json &j, const char *key, const std::string &where)
{
    if (!j.contains(key))
        throw ValidationError("scenario: missing key '" + std::string(key) +
                              "' in " + where);
    try
    {
        return j.at(key).get<T>();
    }
    catch (const json::exception &e)
    {
        throw ValidationError("scenario: bad value for '" + std::string(key) +
                              "' in " + where + ": " + e.what());
    }
}

} // namespace

Scenario from_json_string(const std::string &text, const std::string &context)
{
    json j;
    try
    {
        j = json::parse(text);
    }
    catch (const json::parse_error &e)
    {
        throw ValidationError(context + ": JSON parse error: " + e.what());
    }

    Scenario s;
    if (!j.contains("ris") || !j["ris"].is_array())
        throw ValidationError(context + ": top-level 'ris' array is required");
    std::size_t idx = 0;
    for (const json &jr : j["ris"])
    {
        const std::string where = "ris[" + std::to_string(idx) + "]";
        RisSpec spec;
        spec.origin = parse_vec2(jr.contains("origin") ? jr["origin"] : json(),
                                 where + ".origin");
        spec.slope = require<double>(jr, "slope", where);
        spec.length_pixels = require<int>(jr, "length_pixels", where);
        spec.pixel_spacing = require<double>(jr, "pixel_spacing", where);
        spec.side = require<int>(jr, "side", where);
        spec.profile = parse_profile(
            jr.contains("profile") ? jr["profile"].get<std::string>() : "mirror",
            where + ".profile");
        if (jr.contains("seed"))
            spec.seed = jr["seed"].get<std::uint64_t>();
        if (!jr.contains("bs"))
            throw ValidationError("scenario: missing key 'bs' in " + where);
        const json &jb = jr["bs"];
        spec.bs.position = parse_vec2(jb.contains("position") ? jb["position"] : json(),
                                      where + ".bs.position");
        if (jb.contains("pathloss"))
            spec.bs.pathloss = parse_complex(jb["pathloss"], where + ".bs.pathloss");
        if (jb.contains("first_pixel_delay"))
            spec.bs.first_pixel_delay = jb["first_pixel_delay"].get<double>();
        s.ris.push_back(spec);
        ++idx;
    }

    if (!j.contains("pilots"))
        throw ValidationError(context + ": top-level 'pilots' object is required");
    const json &jp = j["pilots"];
    s.pilots.f_start_hz = require<double>(jp, "f_start_hz", "pilots");
    s.pilots.f_stop_hz = require<double>(jp, "f_stop_hz", "pilots");
    s.pilots.f_count = require<std::size_t>(jp, "f_count", "pilots");
    s.pilots.t_span_s = require<double>(jp, "t_span_s", "pilots");
    s.pilots.t_count = require<std::size_t>(jp, "t_count", "pilots");
    s.pilots.tx_power = require<double>(jp, "tx_power", "pilots");

    if (!j.contains("motion"))
        throw ValidationError(context + ": top-level 'motion' object is required");
    s.speed_mps = require<double>(j["motion"], "speed_mps", "motion");
    s.snr_db = require<double>(j, "snr_db", "top level");

    if (!j.contains("grid"))
        throw ValidationError(context + ": top-level 'grid' object is required");
    s.grid.x = parse_axis(j["grid"].contains("x") ? j["grid"]["x"] : json(), "grid.x");
    s.grid.y = parse_axis(j["grid"].contains("y") ? j["grid"]["y"] : json(), "grid.y");

    if (j.contains("ue"))
    {
        std::size_t u = 0;
        for (const json &ju : j["ue"])
            s.ue.push_back(parse_vec2(ju, "ue[" + std::to_string(u++) + "]"));
    }
    s.seed = require<std::uint64_t>(j, "seed", "top level");

    s.validate(false);
    return s;
}

std::string to_json_string(const Scenario &s)
{
    json j;
    j["ris"] = json::array();
    for (const RisSpec &spec : s.ris)
    {
        json jr;
        jr["origin"] = {spec.origin.x, spec.origin.y};
        jr["slope"] = spec.slope;
        jr["length_pixels"] = spec.length_pixels;
        jr["pixel_spacing"] = spec.pixel_spacing;
        jr["side"] = spec.side;
        jr["profile"] = profile_name(spec.profile);
        if (spec.seed)
            jr["seed"] = *spec.seed;
        json jb;
        jb["position"] = {spec.bs.position.x, spec.bs.position.y};
        if (spec.bs.pathloss)
        {
            if (spec.bs.pathloss->imag() == 0.0)
                jb["pathloss"] = spec.bs.pathloss->real();
            else
                jb["pathloss"] = {spec.bs.pathloss->real(), spec.bs.pathloss->imag()};
        }
        if (spec.bs.first_pixel_delay)
            jb["first_pixel_delay"] = *spec.bs.first_pixel_delay;
        jr["bs"] = jb;
        j["ris"].push_back(jr);
    }
    j["pilots"] = {{"f_start_hz", s.pilots.f_start_hz},
                   {"f_stop_hz", s.pilots.f_stop_hz},
                   {"f_count", s.pilots.f_count},
                   {"t_span_s", s.pilots.t_span_s},
                   {"t_count", s.pilots.t_count},
                   {"tx_power", s.pilots.tx_power}};
    j["motion"] = {{"speed_mps", s.speed_mps}};
    j["snr_db"] = s.snr_db;
    j["grid"] = {{"x", {s.grid.x.min, s.grid.x.max, s.grid.x.count}},
                 {"y", {s.grid.y.min, s.grid.y.max, s.grid.y.count}}};
    if (!s.ue.empty())
    {
        json ju = json::array();
        for (const Vec2 &p : s.ue)
            ju.push_back({p.x, p.y});
        j["ue"] = ju;
    }
    j["seed"] = s.seed;
    return j.dump(2) + "\n";
}

Scenario load_scenario(const std::string &path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot open scenario file: " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    if (in.bad())
        throw IoError("error while reading scenario file: " + path);
    return from_json_string(buffer.str(), path);
}

void save_scenario(const Scenario &scenario, const std::string &path)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw IoError("cannot open scenario file for writing: " + path);
    out << to_json_string(scenario);
    if (!out)
        throw IoError("error while writing scenario file: " + path);
}

} // namespace risloc
